// CSV and JSON output schemas.
//
//   samples:        depth,digits,value_num,value_den,midpoint_float,log2_mass
//   local dimension: n,ratio
//   schedule:       n,k_n,lambda_n,ratio
//   report:         JSON object, see to_json(DimensionReport)

#pragma once

#include "binexp/dimension.hpp"
#include "binexp/estimator.hpp"
#include "binexp/report.hpp"
#include "binexp/sampler.hpp"
#include "binexp/schedule.hpp"

#include "json.hpp"

#include <cstdio>
#include <ostream>
#include <span>
#include <string>

namespace binexp {

/// Shortest round-trip decimal form; locale independent.
inline std::string format_real(double x) {
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, x);
        if (std::strtod(buf, nullptr) == x) {
            break;
        }
    }
    return buf;
}

inline void write_samples_csv(std::ostream &out, std::span<const SampleRecord> records) {
    out << "depth,digits,value_num,value_den,midpoint_float,log2_mass\n";
    for (const auto &r : records) {
        out << r.digits.size() << ',' << r.digits.str() << ',' << r.value.numerator().str() << ','
            << r.value.denominator().str() << ',' << format_real(r.midpoint) << ',' << format_real(r.log2_mass) << '\n';
    }
}

inline void write_local_dimension_csv(std::ostream &out, const LocalDimSequence &seq, std::uint64_t stride = 1) {
    out << "n,ratio\n";
    for (std::size_t i = 0; i < seq.n.size(); ++i) {
        if (seq.n[i] % stride == 0 || i + 1 == seq.n.size()) {
            out << seq.n[i] << ',' << format_real(seq.ratio[i]) << '\n';
        }
    }
}

inline void write_schedule_csv(std::ostream &out, const MuProfile &profile) {
    out << "n,k_n,lambda_n,ratio\n";
    for (const auto &row : profile.rows) {
        out << row.n << ',' << row.k_n << ',' << row.lambda_n << ',' << format_real(row.ratio) << '\n';
    }
}

inline nlohmann::ordered_json to_json(const DimValue &d) {
    nlohmann::ordered_json j;
    j["family"] = std::string(to_string(d.family));
    if (d.family != Family::gamma_limit) {
        j["M"] = d.M;
    }
    if (d.family == Family::gamma_M || d.family == Family::gamma_limit) {
        j["mu"] = d.mu;
    }
    j["root"] = d.root;
    j["value"] = d.value;
    j["bracket"] = {d.lo, d.hi};
    j["tolerance"] = d.tolerance;
    j["residual"] = residual(d);
    return j;
}

inline nlohmann::ordered_json to_json(const DimensionReport &r) {
    nlohmann::ordered_json j;
    j["family"] = to_string(r.family);
    nlohmann::ordered_json params;
    params["M"] = r.M;
    if (r.family == SetFamily::B_bar) {
        params["mu"] = r.mu;
    }
    if (!r.schedule.empty()) {
        params["schedule"] = r.schedule;
    }
    params["measure"] = r.measure;
    params["depth"] = r.depth;
    j["params"] = params;
    j["D_theory"] = r.D_theory;
    j["D_empirical"] = r.D_empirical;
    j["delta"] = r.delta;
    j["n_samples"] = r.n_samples;
    j["seed"] = r.seed;
    j["k_range"] = {r.k_range.k_min, r.k_range.k_max};
    j["raw_slope"] = r.raw_slope;
    j["excluded_pairs"] = r.excluded_pairs;
    j["box_counts"] = r.boxes.counts;
    j["regression_rms"] = r.boxes.residual;
    return j;
}

} // namespace binexp
