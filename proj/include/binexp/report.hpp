// Empirical-versus-closed-form dimension reports for the sampled set families.

#pragma once

#include "binexp/dimension.hpp"
#include "binexp/estimator.hpp"
#include "binexp/measure.hpp"
#include "binexp/rng.hpp"
#include "binexp/sampler.hpp"
#include "binexp/schedule.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace binexp {

/// A_M, B_M, B_M(I,f) with mu(I,f) = 0 (sampled from nu_hat), and B_M(I,f) with
/// mu(I,f) > 0 (sampled from nu_bar).
enum class SetFamily { A, B, B_hat, B_bar };

inline std::string to_string(SetFamily f) {
    switch (f) {
    case SetFamily::A: return "A";
    case SetFamily::B: return "B";
    case SetFamily::B_hat: return "B_hat";
    case SetFamily::B_bar: return "B_bar";
    }
    return "?";
}

inline SetFamily parse_family(const std::string &name) {
    if (name == "A") return SetFamily::A;
    if (name == "B") return SetFamily::B;
    if (name == "B_hat" || name == "Bhat") return SetFamily::B_hat;
    if (name == "B_bar" || name == "Bbar") return SetFamily::B_bar;
    throw std::invalid_argument("unknown set family '" + name + "' (expected A, B, B_hat or B_bar)");
}

struct ReportRequest {
    SetFamily family = SetFamily::B;
    int M = 2;
    double mu = 0.0;                        // B_bar only
    std::optional<IndexSchedule> schedule;  // default: powers-of-two for B_hat, quadratic(mu) for B_bar
    std::size_t count = 100000;
    std::size_t depth = 60;
    std::uint64_t seed = kDefaultSeed;
    unsigned threads = 0;
    std::optional<ScaleRange> scales;       // chosen from the data when empty
    double forced_share_limit = 0.01;       // B_hat: drop scale pairs inside forced digits more often than this
};

struct DimensionReport {
    SetFamily family = SetFamily::B;
    int M = 0;
    double mu = 0.0;
    std::string schedule;
    std::string measure;
    DimValue theory;
    double D_theory = 0.0;
    double D_empirical = 0.0;
    double delta = 0.0;
    double raw_slope = 0.0;  // plain regression over the whole range
    std::size_t n_samples = 0;
    std::size_t depth = 0;
    std::uint64_t seed = 0;
    ScaleRange k_range;
    std::vector<int> excluded_pairs;  // k such that the pair (k, k+1) was left out
    BoxCountResult boxes;
};

inline MeasureSpec report_measure(const ReportRequest &req) {
    switch (req.family) {
    case SetFamily::A: return MeasureSpec::nu_A(req.M);
    case SetFamily::B: return MeasureSpec::nu_B(req.M);
    case SetFamily::B_hat: {
        auto s = req.schedule ? *req.schedule : IndexSchedule::powers_of_two();
        if (s.analytic_mu() && *s.analytic_mu() != 0.0) {
            throw std::invalid_argument("B_hat needs a schedule with mu(I,f) = 0; use B_bar for '" + s.descriptor() + "'");
        }
        return MeasureSpec::nu_hat(req.M, std::move(s));
    }
    case SetFamily::B_bar: {
        if (req.schedule) {
            return MeasureSpec::nu_bar(req.M, req.mu, *req.schedule);
        }
        const double whole = std::round(req.mu);
        if (req.mu < 1.0 || whole != req.mu) {
            throw std::invalid_argument("the built-in quadratic schedule needs an integer mu >= 1");
        }
        return MeasureSpec::nu_bar(req.M, req.mu, IndexSchedule::quadratic(static_cast<Digit>(whole)));
    }
    }
    throw std::invalid_argument("unknown set family");
}

inline DimensionReport dimension_report(const ReportRequest &req) {
    const MeasureSpec spec = report_measure(req);
    DimensionReport out;
    out.family = req.family;
    out.M = req.M;
    out.mu = req.family == SetFamily::B_bar ? req.mu : 0.0;
    out.schedule = spec.schedule() ? spec.schedule()->descriptor() : "";
    out.measure = spec.describe();
    switch (req.family) {
    case SetFamily::A: out.theory = alpha(req.M); break;
    case SetFamily::B:
    case SetFamily::B_hat: out.theory = beta(req.M); break;
    case SetFamily::B_bar: out.theory = gamma_M(req.mu, req.M); break;
    }
    out.D_theory = out.theory.value;

    // every cylinder must sit inside one box at the finest scale, with 6 bits to spare
    const std::size_t min_digit = req.family == SetFamily::A ? static_cast<std::size_t>(req.M) : 1;
    out.depth = std::max(req.depth, (kMaxScale + 6 + min_digit - 1) / min_digit);
    out.n_samples = req.count;
    out.seed = req.seed;
    const SamplerOptions opts{req.threads};

    const auto points = draw_midpoints(spec, out.depth, req.count, req.seed, opts);
    out.k_range = req.scales ? *req.scales : select_scale_range(points);
    out.boxes = box_count(points, out.k_range.k_min, out.k_range.k_max);
    out.raw_slope = out.boxes.slope;
    out.D_empirical = out.raw_slope;

    if (req.family == SetFamily::B_hat) {
        const auto share = forced_scale_share(spec, out.depth, req.count, req.seed, opts);
        std::vector<bool> usable;
        for (int k = out.k_range.k_min; k < out.k_range.k_max; ++k) {
            const bool ok = share[static_cast<std::size_t>(k - 1)] <= req.forced_share_limit;
            usable.push_back(ok);
            if (!ok) {
                out.excluded_pairs.push_back(k);
            }
        }
        out.D_empirical = box_count_gapped(points, out.k_range.k_min, out.k_range.k_max, usable).slope;
    }
    out.delta = std::fabs(out.D_empirical - out.D_theory);
    return out;
}

} // namespace binexp
