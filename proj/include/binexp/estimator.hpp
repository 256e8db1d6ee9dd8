// Empirical dimension estimates.
//
// box_count regresses log2 N_k on k, where N_k is the number of occupied dyadic
// boxes (a 2^-k, (a+1) 2^-k]. Every family sampled here is built from a
// self-similar set with the open set condition, where box and Hausdorff
// dimension agree, so the slope estimates the closed-form values.
//
// local_dimension follows the ratio log2 mu(V) / log2 |V| along the cylinders
// of one sampled point; cover_sum evaluates the D-dimensional cost of the
// depth-n cover by hatted cylinders, 2^(-D lambda_n) (sum_{j<=M} 2^(-j D))^n.

#pragma once

#include "binexp/dimension.hpp"
#include "binexp/measure.hpp"
#include "binexp/sampler.hpp"
#include "binexp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace binexp {

inline constexpr int kMaxScale = 40;

struct BoxCountResult {
    std::vector<int> scales;
    std::vector<std::uint64_t> counts;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;   // RMS of the regression
    bool saturated = false;  // N_{k_max} > sample count / 10
};

namespace detail {

inline void require_points(std::span<const double> points) {
    if (points.empty()) {
        throw std::invalid_argument("box counting needs at least one point");
    }
    for (double x : points) {
        if (!(x > 0.0 && x <= 1.0)) {
            throw std::domain_error("box counting points must lie in (0,1]");
        }
    }
}

inline void require_scales(int k_min, int k_max) {
    if (k_min < 1 || k_min >= k_max || k_max > kMaxScale) {
        throw std::invalid_argument("scale range must satisfy 1 <= k_min < k_max <= " + std::to_string(kMaxScale));
    }
}

// Occupied boxes at every scale in [k_min, k_max] from sorted points.
inline std::vector<std::uint64_t> occupied_boxes(const std::vector<double> &sorted, int k_min, int k_max) {
    std::vector<std::uint64_t> counts;
    for (int k = k_min; k <= k_max; ++k) {
        std::uint64_t n = 0;
        std::uint64_t last = 0;
        for (double x : sorted) {
            // index of the left-open box containing x
            const auto box = static_cast<std::uint64_t>(std::ceil(std::ldexp(x, k))) - 1;
            if (n == 0 || box != last) {
                ++n;
                last = box;
            }
        }
        counts.push_back(n);
    }
    return counts;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

inline LineFit least_squares(std::span<const double> xs, std::span<const double> ys) {
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    LineFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss += r * r;
    }
    fit.rms = std::sqrt(ss / n);
    return fit;
}

inline double clamp_unit(double slope) {
    constexpr double slack = 1e-9;
    if (slope < 0.0 && slope > -slack) {
        return 0.0;
    }
    if (slope > 1.0 && slope < 1.0 + slack) {
        return 1.0;
    }
    return slope;
}

} // namespace detail

inline BoxCountResult box_count(std::span<const double> points, int k_min, int k_max) {
    detail::require_points(points);
    detail::require_scales(k_min, k_max);
    std::vector<double> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());

    BoxCountResult out;
    out.counts = detail::occupied_boxes(sorted, k_min, k_max);
    std::vector<double> xs;
    std::vector<double> ys;
    for (int k = k_min; k <= k_max; ++k) {
        out.scales.push_back(k);
        xs.push_back(k);
        ys.push_back(std::log2(static_cast<double>(out.counts[static_cast<std::size_t>(k - k_min)])));
    }
    const auto fit = detail::least_squares(xs, ys);
    out.slope = detail::clamp_unit(fit.slope);
    out.intercept = fit.intercept;
    out.residual = fit.rms;
    out.saturated = static_cast<double>(out.counts.back()) > static_cast<double>(points.size()) / 10.0;
    return out;
}

struct ScaleRange {
    int k_min = 0;
    int k_max = 0;
};

/// Scales between the first with at least min_boxes occupied boxes and the last whose
/// box count stays at or below saturation * sample count.
inline ScaleRange select_scale_range(std::span<const double> points, std::uint64_t min_boxes = 16,
                                     double saturation = 0.1) {
    detail::require_points(points);
    std::vector<double> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end());
    const auto counts = detail::occupied_boxes(sorted, 1, kMaxScale);
    const double cap = saturation * static_cast<double>(points.size());
    ScaleRange r;
    for (int k = 1; k <= kMaxScale; ++k) {
        const auto n = counts[static_cast<std::size_t>(k - 1)];
        if (r.k_min == 0 && n >= min_boxes) {
            r.k_min = k;
        }
        if (static_cast<double>(n) <= cap) {
            r.k_max = k;
        }
    }
    if (r.k_min == 0 || r.k_max < r.k_min + 2) {
        throw std::runtime_error("no usable box-counting range: need more samples or a larger set");
    }
    return r;
}

/// Slope over the scale pairs (k, k+1) marked usable, with one intercept per run of
/// consecutive usable pairs. usable[k - k_min] refers to the pair (k, k+1).
inline BoxCountResult box_count_gapped(std::span<const double> points, int k_min, int k_max,
                                       const std::vector<bool> &usable) {
    BoxCountResult out = box_count(points, k_min, k_max);
    if (usable.size() != static_cast<std::size_t>(k_max - k_min)) {
        throw std::invalid_argument("usable-pair mask must have k_max - k_min entries");
    }
    double sxy = 0.0;
    double sxx = 0.0;
    std::size_t used_pairs = 0;
    std::size_t a = 0;
    while (a < usable.size()) {
        if (!usable[a]) {
            ++a;
            continue;
        }
        std::size_t b = a;
        while (b < usable.size() && usable[b]) {
            ++b;
        }
        // run covers scales k_min + a .. k_min + b
        std::vector<double> xs;
        std::vector<double> ys;
        for (std::size_t i = a; i <= b; ++i) {
            xs.push_back(static_cast<double>(k_min) + static_cast<double>(i));
            ys.push_back(std::log2(static_cast<double>(out.counts[i])));
        }
        const auto fit = detail::least_squares(xs, ys);
        double mx = 0.0;
        for (double x : xs) {
            mx += x;
        }
        mx /= static_cast<double>(xs.size());
        double run_sxx = 0.0;
        for (double x : xs) {
            run_sxx += (x - mx) * (x - mx);
        }
        sxy += fit.slope * run_sxx;
        sxx += run_sxx;
        used_pairs += b - a;
        a = b;
    }
    if (used_pairs == 0) {
        throw std::runtime_error("every scale pair is excluded; no slope to fit");
    }
    out.slope = detail::clamp_unit(sxy / sxx);
    return out;
}

/// share[k - 1], k = 1..kMaxScale: fraction of draws for which refining from 2^-k to
/// 2^-(k+1) falls inside a forced digit, i.e. S_{i-1} <= k < S_i for a forced index i.
inline std::vector<double> forced_scale_share(const MeasureSpec &spec, std::size_t depth, std::size_t count,
                                              std::uint64_t seed, SamplerOptions opts = {}) {
    std::vector<std::uint64_t> masks(count, 0);
    std::vector<bool> forced(depth + 1, false);
    for (std::size_t i = 1; i <= depth; ++i) {
        forced[i] = spec.forced(i).has_value();
    }
    for_each_draw(
        spec, depth, count, seed,
        [&](std::size_t t, std::span<const Digit> d) {
            std::uint64_t mask = 0;
            std::uint64_t before = 0;
            for (std::size_t i = 1; i <= d.size() && before < static_cast<std::uint64_t>(kMaxScale); ++i) {
                const std::uint64_t after = before + d[i - 1];
                if (forced[i]) {
                    for (std::uint64_t k = std::max<std::uint64_t>(before, 1); k < after && k <= kMaxScale; ++k) {
                        mask |= std::uint64_t{1} << k;
                    }
                }
                before = after;
            }
            masks[t] = mask;
        },
        opts);
    std::vector<double> share(kMaxScale, 0.0);
    for (int k = 1; k <= kMaxScale; ++k) {
        std::uint64_t hits = 0;
        for (auto m : masks) {
            hits += (m >> k) & 1u;
        }
        share[static_cast<std::size_t>(k - 1)] = static_cast<double>(hits) / static_cast<double>(count);
    }
    return share;
}

struct LocalDimSequence {
    std::vector<std::uint64_t> n;  // number of free digits
    std::vector<double> ratio;     // log2 mass / log2 length of the hatted cylinder
    double limit_estimate = 0.0;   // ratio at the largest n
};

/// Ratios along the cylinders of one record whose digits were drawn from spec. The
/// n-th entry uses the prefix of length k(n), so forced digits enter the length only.
inline LocalDimSequence local_dimension(const SampleRecord &record, const MeasureSpec &spec) {
    LocalDimSequence out;
    double log2_mass = 0.0;
    std::uint64_t digit_sum = 0;
    std::uint64_t free_count = 0;
    const auto digits = record.digits.digits();
    for (std::size_t i = 1; i <= digits.size(); ++i) {
        const Digit d = digits[i - 1];
        const double w = spec.log2_weight(i, d);
        if (!std::isfinite(w)) {
            throw std::invalid_argument("record digit " + std::to_string(d) + " at index " + std::to_string(i) +
                                        " has zero mass under " + spec.describe());
        }
        digit_sum += d;
        if (spec.forced(i)) {
            continue;
        }
        log2_mass += w;
        ++free_count;
        out.n.push_back(free_count);
        out.ratio.push_back(log2_mass / -static_cast<double>(digit_sum));
    }
    if (out.ratio.empty()) {
        throw std::invalid_argument("record has no free digits");
    }
    out.limit_estimate = out.ratio.back();
    return out;
}

/// Depth of a record that holds exactly n free digits under spec.
inline std::size_t depth_for_free_digits(const MeasureSpec &spec, std::uint64_t n) {
    if (const auto &s = spec.schedule()) {
        return static_cast<std::size_t>(k_of(*s, n));
    }
    return static_cast<std::size_t>(n);
}

struct CoverSum {
    double log2_value = 0.0;
    std::uint64_t lambda_n = 0;
    double value() const { return std::exp2(log2_value); }
};

/// sum over free digit words s in {1..M}^n of |V_hat(s)|^D = 2^(-D lambda_n) (sum_j 2^(-j D))^n.
inline CoverSum cover_sum(int M, const std::optional<IndexSchedule> &schedule, double D, std::uint64_t n) {
    if (M < 2) {
        throw std::invalid_argument("M must be >= 2");
    }
    if (!(D > 0.0 && D <= 1.0)) {
        throw std::invalid_argument("D must lie in (0,1]");
    }
    if (n < 1) {
        throw std::invalid_argument("n must be >= 1");
    }
    CoverSum out;
    out.lambda_n = schedule ? lambda(*schedule, n) : 0;
    double weight_sum = 0.0;
    for (int j = 1; j <= M; ++j) {
        weight_sum += std::exp2(-D * j);
    }
    out.log2_value = -D * static_cast<double>(out.lambda_n) + static_cast<double>(n) * std::log2(weight_sum);
    return out;
}

} // namespace binexp
