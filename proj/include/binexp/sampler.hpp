// Sampling points of digit-constrained sets by drawing digit sequences.
//
// A draw picks the digits d_1..d_depth independently from a MeasureSpec and
// represents the point by its depth-n cylinder: the exact lower endpoint
// prefix_value(d), the float midpoint c + 2^-(S+1), and log2 of the cylinder's
// measure. Draws are split into chunks of kChunkSize with one random stream per
// chunk (see rng.hpp), so results do not depend on the thread count.

#pragma once

#include "binexp/expansion.hpp"
#include "binexp/measure.hpp"
#include "binexp/rng.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

namespace binexp {

struct SamplerOptions {
    unsigned threads = 0;  // 0 means std::thread::hardware_concurrency()
};

struct SampleRecord {
    DigitPrefix digits;
    ExactReal value = ExactReal::one();  // prefix_value(digits), the cylinder's lower endpoint
    double midpoint = 0.0;
    double log2_mass = 0.0;
};

namespace detail {

inline unsigned worker_count(unsigned requested, std::size_t chunks) {
    unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(chunks, 1)));
}

inline void require_draw_args(std::size_t depth, std::size_t count) {
    if (depth < 1) {
        throw std::invalid_argument("depth must be >= 1");
    }
    if (count < 1) {
        throw std::invalid_argument("count must be >= 1");
    }
}

} // namespace detail

/// Cylinder midpoint c + 2^-(S+1) in double precision.
inline double cylinder_midpoint(std::span<const Digit> digits) {
    double x = 0.0;
    std::int64_t partial = 0;
    for (Digit d : digits) {
        partial += d;
        if (partial > 1100) {
            break;
        }
        x += std::ldexp(1.0, static_cast<int>(-partial));
    }
    return partial > 1100 ? x : x + std::ldexp(1.0, static_cast<int>(-partial - 1));
}

/// Calls visit(draw_index, digits) for every draw. Calls for different draws may run
/// concurrently; each draw is visited exactly once.
template <class Visitor>
void for_each_draw(const MeasureSpec &spec, std::size_t depth, std::size_t count, std::uint64_t seed, Visitor &&visit,
                   SamplerOptions opts = {}) {
    detail::require_draw_args(depth, count);
    if (const auto &s = spec.schedule(); s && s->horizon() && depth > *s->horizon()) {
        throw std::out_of_range("depth " + std::to_string(depth) + " exceeds the schedule horizon " +
                                std::to_string(*s->horizon()));
    }
    // Forced digits are looked up once per run.
    std::vector<Digit> forced(depth + 1, 0);
    for (std::size_t i = 1; i <= depth; ++i) {
        if (auto f = spec.forced(i)) {
            forced[i] = *f;
        }
    }
    const std::size_t chunks = (count + kChunkSize - 1) / kChunkSize;
    const unsigned workers = detail::worker_count(opts.threads, chunks);
    std::atomic<std::size_t> next_chunk{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&]() {
        std::vector<Digit> digits(depth);
        try {
            for (std::size_t c = next_chunk++; c < chunks; c = next_chunk++) {
                auto rng = chunk_stream(seed, c);
                const std::size_t end = std::min(count, (c + 1) * kChunkSize);
                for (std::size_t t = c * kChunkSize; t < end; ++t) {
                    for (std::size_t i = 1; i <= depth; ++i) {
                        digits[i - 1] = forced[i] != 0 ? forced[i] : spec.sample_free(rng);
                    }
                    visit(t, std::span<const Digit>(digits));
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

inline double log2_mass(const MeasureSpec &spec, std::span<const Digit> digits) {
    double acc = 0.0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        acc += spec.log2_weight(i + 1, digits[i]);
    }
    return acc;
}

inline SampleRecord make_record(const MeasureSpec &spec, std::span<const Digit> digits) {
    SampleRecord r;
    r.digits = DigitPrefix(std::vector<Digit>(digits.begin(), digits.end()));
    r.value = prefix_value(r.digits);
    r.midpoint = cylinder_midpoint(digits);
    r.log2_mass = log2_mass(spec, digits);
    return r;
}

inline std::vector<SampleRecord> draw(const MeasureSpec &spec, std::size_t depth, std::size_t count, std::uint64_t seed,
                                      SamplerOptions opts = {}) {
    detail::require_draw_args(depth, count);
    std::vector<SampleRecord> out(count);
    for_each_draw(
        spec, depth, count, seed, [&](std::size_t t, std::span<const Digit> d) { out[t] = make_record(spec, d); }, opts);
    return out;
}

/// Midpoints only; equal to the midpoints of draw() with the same arguments.
inline std::vector<double> draw_midpoints(const MeasureSpec &spec, std::size_t depth, std::size_t count,
                                          std::uint64_t seed, SamplerOptions opts = {}) {
    detail::require_draw_args(depth, count);
    std::vector<double> out(count);
    for_each_draw(
        spec, depth, count, seed, [&](std::size_t t, std::span<const Digit> d) { out[t] = cylinder_midpoint(d); }, opts);
    return out;
}

struct DigitHistogram {
    std::map<Digit, std::uint64_t> counts;
    std::uint64_t total = 0;

    double frequency(Digit j) const {
        const auto it = counts.find(j);
        return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(total);
    }
};

inline DigitHistogram digit_frequency(const MeasureSpec &spec, std::size_t index, std::size_t count,
                                      std::uint64_t seed, SamplerOptions opts = {}) {
    if (index < 1) {
        throw std::invalid_argument("digit index must be >= 1");
    }
    std::vector<Digit> observed(count);
    for_each_draw(
        spec, index, count, seed, [&](std::size_t t, std::span<const Digit> d) { observed[t] = d[index - 1]; }, opts);
    DigitHistogram h;
    h.total = count;
    for (Digit d : observed) {
        ++h.counts[d];
    }
    return h;
}

struct GrowthRow {
    std::size_t depth = 0;
    Digit threshold = 0;
    double fraction = 0.0;  // share of draws with max(d_1..d_depth) >= threshold
};

/// Table of P(max_{i<=n} d_i >= K) under Lebesgue measure, for every n in depths and K in thresholds.
inline std::vector<GrowthRow> max_digit_growth(std::size_t count, std::vector<std::size_t> depths,
                                               std::vector<Digit> thresholds, std::uint64_t seed,
                                               SamplerOptions opts = {}) {
    if (depths.empty() || thresholds.empty()) {
        throw std::invalid_argument("depth and threshold lists must be nonempty");
    }
    std::sort(depths.begin(), depths.end());
    std::sort(thresholds.begin(), thresholds.end());
    if (depths.front() < 1) {
        throw std::invalid_argument("depths must be >= 1");
    }
    const std::size_t max_depth = depths.back();
    // running maximum of each draw at each requested depth
    std::vector<Digit> maxima(count * depths.size());
    for_each_draw(
        MeasureSpec::lebesgue(), max_depth, count, seed,
        [&](std::size_t t, std::span<const Digit> d) {
            Digit running = 0;
            std::size_t next = 0;
            for (std::size_t i = 0; i < d.size() && next < depths.size(); ++i) {
                running = std::max(running, d[i]);
                while (next < depths.size() && depths[next] == i + 1) {
                    maxima[t * depths.size() + next] = running;
                    ++next;
                }
            }
        },
        opts);
    std::vector<GrowthRow> table;
    for (std::size_t a = 0; a < depths.size(); ++a) {
        for (Digit K : thresholds) {
            std::uint64_t hits = 0;
            for (std::size_t t = 0; t < count; ++t) {
                hits += maxima[t * depths.size() + a] >= K ? 1 : 0;
            }
            table.push_back(GrowthRow{depths[a], K, static_cast<double>(hits) / static_cast<double>(count)});
        }
    }
    return table;
}

} // namespace binexp
