// Index schedules (I, f): a set I of forced indices with forced digits f(i).
//
// Indices start at 1. For n >= 1, k(n) is the least k such that {1..k} \ I
// has exactly n elements, lambda_n is the sum of f over I ∩ {1..k(n)}, and
// mu(I,f) = limsup lambda_n / n.

#pragma once

#include "binexp/expansion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace binexp {

class IndexSchedule {
public:
    /// Returns the forced digit at an index, or nullopt for a free index.
    using ForcedFn = std::function<std::optional<Digit>(std::uint64_t)>;

    IndexSchedule(std::string descriptor, ForcedFn forced, std::optional<double> analytic_mu = std::nullopt,
                  std::optional<std::uint64_t> horizon = std::nullopt)
        : descriptor_(std::move(descriptor)), forced_(std::move(forced)), analytic_mu_(analytic_mu), horizon_(horizon) {}

    /// I = {2^n : n >= 1}, f(2^n) = n. mu(I,f) = 0.
    static IndexSchedule powers_of_two() {
        return IndexSchedule(
            "powers-of-two",
            [](std::uint64_t i) -> std::optional<Digit> {
                if (i >= 2 && (i & (i - 1)) == 0) {
                    return static_cast<Digit>(std::countr_zero(i));
                }
                return std::nullopt;
            },
            0.0);
    }

    /// I = {(i^2 + 3i - 2)/2 : i >= 1} = {1, 4, 8, 13, ...}, f = mu * i. mu(I,f) = mu.
    static IndexSchedule quadratic(Digit mu) {
        if (mu < 1) {
            throw std::invalid_argument("quadratic schedule needs mu >= 1");
        }
        return IndexSchedule(
            "quadratic(mu=" + std::to_string(mu) + ")",
            [mu](std::uint64_t t) -> std::optional<Digit> {
                // t = (i^2 + 3i - 2)/2  <=>  8t + 17 = (2i + 3)^2
                const std::uint64_t disc = 8 * t + 17;
                auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(disc)));
                while (r * r > disc) {
                    --r;
                }
                while ((r + 1) * (r + 1) <= disc) {
                    ++r;
                }
                if (r * r != disc || r < 5 || (r - 3) % 2 != 0) {
                    return std::nullopt;
                }
                return static_cast<Digit>(mu * ((r - 3) / 2));
            },
            static_cast<double>(mu));
    }

    /// I = multiples of period, f = value. mu(I,f) = value / (period - 1).
    static IndexSchedule constant(std::uint64_t period, Digit value) {
        if (period < 2) {
            throw std::invalid_argument("constant schedule needs period >= 2 (the complement must be infinite)");
        }
        if (value < 1) {
            throw std::invalid_argument("forced digits must be >= 1");
        }
        return IndexSchedule(
            "constant(period=" + std::to_string(period) + ",value=" + std::to_string(value) + ")",
            [period, value](std::uint64_t i) -> std::optional<Digit> {
                if (i % period == 0) {
                    return value;
                }
                return std::nullopt;
            },
            static_cast<double>(value) / static_cast<double>(period - 1));
    }

    /// Finite list of (index, digit) pairs, strictly increasing in index. Valid up to the
    /// last listed index; queries beyond it throw std::out_of_range.
    static IndexSchedule from_list(std::vector<std::pair<std::uint64_t, Digit>> entries, std::string descriptor = "list") {
        if (entries.empty()) {
            throw std::invalid_argument("schedule list is empty");
        }
        std::uint64_t previous = 0;
        for (const auto &[index, digit] : entries) {
            if (index <= previous) {
                throw std::invalid_argument("schedule indices must be >= 1 and strictly increasing (at index " +
                                            std::to_string(index) + ")");
            }
            if (digit < 1) {
                throw std::invalid_argument("forced digits must be >= 1 (at index " + std::to_string(index) + ")");
            }
            previous = index;
        }
        const std::uint64_t horizon = entries.back().first;
        if (entries.size() == horizon) {
            throw std::invalid_argument("schedule list forces every index up to its horizon; the complement is empty");
        }
        auto table = std::make_shared<const std::map<std::uint64_t, Digit>>(entries.begin(), entries.end());
        return IndexSchedule(
            std::move(descriptor),
            [table](std::uint64_t i) -> std::optional<Digit> {
                if (auto it = table->find(i); it != table->end()) {
                    return it->second;
                }
                return std::nullopt;
            },
            std::nullopt, horizon);
    }

    /// Text lines "index digit"; blank lines and lines starting with '#' are ignored.
    static IndexSchedule parse(std::istream &in, std::string descriptor = "list") {
        std::vector<std::pair<std::uint64_t, Digit>> entries;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') {
                continue;
            }
            std::istringstream fields(line);
            long long index = 0;
            long long digit = 0;
            std::string rest;
            if (!(fields >> index >> digit) || (fields >> rest) || index < 1 || digit < 1) {
                throw std::invalid_argument("schedule line " + std::to_string(line_no) + ": expected \"index digit\" with both >= 1");
            }
            entries.emplace_back(static_cast<std::uint64_t>(index), static_cast<Digit>(digit));
        }
        return from_list(std::move(entries), std::move(descriptor));
    }

    static IndexSchedule load(const std::string &path) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot open schedule file '" + path + "'");
        }
        return parse(in, path);
    }

    std::optional<Digit> forced_digit(std::uint64_t index) const {
        if (index < 1) {
            throw std::invalid_argument("schedule indices start at 1");
        }
        if (horizon_ && index > *horizon_) {
            throw std::out_of_range("schedule '" + descriptor_ + "' is only defined up to index " + std::to_string(*horizon_));
        }
        return forced_(index);
    }

    bool is_forced(std::uint64_t index) const { return forced_digit(index).has_value(); }

    const std::string &descriptor() const noexcept { return descriptor_; }
    std::optional<double> analytic_mu() const noexcept { return analytic_mu_; }
    std::optional<std::uint64_t> horizon() const noexcept { return horizon_; }

private:
    std::string descriptor_;
    ForcedFn forced_;
    std::optional<double> analytic_mu_;
    std::optional<std::uint64_t> horizon_;
};

struct ScheduleProfile {
    std::uint64_t n = 0;
    std::uint64_t k_n = 0;
    std::uint64_t lambda_n = 0;
    double ratio = 0.0;
};

/// Walks indices 1, 2, ... and stops at each free index.
class ScheduleCursor {
public:
    explicit ScheduleCursor(const IndexSchedule &s) : schedule_(&s) {}

    /// Advances to the next free index and returns the profile of the free count reached.
    ScheduleProfile next() {
        while (true) {
            ++index_;
            if (auto f = schedule_->forced_digit(index_)) {
                lambda_ += *f;
                continue;
            }
            ++free_;
            return ScheduleProfile{free_, index_, lambda_, static_cast<double>(lambda_) / static_cast<double>(free_)};
        }
    }

private:
    const IndexSchedule *schedule_;
    std::uint64_t index_ = 0;
    std::uint64_t free_ = 0;
    std::uint64_t lambda_ = 0;
};

inline ScheduleProfile profile_at(const IndexSchedule &s, std::uint64_t n) {
    if (n < 1) {
        throw std::invalid_argument("n must be >= 1");
    }
    ScheduleCursor cursor(s);
    ScheduleProfile p;
    for (std::uint64_t i = 0; i < n; ++i) {
        p = cursor.next();
    }
    return p;
}

inline std::uint64_t k_of(const IndexSchedule &s, std::uint64_t n) { return profile_at(s, n).k_n; }

inline std::uint64_t lambda(const IndexSchedule &s, std::uint64_t n) { return profile_at(s, n).lambda_n; }

struct MuProfile {
    std::vector<ScheduleProfile> rows;  // n = 1..n_max
    double estimate = 0.0;              // sup of lambda_n/n over n in [ceil(n_max/2), n_max]
};

inline MuProfile mu_profile(const IndexSchedule &s, std::uint64_t n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be >= 1");
    }
    MuProfile out;
    out.rows.reserve(n_max);
    ScheduleCursor cursor(s);
    const std::uint64_t window_start = (n_max + 1) / 2;
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        out.rows.push_back(cursor.next());
        if (n >= window_start) {
            out.estimate = std::max(out.estimate, out.rows.back().ratio);
        }
    }
    return out;
}

struct DeviationReport {
    double min_deviation = 0.0;     // min over n of |lambda_n - n mu|
    std::uint64_t argmin_n = 0;     // first n attaining it
    std::vector<std::uint64_t> zero_deviation_n;  // every n with lambda_n == n mu exactly
};

inline DeviationReport bounded_deviation(const IndexSchedule &s, double mu, std::uint64_t n_max) {
    if (n_max < 1) {
        throw std::invalid_argument("n_max must be >= 1");
    }
    DeviationReport out;
    out.min_deviation = INFINITY;
    ScheduleCursor cursor(s);
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        const auto p = cursor.next();
        const double dev = std::fabs(static_cast<double>(p.lambda_n) - static_cast<double>(n) * mu);
        if (dev < out.min_deviation) {
            out.min_deviation = dev;
            out.argmin_n = n;
        }
        if (dev == 0.0) {
            out.zero_deviation_n.push_back(n);
        }
    }
    return out;
}

} // namespace binexp
