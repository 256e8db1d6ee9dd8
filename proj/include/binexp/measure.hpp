// Product digit measures on (0,1].
//
// Each measure draws the digit at every index independently. Forced indices of
// a schedule carry f(i) with probability one; every free index shares one digit
// law:
//
//   lebesgue        P(j) = 2^-j,           j >= 1
//   nu_A(M)         P(j) = 2^(-j D),       j >= M,    D = alpha(M).value
//   nu_B(M)         P(j) = 2^(-j D),       1 <= j <= M, D = beta(M).value
//   nu_hat(M, s)    nu_B(M) on free indices of s
//   nu_bar(M,mu,s)  P(j) = 2^(-D (mu + j)), 1 <= j <= M, D = gamma_M(mu, M).value
//
// Uniform x in (0,1] has i.i.d. digits with law 2^-j: every branch
// (2^-j, 2^-(j-1)] has length 2^-j and T maps it affinely onto (0,1].

#pragma once

#include "binexp/dimension.hpp"
#include "binexp/expansion.hpp"
#include "binexp/rng.hpp"
#include "binexp/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace binexp {

/// Residual tail mass below which unbounded digit laws are truncated.
inline constexpr double kTailCutoff = 1e-9;

enum class MeasureKind { lebesgue, nu_A, nu_B, nu_hat, nu_bar };

inline std::string to_string(MeasureKind k) {
    switch (k) {
    case MeasureKind::lebesgue: return "lebesgue";
    case MeasureKind::nu_A: return "nu_A";
    case MeasureKind::nu_B: return "nu_B";
    case MeasureKind::nu_hat: return "nu_hat";
    case MeasureKind::nu_bar: return "nu_bar";
    }
    return "?";
}

/// Digit law on {first, ..., first + size - 1}, renormalized to total mass one.
class DigitLaw {
public:
    DigitLaw() = default;

    DigitLaw(Digit first, std::vector<double> raw_weights) : first_(first) {
        if (raw_weights.empty()) {
            throw std::invalid_argument("digit law needs at least one digit");
        }
        raw_mass_ = 0.0;
        for (double w : raw_weights) {
            raw_mass_ += w;
        }
        prob_.reserve(raw_weights.size());
        log2_prob_.reserve(raw_weights.size());
        cdf_.reserve(raw_weights.size());
        double acc = 0.0;
        for (double w : raw_weights) {
            prob_.push_back(w / raw_mass_);
            log2_prob_.push_back(std::log2(w) - std::log2(raw_mass_));
            acc += prob_.back();
            cdf_.push_back(acc);
        }
    }

    Digit first() const noexcept { return first_; }
    Digit last() const noexcept { return first_ + static_cast<Digit>(prob_.size()) - 1; }

    /// Total weight before renormalization.
    double raw_mass() const noexcept { return raw_mass_; }

    double probability(Digit j) const {
        return (j < first_ || j > last()) ? 0.0 : prob_[j - first_];
    }

    double log2_probability(Digit j) const {
        return (j < first_ || j > last()) ? -INFINITY : log2_prob_[j - first_];
    }

    double total() const {
        double s = 0.0;
        for (double p : prob_) {
            s += p;
        }
        return s;
    }

    Digit sample(std::mt19937_64 &rng) const {
        const double u = uniform01(rng) * cdf_.back();
        const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        const auto pos = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
        return first_ + static_cast<Digit>(pos);
    }

private:
    Digit first_ = 1;
    double raw_mass_ = 1.0;
    std::vector<double> prob_;
    std::vector<double> log2_prob_;
    std::vector<double> cdf_;
};

class MeasureSpec {
public:
    static MeasureSpec lebesgue() {
        MeasureSpec m(MeasureKind::lebesgue);
        m.dimension_ = 1.0;
        return m;
    }

    static MeasureSpec nu_A(int M) {
        MeasureSpec m(MeasureKind::nu_A);
        m.M_ = M;
        m.dimension_ = alpha(M).value;
        // tail beyond j is 2^(-D (j+1)) / (1 - 2^-D)
        const double D = m.dimension_;
        std::vector<double> w;
        for (Digit j = static_cast<Digit>(M);; ++j) {
            w.push_back(std::exp2(-D * j));
            if (std::exp2(-D * (j + 1.0)) / (1.0 - std::exp2(-D)) < kTailCutoff) {
                break;
            }
        }
        m.law_ = DigitLaw(static_cast<Digit>(M), std::move(w));
        return m;
    }

    static MeasureSpec nu_B(int M) {
        MeasureSpec m(MeasureKind::nu_B);
        m.M_ = M;
        m.dimension_ = beta(M).value;
        m.law_ = bounded_law(M, m.dimension_, 0.0);
        return m;
    }

    static MeasureSpec nu_hat(int M, IndexSchedule schedule) {
        MeasureSpec m = nu_B(M);
        m.kind_ = MeasureKind::nu_hat;
        m.schedule_ = std::move(schedule);
        return m;
    }

    static MeasureSpec nu_bar(int M, double mu, IndexSchedule schedule) {
        MeasureSpec m(MeasureKind::nu_bar);
        m.M_ = M;
        m.mu_ = mu;
        m.dimension_ = gamma_M(mu, M).value;
        m.law_ = bounded_law(M, m.dimension_, mu);
        m.schedule_ = std::move(schedule);
        return m;
    }

    MeasureKind kind() const noexcept { return kind_; }
    int M() const noexcept { return M_; }
    double mu() const noexcept { return mu_; }

    /// The dimension D defining the weights (1 for Lebesgue).
    double dimension() const noexcept { return dimension_; }

    const std::optional<IndexSchedule> &schedule() const noexcept { return schedule_; }

    /// Largest digit with positive probability at a free index, if bounded.
    std::optional<Digit> tail_cutoff() const {
        if (kind_ == MeasureKind::lebesgue) {
            return std::nullopt;
        }
        return law_.last();
    }

    /// Free-index digit law. Lebesgue's law is unbounded and has no table.
    const DigitLaw &free_law() const {
        if (kind_ == MeasureKind::lebesgue) {
            throw std::logic_error("lebesgue digit law is sampled exactly and has no table");
        }
        return law_;
    }

    std::optional<Digit> forced(std::uint64_t index) const {
        return schedule_ ? schedule_->forced_digit(index) : std::nullopt;
    }

    /// w(i, j): probability of digit j at index i.
    double weight(std::uint64_t index, Digit j) const {
        if (auto f = forced(index)) {
            return j == *f ? 1.0 : 0.0;
        }
        if (kind_ == MeasureKind::lebesgue) {
            return j >= 1 ? std::exp2(-static_cast<double>(j)) : 0.0;
        }
        return law_.probability(j);
    }

    double log2_weight(std::uint64_t index, Digit j) const {
        if (auto f = forced(index)) {
            return j == *f ? 0.0 : -INFINITY;
        }
        if (kind_ == MeasureKind::lebesgue) {
            return j >= 1 ? -static_cast<double>(j) : -INFINITY;
        }
        return law_.log2_probability(j);
    }

    Digit sample(std::uint64_t index, std::mt19937_64 &rng) const {
        if (auto f = forced(index)) {
            return *f;
        }
        return sample_free(rng);
    }

    /// A digit from the free-index law.
    Digit sample_free(std::mt19937_64 &rng) const {
        if (kind_ == MeasureKind::lebesgue) {
            return geometric_half(rng);
        }
        return law_.sample(rng);
    }

    std::string describe() const {
        std::string out = to_string(kind_);
        if (kind_ != MeasureKind::lebesgue) {
            out += "(M=" + std::to_string(M_);
            if (kind_ == MeasureKind::nu_bar) {
                std::ostringstream mu;
                mu << mu_;
                out += ",mu=" + mu.str();
            }
            if (schedule_) {
                out += "," + schedule_->descriptor();
            }
            out += ")";
        }
        return out;
    }

private:
    explicit MeasureSpec(MeasureKind kind) : kind_(kind) {}

    static DigitLaw bounded_law(int M, double D, double mu) {
        std::vector<double> w;
        for (int j = 1; j <= M; ++j) {
            w.push_back(std::exp2(-D * (mu + j)));
        }
        return DigitLaw(1, std::move(w));
    }

    MeasureKind kind_;
    int M_ = 0;
    double mu_ = 0.0;
    double dimension_ = 1.0;
    DigitLaw law_;
    std::optional<IndexSchedule> schedule_;
};

} // namespace binexp
