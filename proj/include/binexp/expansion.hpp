// Base-two expansion x = sum_i 2^-(d_1 + ... + d_i) of x in (0,1].
//
// The digit of x is the branch index n of the expanding map
//   T x = 2^n x - 1   on   (2^-n, 2^-(n-1)],
// and the digits of x are the branch indices along the orbit x, Tx, T^2 x, ...
// Branches are left-open and right-closed, so x = 1/2 has first digit 2 and T
// maps (0,1] onto (0,1]. On a rational p/q the map keeps the denominator q,
// so expanding n digits costs O(n) operations on numbers bounded by q.

#pragma once

#include "binexp/exact_real.hpp"

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace binexp {

using Digit = std::uint32_t;

/// Finite digit sequence (d_1, ..., d_n), every entry >= 1.
class DigitPrefix {
public:
    DigitPrefix() = default;

    explicit DigitPrefix(std::vector<Digit> digits) : digits_(std::move(digits)) {
        for (Digit d : digits_) {
            if (d < 1) {
                throw std::invalid_argument("digits must be >= 1");
            }
        }
    }

    DigitPrefix(std::initializer_list<Digit> digits) : DigitPrefix(std::vector<Digit>(digits)) {}

    std::size_t size() const noexcept { return digits_.size(); }
    bool empty() const noexcept { return digits_.empty(); }
    Digit operator[](std::size_t i) const { return digits_[i]; }
    std::span<const Digit> digits() const noexcept { return digits_; }
    auto begin() const noexcept { return digits_.begin(); }
    auto end() const noexcept { return digits_.end(); }

    std::uint64_t digit_sum() const { return std::accumulate(digits_.begin(), digits_.end(), std::uint64_t{0}); }

    std::string str() const {
        std::string out;
        for (std::size_t i = 0; i < digits_.size(); ++i) {
            if (i != 0) {
                out += ' ';
            }
            out += std::to_string(digits_[i]);
        }
        return out;
    }

    friend bool operator==(const DigitPrefix &, const DigitPrefix &) = default;

private:
    std::vector<Digit> digits_;
};

/// The half-open interval (left, left + 2^-length_exponent].
struct CylinderInterval {
    Dyadic left;
    std::uint64_t length_exponent = 0;

    Dyadic length() const { return Dyadic::power_of_two(length_exponent); }
    Dyadic right() const { return left + length(); }

    bool contains(const ExactReal &x) const {
        return compare(left, x) == std::strong_ordering::less && compare(right(), x) != std::strong_ordering::less;
    }
};

namespace detail {

// Branch index of p/q, i.e. the least n >= 1 with p * 2^n > q. Requires 0 < p <= q.
inline Digit branch_of(const Integer &p, const Integer &q) {
    const auto gap = bit_length(q) - bit_length(p);
    if (gap >= 1 && Integer(p << gap) > q) {
        return static_cast<Digit>(gap);
    }
    return static_cast<Digit>(gap + 1);
}

inline void require_nonempty(const DigitPrefix &p) {
    if (p.empty()) {
        throw std::invalid_argument("empty digit prefix has no cylinder; use the interval (0,1]");
    }
}

// Numerator over 2^S of sum_i 2^-(d_1+...+d_i), with S the digit sum.
inline Integer prefix_numerator(std::span<const Digit> digits, std::uint64_t total) {
    Integer numerator = 0;
    std::uint64_t partial = 0;
    for (Digit d : digits) {
        partial += d;
        boost::multiprecision::bit_set(numerator, total - partial);
    }
    return numerator;
}

} // namespace detail

inline Digit first_digit(const ExactReal &x) { return detail::branch_of(x.numerator(), x.denominator()); }

inline ExactReal apply_T(const ExactReal &x) {
    const Digit n = first_digit(x);
    return ExactReal(Integer(x.numerator() << n) - x.denominator(), x.denominator());
}

inline DigitPrefix digit_prefix(const ExactReal &x, std::size_t n) {
    std::vector<Digit> digits;
    digits.reserve(n);
    Integer p = x.numerator();
    const Integer &q = x.denominator();
    for (std::size_t i = 0; i < n; ++i) {
        const Digit d = detail::branch_of(p, q);
        digits.push_back(d);
        p <<= d;
        p -= q;
    }
    return DigitPrefix(std::move(digits));
}

/// Lower endpoint of the cylinder of p as an exact dyadic.
inline Dyadic prefix_dyadic(std::span<const Digit> digits) {
    std::uint64_t total = 0;
    for (Digit d : digits) {
        total += d;
    }
    return Dyadic(detail::prefix_numerator(digits, total), total);
}

inline ExactReal prefix_value(const DigitPrefix &p) {
    detail::require_nonempty(p);
    const std::uint64_t total = p.digit_sum();
    // The last term is 2^-total, so the numerator is odd and the fraction is reduced.
    return ExactReal::from_reduced(detail::prefix_numerator(p.digits(), total), Integer(1) << total);
}

inline CylinderInterval cylinder(const DigitPrefix &p) {
    detail::require_nonempty(p);
    return CylinderInterval{prefix_dyadic(p.digits()), p.digit_sum()};
}

/// Inverse branch T_i(y) = (y + 1) / 2^i.
inline ExactReal branch_inverse(const ExactReal &y, Digit i) {
    if (i < 1) {
        throw std::invalid_argument("branch index must be >= 1");
    }
    return ExactReal(y.numerator() + y.denominator(), Integer(y.denominator() << i));
}

} // namespace binexp
