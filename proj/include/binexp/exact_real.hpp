// Exact rationals in (0,1] and dyadic rationals for cylinder endpoints.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace binexp {

using Integer = boost::multiprecision::cpp_int;

namespace detail {

inline std::uint64_t bit_length(const Integer &value) {
    return value.is_zero() ? 0 : boost::multiprecision::msb(value) + 1;
}

// Nearest double to num/den for num, den > 0 of arbitrary size.
inline double ratio_to_double(const Integer &num, const Integer &den) {
    if (num.is_zero()) {
        return 0.0;
    }
    const auto shift = static_cast<long>(bit_length(den)) - static_cast<long>(bit_length(num)) + 64;
    Integer scaled = shift >= 0 ? Integer(num << shift) : Integer(num >> -shift);
    scaled /= den;
    return std::ldexp(scaled.convert_to<double>(), static_cast<int>(-shift));
}

inline Integer parse_integer(std::string_view digits) {
    if (digits.empty()) {
        throw std::invalid_argument("empty integer literal");
    }
    for (char ch : digits) {
        if (ch < '0' || ch > '9') {
            throw std::invalid_argument("invalid digit in '" + std::string(digits) + "'");
        }
    }
    // cpp_int reads a leading 0 as an octal prefix
    const auto first = digits.find_first_not_of('0');
    return first == std::string_view::npos ? Integer(0) : Integer(std::string(digits.substr(first)));
}

} // namespace detail

/// A reduced fraction p/q with 0 < p/q <= 1.
class ExactReal {
public:
    ExactReal(Integer numerator, Integer denominator)
        : num_(std::move(numerator)), den_(std::move(denominator)) {
        if (den_ <= 0 || num_ <= 0 || num_ > den_) {
            throw std::domain_error("value " + (den_ == 1 ? num_.str() : num_.str() + "/" + den_.str()) +
                                    " is outside the interval (0,1]");
        }
        const Integer g = boost::multiprecision::gcd(num_, den_);
        if (g != 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    ExactReal(std::int64_t numerator, std::int64_t denominator)
        : ExactReal(Integer(numerator), Integer(denominator)) {}

    static ExactReal one() { return ExactReal(1, 1); }

    /// Trusts the caller that num/den is reduced and in (0,1].
    static ExactReal from_reduced(Integer numerator, Integer denominator) {
        return ExactReal(std::move(numerator), std::move(denominator), reduced_tag{});
    }

    /// Parses "p/q", an integer, or a decimal literal such as "0.3".
    /// Decimal literals are rounded to the nearest multiple of 2^-decimal_bits.
    static ExactReal parse(std::string_view text, unsigned decimal_bits = 64);

    const Integer &numerator() const noexcept { return num_; }
    const Integer &denominator() const noexcept { return den_; }

    double to_double() const { return detail::ratio_to_double(num_, den_); }

    std::string str() const { return den_ == 1 ? num_.str() : num_.str() + "/" + den_.str(); }

    friend bool operator==(const ExactReal &, const ExactReal &) = default;

    friend std::strong_ordering operator<=>(const ExactReal &a, const ExactReal &b) {
        const Integer lhs = a.num_ * b.den_;
        const Integer rhs = b.num_ * a.den_;
        if (lhs < rhs) {
            return std::strong_ordering::less;
        }
        return lhs == rhs ? std::strong_ordering::equal : std::strong_ordering::greater;
    }

private:
    struct reduced_tag {};
    ExactReal(Integer numerator, Integer denominator, reduced_tag)
        : num_(std::move(numerator)), den_(std::move(denominator)) {}

    Integer num_;
    Integer den_;
};

/// mantissa * 2^-exponent with mantissa >= 0; normalized so that the mantissa is odd
/// (or zero with exponent 0).
class Dyadic {
public:
    Dyadic() = default;

    Dyadic(Integer mantissa, std::uint64_t exponent) : mantissa_(std::move(mantissa)), exponent_(exponent) {
        if (mantissa_ < 0) {
            throw std::domain_error("negative dyadic mantissa");
        }
        normalize();
    }

    static Dyadic power_of_two(std::uint64_t exponent) { return Dyadic(Integer(1), exponent); }

    const Integer &mantissa() const noexcept { return mantissa_; }
    std::uint64_t exponent() const noexcept { return exponent_; }
    bool is_zero() const { return mantissa_.is_zero(); }

    Integer denominator() const { return Integer(1) << exponent_; }

    double to_double() const {
        if (is_zero()) {
            return 0.0;
        }
        const auto bits = detail::bit_length(mantissa_);
        const auto drop = bits > 64 ? bits - 64 : 0;
        const Integer top = mantissa_ >> drop;
        const auto e = std::clamp<long long>(static_cast<long long>(drop) - static_cast<long long>(exponent_), -4000, 4000);
        return std::ldexp(top.convert_to<double>(), static_cast<int>(e));
    }

    /// Requires 0 < value <= 1.
    ExactReal to_exact() const { return ExactReal::from_reduced(mantissa_, denominator()); }

    std::string str() const {
        if (is_zero()) {
            return "0";
        }
        return exponent_ == 0 ? mantissa_.str() : mantissa_.str() + "/2^" + std::to_string(exponent_);
    }

    friend Dyadic operator+(const Dyadic &a, const Dyadic &b) {
        const auto e = std::max(a.exponent_, b.exponent_);
        return Dyadic(Integer(a.mantissa_ << (e - a.exponent_)) + Integer(b.mantissa_ << (e - b.exponent_)), e);
    }

    friend bool operator==(const Dyadic &, const Dyadic &) = default;

    /// Exact comparison against p/q.
    friend std::strong_ordering compare(const Dyadic &d, const ExactReal &x) {
        const Integer lhs = d.mantissa_ * x.denominator();
        const Integer rhs = Integer(x.numerator() << d.exponent_);
        if (lhs < rhs) {
            return std::strong_ordering::less;
        }
        return lhs == rhs ? std::strong_ordering::equal : std::strong_ordering::greater;
    }

private:
    void normalize() {
        if (mantissa_.is_zero()) {
            exponent_ = 0;
            return;
        }
        const auto tz = std::min<std::uint64_t>(boost::multiprecision::lsb(mantissa_), exponent_);
        mantissa_ >>= tz;
        exponent_ -= tz;
    }

    Integer mantissa_{0};
    std::uint64_t exponent_ = 0;
};

inline ExactReal ExactReal::parse(std::string_view text, unsigned decimal_bits) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) {
        text.remove_prefix(1);
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) {
        text.remove_suffix(1);
    }
    if (text.empty()) {
        throw std::invalid_argument("empty number");
    }
    if (text.front() == '-') {
        throw std::domain_error("value " + std::string(text) + " is outside the interval (0,1]");
    }
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        Integer p = detail::parse_integer(text.substr(0, slash));
        Integer q = detail::parse_integer(text.substr(slash + 1));
        if (q.is_zero()) {
            throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        }
        return ExactReal(std::move(p), std::move(q));
    }
    const auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        return ExactReal(detail::parse_integer(text), Integer(1));
    }
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (whole.empty() && frac.empty()) {
        throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    }
    const Integer num = detail::parse_integer(std::string(whole.empty() ? "0" : whole) + std::string(frac.empty() ? "0" : frac));
    Integer ten_power = 1;
    for (std::size_t i = 0; i < std::max<std::size_t>(frac.size(), 1); ++i) {
        ten_power *= 10;
    }
    // round(num / 10^f * 2^bits), ties away from zero
    const Integer scaled = Integer(num << (decimal_bits + 1)) / ten_power;
    const Integer rounded = (scaled + 1) >> 1;
    if (rounded.is_zero()) {
        throw std::domain_error("value " + std::string(text) + " rounds to 0 at " + std::to_string(decimal_bits) +
                                " bits, outside the interval (0,1]");
    }
    const Dyadic dyadic(rounded, decimal_bits);
    if (dyadic.mantissa() > dyadic.denominator()) {
        throw std::domain_error("value " + std::string(text) + " is outside the interval (0,1]");
    }
    return ExactReal::from_reduced(dyadic.mantissa(), dyadic.denominator());
}

} // namespace binexp
