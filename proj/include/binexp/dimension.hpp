// Closed-form Hausdorff dimensions as roots of explicit polynomials.
//
//   alpha(M):       x^M - x^(M-1) - 1 = 0 on (1,2),      dim A_M = log2(root)
//   beta(M):        x^M - x^(M-1) - ... - x - 1 = 0,     dim B_M = log2(root)
//   gamma_M(mu,M):  x^mu (x^M + ... + x) = 1 on (1/2,1), dim B_M(I,f) = -log2(root)
//   gamma_limit(mu): x^(mu+1) + x - 1 = 0,               dim B(I,f) = -log2(root)
//
// The A_M polynomial is the one for which sum_{i>=M} 2^(-D i) = 1 holds at
// D = log2(root), i.e. the Moran equation of the branches T_i, i >= M.
//
// Roots come from bisection on a sign-change bracket evaluated in long double;
// the returned bracket carries the sign certificate.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace binexp {

inline constexpr double kDefaultTolerance = 1e-15;

enum class Family { alpha, beta, gamma_M, gamma_limit };

inline std::string_view to_string(Family f) {
    switch (f) {
    case Family::alpha: return "alpha";
    case Family::beta: return "beta";
    case Family::gamma_M: return "gamma_M";
    case Family::gamma_limit: return "gamma_limit";
    }
    return "?";
}

struct DimValue {
    double value = 0.0;
    double root = 0.0;
    Family family = Family::alpha;
    int M = 0;      // unused by gamma_limit
    double mu = 0;  // unused by alpha and beta
    double tolerance = kDefaultTolerance;
    double lo = 0.0;
    double hi = 0.0;
};

namespace detail {

inline void require_tolerance(double tol) {
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw std::invalid_argument("tolerance must be a positive finite number");
    }
}

inline void require_order(int M) {
    if (M < 2) {
        throw std::invalid_argument("M must be >= 2");
    }
}

inline void require_mu(double mu) {
    if (!(mu >= 0.0) || !std::isfinite(mu)) {
        throw std::invalid_argument("mu must be a finite number >= 0");
    }
}

// sum_{j=from}^{to} x^j by Horner.
inline long double power_sum(long double x, int from, int to) {
    long double acc = 0.0L;
    for (int j = to; j >= from; --j) {
        acc = acc * x + 1.0L;
    }
    return acc * std::pow(x, static_cast<long double>(from));
}

struct Bracket {
    long double lo;
    long double hi;
};

inline Bracket bisect(const std::function<long double(long double)> &poly, long double lo, long double hi, double tol) {
    long double flo = poly(lo);
    const long double fhi = poly(hi);
    if (flo == 0.0L) {
        return {lo, lo};
    }
    if (fhi == 0.0L) {
        return {hi, hi};
    }
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw std::domain_error("polynomial has no sign change on the search bracket");
    }
    // half the tolerance leaves room for rounding the bracket out to doubles
    while (hi - lo > static_cast<long double>(tol) / 2) {
        const long double mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            break;
        }
        const long double fmid = poly(mid);
        if (fmid == 0.0L) {
            return {mid, mid};
        }
        if (std::signbit(fmid) == std::signbit(flo)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

inline DimValue finish(Family family, int M, double mu, double tol, Bracket b, bool negate_log) {
    DimValue out;
    out.family = family;
    out.M = M;
    out.mu = mu;
    out.tolerance = tol;
    // round outwards so the double bracket keeps the sign certificate
    out.lo = static_cast<double>(b.lo);
    if (static_cast<long double>(out.lo) > b.lo) {
        out.lo = std::nextafter(out.lo, -INFINITY);
    }
    out.hi = static_cast<double>(b.hi);
    if (static_cast<long double>(out.hi) < b.hi) {
        out.hi = std::nextafter(out.hi, INFINITY);
    }
    const long double root = (b.lo + b.hi) / 2;
    out.root = static_cast<double>(root);
    const long double log_root = std::log2(root);
    out.value = static_cast<double>(negate_log ? -log_root : log_root);
    return out;
}

} // namespace detail

/// The defining polynomial of a family, positive to the right of the root on the search bracket.
inline std::function<long double(long double)> defining_polynomial(Family family, int M, double mu) {
    switch (family) {
    case Family::alpha:
        return [M](long double x) { return std::pow(x, M - 1) * (x - 1.0L) - 1.0L; };
    case Family::beta:
        return [M](long double x) { return std::pow(x, M) - detail::power_sum(x, 0, M - 1); };
    case Family::gamma_M:
        return [M, mu](long double x) {
            return std::exp(static_cast<long double>(mu) * std::log(x)) * detail::power_sum(x, 1, M) - 1.0L;
        };
    case Family::gamma_limit:
        return [mu](long double x) { return std::exp((static_cast<long double>(mu) + 1.0L) * std::log(x)) + x - 1.0L; };
    }
    throw std::invalid_argument("unknown family");
}

inline DimValue alpha(int M, double tol = kDefaultTolerance) {
    detail::require_order(M);
    detail::require_tolerance(tol);
    const auto b = detail::bisect(defining_polynomial(Family::alpha, M, 0.0), 1.0L, 2.0L, tol);
    return detail::finish(Family::alpha, M, 0.0, tol, b, false);
}

inline DimValue beta(int M, double tol = kDefaultTolerance) {
    detail::require_order(M);
    detail::require_tolerance(tol);
    const auto b = detail::bisect(defining_polynomial(Family::beta, M, 0.0), 1.0L, 2.0L, tol);
    return detail::finish(Family::beta, M, 0.0, tol, b, false);
}

namespace detail {

// Upper end 0.999999, pushed towards 1 when x^mu is too small there.
inline long double gamma_upper(const std::function<long double(long double)> &poly) {
    long double hi = 0.999999L;
    while (poly(hi) <= 0.0L) {
        hi = 1.0L - (1.0L - hi) / 16;
        if (1.0L - hi < 1e-18L) {
            throw std::domain_error("mu too large: root indistinguishable from 1");
        }
    }
    return hi;
}

} // namespace detail

inline DimValue gamma_M(double mu, int M, double tol = kDefaultTolerance) {
    detail::require_mu(mu);
    detail::require_order(M);
    detail::require_tolerance(tol);
    const auto poly = defining_polynomial(Family::gamma_M, M, mu);
    const auto b = detail::bisect(poly, 0.5L, detail::gamma_upper(poly), tol);
    return detail::finish(Family::gamma_M, M, mu, tol, b, true);
}

inline DimValue gamma_limit(double mu, double tol = kDefaultTolerance) {
    detail::require_mu(mu);
    detail::require_tolerance(tol);
    const auto poly = defining_polynomial(Family::gamma_limit, 0, mu);
    const auto b = detail::bisect(poly, 0.5L, detail::gamma_upper(poly), tol);
    return detail::finish(Family::gamma_limit, 0, mu, tol, b, true);
}

/// Polynomial value at the returned root.
inline double residual(const DimValue &d) {
    return static_cast<double>(defining_polynomial(d.family, d.M, d.mu)(static_cast<long double>(d.root)));
}

} // namespace binexp
