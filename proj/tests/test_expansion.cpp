#include "binexp/expansion.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace binexp;

namespace {

oracle::Rational as_rational(const ExactReal &x) { return oracle::Rational(x.numerator(), x.denominator()); }

ExactReal random_rational(std::mt19937_64 &rng, std::uint64_t max_q) {
    const std::uint64_t q = 1 + rng() % max_q;
    const std::uint64_t p = 1 + rng() % q;
    return ExactReal(Integer(p), Integer(q));
}

} // namespace

TEST(Expansion, KnownDigits) {
    EXPECT_EQ(digit_prefix(ExactReal(2, 3), 6), (DigitPrefix{1, 2, 2, 2, 2, 2}));
    EXPECT_EQ(digit_prefix(ExactReal::one(), 3), (DigitPrefix{1, 1, 1}));
    EXPECT_EQ(digit_prefix(ExactReal(1, 2), 3), (DigitPrefix{2, 1, 1}));
    EXPECT_EQ(digit_prefix(ExactReal(1, 3), 4), (DigitPrefix{2, 2, 2, 2}));
    EXPECT_EQ(digit_prefix(ExactReal(1, 1000), 1), (DigitPrefix{10}));
}

TEST(Expansion, BranchBoundaries) {
    // (2^-n, 2^-(n-1)] is branch n
    for (unsigned n = 1; n < 70; ++n) {
        const Integer den = Integer(1) << n;
        EXPECT_EQ(first_digit(ExactReal(Integer(2), den)), n);
        if (n > 1) {
            EXPECT_EQ(first_digit(ExactReal(Integer(1), den)), n + 1);
            EXPECT_EQ(first_digit(ExactReal(Integer(3), Integer(den * 2))), n);
        }
    }
}

TEST(Expansion, MapStaysInUnitInterval) {
    EXPECT_EQ(apply_T(ExactReal::one()), ExactReal::one());
    EXPECT_EQ(apply_T(ExactReal(1, 2)), ExactReal::one());
    EXPECT_EQ(apply_T(ExactReal(2, 3)), ExactReal(1, 3));
    EXPECT_EQ(apply_T(ExactReal(1, 3)), ExactReal(1, 3));
}

TEST(Expansion, DigitsMatchRationalOracle) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 300; ++i) {
        const ExactReal x = random_rational(rng, 100000);
        const auto got = digit_prefix(x, 40);
        const auto want = oracle::digits(as_rational(x), 40);
        ASSERT_EQ(std::vector<Digit>(got.begin(), got.end()), std::vector<Digit>(want.begin(), want.end())) << x.str();
    }
}

TEST(Expansion, DigitsFollowTheOrbit) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
        ExactReal y = random_rational(rng, 1 << 20);
        const auto digits = digit_prefix(y, 25);
        for (Digit d : digits) {
            ASSERT_EQ(first_digit(y), d);
            y = apply_T(y);
        }
    }
}

TEST(Expansion, PrefixValueMatchesSeriesOracle) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<Digit> d(1 + rng() % 30);
        std::vector<unsigned> du;
        for (auto &di : d) {
            di = 1 + static_cast<Digit>(rng() % 12);
            du.push_back(di);
        }
        const DigitPrefix p(d);
        EXPECT_EQ(as_rational(prefix_value(p)), oracle::series_value(du));
    }
}

TEST(Expansion, CylinderContainsItsPoints) {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 500; ++i) {
        const ExactReal x = random_rational(rng, 1000000);
        for (std::size_t n : {1u, 5u, 30u}) {
            const auto p = digit_prefix(x, n);
            const auto c = cylinder(p);
            EXPECT_TRUE(c.contains(x));
            EXPECT_EQ(c.length_exponent, p.digit_sum());
            EXPECT_EQ(c.left.to_exact(), prefix_value(p));
            // 0 < x - prefix <= 2^-S, checked with the oracle's arithmetic
            const oracle::Rational gap = as_rational(x) - as_rational(prefix_value(p));
            EXPECT_GT(gap, 0);
            EXPECT_LE(gap * (Integer(1) << p.digit_sum()), 1);
        }
    }
}

TEST(Expansion, CylinderEndpointsAndLeftOpenness) {
    const auto c = cylinder(DigitPrefix{1});
    EXPECT_EQ(c.left.to_exact(), ExactReal(1, 2));
    EXPECT_EQ(c.right().to_exact(), ExactReal::one());
    EXPECT_TRUE(c.contains(ExactReal::one()));
    EXPECT_FALSE(c.contains(ExactReal(1, 2)));
    EXPECT_TRUE(cylinder(DigitPrefix{2}).contains(ExactReal(1, 2)));
}

TEST(Expansion, BranchInverseIsRightInverseOfT) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        const ExactReal y = random_rational(rng, 5000);
        const Digit b = 1 + static_cast<Digit>(rng() % 40);
        const ExactReal x = branch_inverse(y, b);
        EXPECT_EQ(first_digit(x), b);
        EXPECT_EQ(apply_T(x), y);
    }
    EXPECT_THROW(branch_inverse(ExactReal::one(), 0), std::invalid_argument);
}

TEST(Expansion, RejectsBadPrefixes) {
    EXPECT_THROW(DigitPrefix({1, 0, 2}), std::invalid_argument);
    EXPECT_THROW(prefix_value(DigitPrefix{}), std::invalid_argument);
    EXPECT_THROW(cylinder(DigitPrefix{}), std::invalid_argument);
}

TEST(Expansion, DyadicPointsEndInAllOnes) {
    // 3/4 = 1/2 + 1/4 exactly, and the right-closed branches make the tail 1,1,1,...
    EXPECT_EQ(digit_prefix(ExactReal(3, 4), 5), (DigitPrefix{1, 2, 1, 1, 1}));
    EXPECT_EQ(digit_prefix(ExactReal(1, 4), 4), (DigitPrefix{3, 1, 1, 1}));
}
