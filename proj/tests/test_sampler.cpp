#include "binexp/sampler.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace binexp;

namespace {

double binomial_sigma(double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); }

} // namespace

TEST(Measure, BoundedLawsUseDimensionWeights) {
    for (int M : {2, 3, 5, 9}) {
        const auto spec = MeasureSpec::nu_B(M);
        const double D = beta(M).value;
        EXPECT_EQ(spec.dimension(), D);
        EXPECT_NEAR(spec.free_law().raw_mass(), 1.0, 1e-12);
        EXPECT_NEAR(spec.free_law().total(), 1.0, 1e-12);
        EXPECT_EQ(spec.tail_cutoff(), static_cast<Digit>(M));
        for (Digit j = 1; j <= static_cast<Digit>(M); ++j) {
            EXPECT_NEAR(spec.weight(7, j), std::exp2(-D * j), 1e-12);
            EXPECT_NEAR(spec.log2_weight(7, j), -D * j, 1e-12);
        }
        EXPECT_EQ(spec.weight(1, static_cast<Digit>(M + 1)), 0.0);
        EXPECT_EQ(spec.log2_weight(1, static_cast<Digit>(M + 1)), -INFINITY);
    }
}

TEST(Measure, UnboundedLawIsTruncatedBelowCutoff) {
    for (int M : {2, 3, 16}) {
        const auto spec = MeasureSpec::nu_A(M);
        const double D = alpha(M).value;
        const auto &law = spec.free_law();
        EXPECT_EQ(law.first(), static_cast<Digit>(M));
        // the discarded tail sum_{j > last} 2^(-jD) is below the cutoff; the kept mass is 1 minus it
        const double tail = std::exp2(-D * (law.last() + 1.0)) / (1.0 - std::exp2(-D));
        EXPECT_LT(tail, kTailCutoff);
        EXPECT_NEAR(law.raw_mass(), 1.0 - tail, 1e-12);
        const double longer = std::exp2(-D * law.last()) / (1.0 - std::exp2(-D));
        EXPECT_GE(longer, kTailCutoff);
        EXPECT_EQ(spec.weight(1, static_cast<Digit>(M - 1)), 0.0);
    }
}

TEST(Measure, GammaWeightsIncludeMuShift) {
    const auto spec = MeasureSpec::nu_bar(2, 1.0, IndexSchedule::quadratic(1));
    const double D = gamma_M(1.0, 2).value;
    EXPECT_NEAR(spec.free_law().raw_mass(), 1.0, 1e-12);
    EXPECT_NEAR(spec.weight(2, 1), std::exp2(-2 * D), 1e-12);
    EXPECT_NEAR(spec.weight(2, 2), std::exp2(-3 * D), 1e-12);
    EXPECT_EQ(spec.weight(1, 1), 1.0);
    EXPECT_EQ(spec.weight(1, 2), 0.0);
    EXPECT_EQ(spec.log2_weight(4, 2), 0.0);
}

TEST(Measure, LebesgueWeights) {
    const auto spec = MeasureSpec::lebesgue();
    EXPECT_EQ(spec.weight(3, 1), 0.5);
    EXPECT_EQ(spec.log2_weight(3, 60), -60.0);
    EXPECT_FALSE(spec.tail_cutoff());
    EXPECT_THROW(spec.free_law(), std::logic_error);
    EXPECT_EQ(spec.describe(), "lebesgue");
    EXPECT_EQ(MeasureSpec::nu_hat(3, IndexSchedule::powers_of_two()).describe(), "nu_hat(M=3,powers-of-two)");
}

TEST(Sampler, DeterministicAcrossThreadCounts) {
    const auto spec = MeasureSpec::nu_hat(3, IndexSchedule::powers_of_two());
    const auto a = draw(spec, 30, 5000, 99, {1});
    const auto b = draw(spec, 30, 5000, 99, {4});
    const auto c = draw(spec, 30, 5000, 99, {7});
    ASSERT_EQ(a.size(), 5000u);
    for (std::size_t t = 0; t < a.size(); ++t) {
        ASSERT_EQ(a[t].digits, b[t].digits);
        ASSERT_EQ(a[t].digits, c[t].digits);
        ASSERT_EQ(a[t].midpoint, b[t].midpoint);
    }
}

TEST(Sampler, PrefixOfLargerRunIsStable) {
    const auto spec = MeasureSpec::nu_B(4);
    const auto small = draw_midpoints(spec, 20, 1500, 5);
    const auto large = draw_midpoints(spec, 20, 4000, 5);
    for (std::size_t t = 0; t < small.size(); ++t) {
        ASSERT_EQ(small[t], large[t]);
    }
    const auto other = draw_midpoints(spec, 20, 1500, 6);
    EXPECT_NE(small, other);
}

TEST(Sampler, RecordsAreConsistent) {
    const auto spec = MeasureSpec::nu_B(3);
    const double D = beta(3).value;
    for (const auto &r : draw(spec, 25, 300, 1)) {
        ASSERT_EQ(r.digits.size(), 25u);
        EXPECT_EQ(r.value, prefix_value(r.digits));
        const double left = r.value.to_double();
        const double width = std::ldexp(1.0, -static_cast<int>(r.digits.digit_sum()));
        EXPECT_NEAR(r.midpoint, left + width / 2, 1e-15);
        EXPECT_GT(r.midpoint, left);
        EXPECT_NEAR(r.log2_mass, -D * static_cast<double>(r.digits.digit_sum()), 1e-9);
        for (Digit d : r.digits) {
            EXPECT_GE(d, 1u);
            EXPECT_LE(d, 3u);
        }
    }
}

TEST(Sampler, ForcedIndicesCarryForcedDigits) {
    const auto spec = MeasureSpec::nu_bar(2, 2.0, IndexSchedule::quadratic(2));
    for (const auto &r : draw(spec, 30, 200, 3)) {
        EXPECT_EQ(r.digits[0], 2u);
        EXPECT_EQ(r.digits[3], 4u);
        EXPECT_EQ(r.digits[7], 6u);
        EXPECT_EQ(r.digits[12], 8u);
        EXPECT_LE(r.digits[1], 2u);
    }
}

TEST(Sampler, DigitFrequenciesFollowTheLaw) {
    const std::size_t n = 200000;
    const auto spec = MeasureSpec::nu_A(3);
    const auto h = digit_frequency(spec, 4, n, 17);
    for (Digit j = 3; j <= 10; ++j) {
        const double p = spec.free_law().probability(j);
        EXPECT_NEAR(h.frequency(j), p, 4 * binomial_sigma(p, n)) << j;
    }
    EXPECT_EQ(h.frequency(2), 0.0);

    const auto leb = digit_frequency(MeasureSpec::lebesgue(), 2, n, 18);
    for (Digit j = 1; j <= 8; ++j) {
        const double p = std::exp2(-static_cast<double>(j));
        EXPECT_NEAR(leb.frequency(j), p, 4 * binomial_sigma(p, n)) << j;
    }
}

TEST(Sampler, MaxDigitGrowthMatchesGeometricLaw) {
    const std::size_t n = 100000;
    const auto table = max_digit_growth(n, {10, 100}, {5, 8}, 23);
    ASSERT_EQ(table.size(), 4u);
    for (const auto &row : table) {
        const double p = 1.0 - std::pow(1.0 - std::exp2(-(static_cast<double>(row.threshold) - 1.0)),
                                        static_cast<double>(row.depth));
        EXPECT_NEAR(row.fraction, p, 4 * binomial_sigma(p, n)) << row.depth << ' ' << row.threshold;
    }
    EXPECT_THROW(max_digit_growth(10, {}, {3}, 1), std::invalid_argument);
}

TEST(Sampler, GeometricHalfIsExact) {
    auto rng = chunk_stream(1, 0);
    std::vector<std::size_t> counts(70, 0);
    const std::size_t n = 400000;
    for (std::size_t i = 0; i < n; ++i) {
        const auto d = geometric_half(rng);
        ASSERT_GE(d, 1u);
        ++counts[std::min<std::size_t>(d, 69)];
    }
    for (int j = 1; j <= 10; ++j) {
        const double p = std::exp2(-j);
        EXPECT_NEAR(static_cast<double>(counts[static_cast<std::size_t>(j)]) / n, p, 4 * binomial_sigma(p, n));
    }
}

TEST(Sampler, ArgumentErrors) {
    const auto spec = MeasureSpec::nu_B(2);
    EXPECT_THROW(draw(spec, 0, 10, 1), std::invalid_argument);
    EXPECT_THROW(draw(spec, 10, 0, 1), std::invalid_argument);
    EXPECT_THROW(digit_frequency(spec, 0, 10, 1), std::invalid_argument);
    const auto listed = MeasureSpec::nu_hat(2, IndexSchedule::from_list({{3, 2}, {6, 1}}));
    EXPECT_THROW(draw(listed, 7, 10, 1), std::out_of_range);
    EXPECT_NO_THROW(draw(listed, 6, 10, 1));
}

TEST(Sampler, VisitorExceptionsPropagate) {
    const auto spec = MeasureSpec::nu_B(2);
    EXPECT_THROW(for_each_draw(
                     spec, 5, 5000, 1,
                     [](std::size_t t, std::span<const Digit>) {
                         if (t == 3000) {
                             throw std::runtime_error("boom");
                         }
                     },
                     {3}),
                 std::runtime_error);
}
