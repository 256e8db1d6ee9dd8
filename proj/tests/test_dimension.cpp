#include "binexp/dimension.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace binexp;

namespace {

// The oracles solve for D directly from the weight identities instead of for the root x.

double oracle_alpha(int M) {
    // sum_{i>=M} 2^(-D i) = 2^(-D M) / (1 - 2^-D) = 1
    return oracle::bisect([M](double D) { return std::pow(2.0, -D * M) / (1.0 - std::pow(2.0, -D)) - 1.0; }, 1e-6, 1.0);
}

double oracle_gamma_M(double mu, int M) {
    return oracle::bisect(
        [mu, M](double D) {
            double s = 0.0;
            for (int j = 1; j <= M; ++j) {
                s += std::pow(2.0, -D * (mu + j));
            }
            return s - 1.0;
        },
        1e-9, 1.0);
}

double oracle_beta(int M) { return oracle_gamma_M(0.0, M); }

double oracle_gamma_limit(double mu) {
    return oracle::bisect(
        [mu](double D) { return std::pow(2.0, -D * (mu + 1.0)) / (1.0 - std::pow(2.0, -D)) - 1.0; }, 1e-9, 1.0);
}

} // namespace

TEST(Dimension, FrozenValues) {
    // reference values computed independently at 50 digits
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    EXPECT_NEAR(alpha(2).root, phi, 1e-12);
    EXPECT_NEAR(alpha(2).value, 0.6942419136306173, 1e-12);
    EXPECT_NEAR(alpha(3).root, 1.4655712318767680, 1e-12);
    EXPECT_NEAR(alpha(3).value, 0.5514630897455955, 1e-12);
    EXPECT_NEAR(alpha(5).root, 1.3247179572447460, 1e-12);
    EXPECT_NEAR(alpha(5).value, 0.4056852313758245, 1e-12);
    EXPECT_NEAR(alpha(16).root, 1.1400339374770049, 1e-12);
    EXPECT_NEAR(alpha(16).value, 0.1890767723733554, 1e-11);
    EXPECT_NEAR(beta(2).root, phi, 1e-12);
    EXPECT_NEAR(beta(3).root, 1.8392867552141611, 1e-12);
    EXPECT_NEAR(beta(3).value, 0.8791464216066382, 1e-12);
    EXPECT_NEAR(gamma_M(1, 2).root, 0.7548776662466928, 1e-12);
    EXPECT_NEAR(gamma_M(1, 2).value, 0.4056852313758245, 1e-11);
    EXPECT_NEAR(gamma_M(3, 2).root, 0.8566748838545029, 1e-12);
    EXPECT_NEAR(gamma_M(3, 2).value, 0.2231803029682066, 1e-11);
    EXPECT_NEAR(gamma_limit(1).root, 0.6180339887498949, 1e-12);
    EXPECT_NEAR(gamma_limit(2).root, 0.6823278038280193, 1e-12);
    EXPECT_NEAR(gamma_limit(2).value, 0.5514630897455955, 1e-11);
    EXPECT_NEAR(gamma_limit(3).root, 0.7244919590005156, 1e-12);
    EXPECT_NEAR(gamma_limit(3).value, 0.4649584172162091, 1e-11);
}

TEST(Dimension, EdgeCases) {
    EXPECT_EQ(gamma_limit(0).root, 0.5);
    EXPECT_EQ(gamma_limit(0).value, 1.0);
    EXPECT_NEAR(gamma_M(0, 2).value, beta(2).value, 1e-12);
}

TEST(Dimension, AgreesWithWeightIdentityOracles) {
    for (int M = 2; M <= 20; ++M) {
        EXPECT_NEAR(alpha(M).value, oracle_alpha(M), 1e-10) << M;
        EXPECT_NEAR(beta(M).value, oracle_beta(M), 1e-10) << M;
        for (double mu : {0.5, 1.0, 2.0, 3.0, 7.25}) {
            EXPECT_NEAR(gamma_M(mu, M).value, oracle_gamma_M(mu, M), 1e-10) << M << ' ' << mu;
        }
    }
    for (double mu : {0.0, 0.5, 1.0, 4.0, 10.0}) {
        EXPECT_NEAR(gamma_limit(mu).value, oracle_gamma_limit(mu), 1e-10) << mu;
    }
}

TEST(Dimension, BracketCertifiesTheRoot) {
    for (int M = 2; M <= 30; ++M) {
        for (const DimValue &d : {alpha(M), beta(M), gamma_M(1.5, M)}) {
            EXPECT_LE(d.hi - d.lo, d.tolerance);
            EXPECT_LE(d.lo, d.root);
            EXPECT_GE(d.hi, d.root);
            const auto poly = defining_polynomial(d.family, d.M, d.mu);
            EXPECT_LE(poly(d.lo), 0.0L);
            EXPECT_GE(poly(d.hi), 0.0L);
            // the polynomial is increasing on the bracket
            EXPECT_LE(std::fabs(residual(d)), static_cast<double>(poly(d.hi) - poly(d.lo)));
        }
    }
}

TEST(Dimension, Monotonicity) {
    for (int M = 2; M < 40; ++M) {
        EXPECT_GT(alpha(M).value, alpha(M + 1).value);
        EXPECT_LT(beta(M).value, beta(M + 1).value);
        EXPECT_LT(beta(M).value, 1.0);
        EXPECT_GT(gamma_M(2, M + 1).value, gamma_M(2, M).value);
    }
    for (double mu = 0; mu < 10; mu += 0.5) {
        EXPECT_GT(gamma_M(mu, 4).value, gamma_M(mu + 0.5, 4).value);
        EXPECT_GT(gamma_limit(mu).value, gamma_limit(mu + 0.5).value);
    }
    EXPECT_LT(alpha(200).value, 0.05);
}

TEST(Dimension, LimitAndReciprocalRelations) {
    for (int mu = 1; mu <= 10; ++mu) {
        EXPECT_NEAR(gamma_limit(mu).root, 1.0 / alpha(mu + 1).root, 1e-10);
        EXPECT_NEAR(gamma_limit(mu).value, alpha(mu + 1).value, 1e-10);
    }
    for (double mu : {0.0, 1.0, 2.5}) {
        EXPECT_NEAR(gamma_M(mu, 64).value, gamma_limit(mu).value, 1e-6);
    }
}

TEST(Dimension, ToleranceIsHonoured) {
    const auto coarse = beta(5, 1e-4);
    EXPECT_LE(coarse.hi - coarse.lo, 1e-4);
    EXPECT_NEAR(coarse.root, beta(5).root, 1e-4);
}

TEST(Dimension, InvalidArguments) {
    EXPECT_THROW(alpha(1), std::invalid_argument);
    EXPECT_THROW(beta(1), std::invalid_argument);
    EXPECT_THROW(gamma_M(1, 1), std::invalid_argument);
    EXPECT_THROW(gamma_M(-1, 2), std::invalid_argument);
    EXPECT_THROW(gamma_limit(NAN), std::invalid_argument);
    EXPECT_THROW(beta(3, 0.0), std::invalid_argument);
    EXPECT_THROW(beta(3, -1.0), std::invalid_argument);
    try {
        beta(1);
        FAIL();
    } catch (const std::invalid_argument &e) {
        EXPECT_STREQ(e.what(), "M must be >= 2");
    }
}
