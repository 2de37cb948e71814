#include "sphreg/smoothing.hpp"
#include "sphreg/smoothing_oracle.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace sphreg;

namespace {

PenaltyWeights linear_beta(int M) {
    std::vector<double> b(M + 1);
    for (int k = 0; k <= M; ++k) b[k] = k + 1.0;
    return PenaltyWeights(b);
}

}  // namespace

TEST(PenaltyWeights, Validation) {
    EXPECT_THROW(PenaltyWeights({}), InvalidInput);
    EXPECT_THROW(PenaltyWeights({1.0, 0.0}), InvalidInput);
    EXPECT_THROW(PenaltyWeights({2.0, 1.0}), InvalidInput);
    EXPECT_NO_THROW(PenaltyWeights({1.0, 1.0, 3.0}));
    EXPECT_THROW(SmoothingParams(-1e-3, PenaltyWeights::constant(2)), InvalidInput);
}

TEST(Kernel, Examples) {
    testutil::Rng rng(31);
    const auto b0 = PenaltyWeights::constant(0);
    for (int i = 0; i < 5; ++i) {
        const SpherePoint t(testutil::random_unit(rng), 1.0), tau(testutil::random_unit(rng), 1.0);
        EXPECT_NEAR(kernel(t, tau, b0, 0), 1.0 / four_pi, 1e-15);
        EXPECT_NEAR(kernel(t, t, PenaltyWeights::constant(1), 1), 1.0 / std::numbers::pi, 1e-15);
    }
    EXPECT_THROW(kernel(SpherePoint(UnitVector(0, 0, 1), 1.0), SpherePoint(UnitVector(0, 0, 1), 2.0), b0, 0),
                 InvalidInput);
    EXPECT_THROW(kernel(SpherePoint(UnitVector(0, 0, 1), 1.0), SpherePoint(UnitVector(0, 0, 1), 1.0), b0, 1),
                 InvalidInput);
}

TEST(Kernel, MatchesDoubleSum) {
    testutil::Rng rng(32);
    const int M = 20;
    const auto beta = linear_beta(M);
    for (double rho : {1.0, 1.7}) {
        for (int i = 0; i < 20; ++i) {
            const SpherePoint t(testutil::random_unit(rng), rho), tau(testutil::random_unit(rng), rho);
            const auto bt = eval_basis(M, t), btau = eval_basis(M, tau);
            double direct = 0.0;
            for (std::size_t n = 0; n < bt.size(); ++n) {
                const int k = DegreeIndex::from_flat(n).k;
                direct += bt[n] * btau[n] / (beta[k] * beta[k]);
            }
            EXPECT_NEAR(kernel(t, tau, beta, M), direct, 1e-12);
        }
    }
}

TEST(Smooth, LambdaZeroIsAnalyze) {
    testutil::Rng rng(33);
    const auto rule = sphere_rule(7, 1.2);
    const auto s = testutil::random_vector(rule.size(), rng);
    EXPECT_EQ(smooth(s, rule, SmoothingParams(0.0, linear_beta(7))).values(), analyze(s, rule, 7).values());
}

TEST(Smooth, LargeLambdaDampsEverything) {
    testutil::Rng rng(34);
    const auto rule = sphere_rule(5, 1.0);
    const auto s = testutil::random_vector(rule.size(), rng);
    const auto c = smooth(s, rule, SmoothingParams(1e12, linear_beta(5)));
    EXPECT_LT(c.values().cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Smooth, MatchesOracleM6) {
    testutil::Rng rng(35);
    const auto rule = sphere_rule(6, 1.0);
    const auto s = testutil::random_vector(rule.size(), rng);
    const SmoothingParams sp(0.1, linear_beta(6));
    EXPECT_LT((smooth(s, rule, sp).values() - smooth_oracle(s, rule, sp).values()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(SmoothOracle, Examples) {
    testutil::Rng rng(36);
    // lambda = 0 on exact polynomial samples.
    const auto rule = sphere_rule(5, 1.5);
    const auto c = testutil::random_coeffs(5, 1.5, rng);
    const auto s = synthesize(c, rule.points());
    const auto back = smooth_oracle(s, rule, SmoothingParams(0.0, PenaltyWeights::constant(5)));
    EXPECT_LT((back.values() - c.values()).cwiseAbs().maxCoeff(), 1e-9);

    // lambda = 1, beta = 1, constant samples.
    const auto r1 = sphere_rule(3, 1.0);
    const double value = 2.5;
    std::vector<double> constant(r1.size(), value);
    const auto sm = smooth_oracle(constant, r1, SmoothingParams(1.0, PenaltyWeights::constant(3)));
    EXPECT_NEAR(sm(0, 1), value * std::sqrt(four_pi) / 2.0, 1e-12);

    EXPECT_THROW(smooth_oracle(std::vector<double>(sphere_rule(13, 1.0).size()), sphere_rule(13, 1.0),
                               SmoothingParams(0.0, PenaltyWeights::constant(13))),
                 InvalidInput);
}

TEST(Properties, OracleEquivalence) {
    testutil::Rng rng(37);
    const double lambdas[] = {0.0, 1e-4, 1e-1, 1.0};
    for (int trial = 0; trial < 50; ++trial) {
        const int M = 1 + trial % 8;
        const double rho = trial % 3 == 0 ? 2.0 : 1.0;
        const auto rule = sphere_rule(M, rho);
        const auto s = testutil::random_vector(rule.size(), rng);
        for (double lambda : lambdas) {
            const SmoothingParams sp(lambda, linear_beta(M));
            EXPECT_LT((smooth(s, rule, sp).values() - smooth_oracle(s, rule, sp).values()).cwiseAbs().maxCoeff(), 1e-8)
                << "M=" << M << " lambda=" << lambda;
        }
    }
}

TEST(Properties, MonotoneDamping) {
    testutil::Rng rng(38);
    const auto rule = sphere_rule(8, 1.0);
    const auto s = testutil::random_vector(rule.size(), rng);
    Eigen::VectorXd prev = analyze(s, rule, 8).values().cwiseAbs();
    for (double lambda = 1e-6; lambda < 1e3; lambda *= 3.0) {
        const Eigen::VectorXd cur = smooth(s, rule, SmoothingParams(lambda, linear_beta(8))).values().cwiseAbs();
        for (Eigen::Index n = 0; n < cur.size(); ++n) EXPECT_LE(cur[n], prev[n]);
        prev = cur;
    }
}

TEST(Properties, FunctionalDescentAndMinimality) {
    testutil::Rng rng(39);
    for (int M : {2, 5, 9}) {
        const auto rule = sphere_rule(M, 1.0);
        const auto s = testutil::random_vector(rule.size(), rng);
        const auto hyper = analyze(s, rule, M);
        for (double lambda : {0.0, 1e-3, 0.1, 1.0, 10.0}) {
            const SmoothingParams sp(lambda, linear_beta(M));
            const auto c = smooth(s, rule, sp);
            const double at_min = smoothing_objective(c, s, rule, sp);
            EXPECT_LE(at_min, smoothing_objective(hyper, s, rule, sp) + 1e-12);
            for (int p = 0; p < 5; ++p) {
                auto perturbed = c;
                perturbed.values() += 1e-3 * testutil::random_coeffs(M, 1.0, rng).values();
                EXPECT_LE(at_min, smoothing_objective(perturbed, s, rule, sp) + 1e-12);
            }
        }
    }
}

TEST(Properties, ReproducingProperty) {
    // <p, K(., tau)>_K = sum beta_k^2 p_kj K_kj(tau) with K_kj(tau) = beta_k^{-2} (1/rho) Y_kj(tau/rho).
    testutil::Rng rng(40);
    const int M = 12;
    const double rho = 1.4;
    const auto beta = linear_beta(M);
    for (int trial = 0; trial < 20; ++trial) {
        const auto p = testutil::random_coeffs(M, rho, rng);
        const SpherePoint tau(testutil::random_unit(rng), rho);
        const auto b = eval_basis(M, tau);
        double inner = 0.0;
        for (std::size_t n = 0; n < b.size(); ++n) {
            const double bk = beta[DegreeIndex::from_flat(n).k];
            inner += bk * bk * p.values()[static_cast<Eigen::Index>(n)] * (b[n] / (bk * bk));
        }
        const std::vector<SpherePoint> at{tau};
        EXPECT_NEAR(inner, synthesize(p, at)[0], 1e-10);
    }
}

TEST(Properties, KernelIsSymmetricAndPositiveOnDiagonal) {
    testutil::Rng rng(41);
    const auto beta = linear_beta(10);
    for (int i = 0; i < 20; ++i) {
        const SpherePoint t(testutil::random_unit(rng), 1.0), tau(testutil::random_unit(rng), 1.0);
        EXPECT_DOUBLE_EQ(kernel(t, tau, beta, 10), kernel(tau, t, beta, 10));
        EXPECT_GT(kernel(t, t, beta, 10), 0.0);
        EXPECT_LE(std::abs(kernel(t, tau, beta, 10)), kernel(t, t, beta, 10) + 1e-15);
    }
}
