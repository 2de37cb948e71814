#include "sphreg/quadrature.hpp"
#include "sphreg/operators.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace sphreg;

TEST(GaussLegendre, SmallRules) {
    const auto g1 = gauss_legendre(1);
    ASSERT_EQ(g1.nodes.size(), 1u);
    EXPECT_NEAR(g1.nodes[0], 0.0, 1e-16);
    EXPECT_NEAR(g1.weights[0], 2.0, 1e-15);

    const auto g2 = gauss_legendre(2);
    EXPECT_NEAR(g2.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(g2.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(g2.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(g2.weights[1], 1.0, 1e-15);
}

TEST(GaussLegendre, FivePointIntegratesT8) {
    const auto g = gauss_legendre(5);
    double s = 0.0;
    for (std::size_t i = 0; i < 5; ++i) s += g.weights[i] * std::pow(g.nodes[i], 8);
    EXPECT_NEAR(s, 2.0 / 9.0, 1e-13);
}

TEST(GaussLegendre, InvariantsAndExactness) {
    for (int n : {1, 2, 3, 7, 16, 31, 64, 101}) {
        const auto g = gauss_legendre(n);
        ASSERT_EQ(g.nodes.size(), static_cast<std::size_t>(n));
        EXPECT_NEAR(std::accumulate(g.weights.begin(), g.weights.end(), 0.0), 2.0, 1e-12);
        for (int i = 0; i < n; ++i) {
            EXPECT_GT(g.weights[i], 0.0);
            EXPECT_GT(g.nodes[i], -1.0);
            EXPECT_LT(g.nodes[i], 1.0);
            if (i > 0) { EXPECT_LT(g.nodes[i - 1], g.nodes[i]); }
        }
        // Monomials up to degree 2n-1 (checked up to 40 to stay well conditioned).
        for (int d = 0; d <= std::min(2 * n - 1, 40); ++d) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], d);
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            EXPECT_NEAR(s, exact, 1e-13) << "n=" << n << " d=" << d;
        }
    }
}

TEST(GaussLegendre, RejectsNonPositive) { EXPECT_THROW(gauss_legendre(0), InvalidInput); }

TEST(SphereRule, SizeAndWeightSum) {
    const auto rule = sphere_rule(30, 1.0);
    EXPECT_EQ(rule.size(), 1922u);
    EXPECT_EQ(rule.exactness_degree(), 60);
    EXPECT_EQ(rule.M(), 30);
    for (int M : {0, 1, 5, 12, 30}) {
        for (double rho : {1.0, 2.5}) {
            const auto r = sphere_rule(M, rho);
            EXPECT_EQ(r.size(), static_cast<std::size_t>(2 * (M + 1) * (M + 1)));
            const double s = std::accumulate(r.weights().begin(), r.weights().end(), 0.0);
            EXPECT_NEAR(s / (four_pi * rho * rho), 1.0, 1e-10);
            for (const auto& p : r.points()) EXPECT_DOUBLE_EQ(p.radius(), rho);
        }
    }
}

TEST(SphereRule, RejectsInvalid) {
    EXPECT_THROW(sphere_rule(-1, 1.0), InvalidInput);
    EXPECT_THROW(sphere_rule(3, 0.0), InvalidInput);
    EXPECT_THROW(sphere_rule(3, -2.0), InvalidInput);
}

TEST(SphereRule, GramIdentityOnRadiusTwo) {
    const int M = 5;
    const auto rule = sphere_rule(M, 2.0);
    const BasisMatrix b(M, rule.points());
    const Eigen::Map<const Eigen::VectorXd> w(rule.weights().data(), static_cast<Eigen::Index>(rule.size()));
    const Eigen::MatrixXd g = b.matrix().transpose() * w.asDiagonal() * b.matrix();
    EXPECT_LT((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(SphereRule, PositivityUpTo100) {
    for (int M = 0; M <= 100; M += 5) {
        const auto r = sphere_rule(M, 1.0);
        EXPECT_GT(*std::min_element(r.weights().begin(), r.weights().end()), 0.0) << M;
    }
}

TEST(Integrate, Examples) {
    const auto rule = sphere_rule(3, 1.0);
    std::vector<double> ones(rule.size(), 1.0);
    EXPECT_NEAR(integrate(rule, ones), four_pi, 1e-10);

    std::vector<double> y23(rule.size()), y31sq(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        y23[i] = sph_harm({2, 3}, rule.points()[i].direction());
        y31sq[i] = std::pow(sph_harm({3, 1}, rule.points()[i].direction()), 2);
    }
    EXPECT_NEAR(integrate(rule, y23), 0.0, 1e-10);
    EXPECT_NEAR(integrate(rule, y31sq), 1.0, 1e-10);

    std::vector<double> short_samples(rule.size() - 1, 1.0);
    EXPECT_THROW(integrate(rule, short_samples), InvalidInput);
}

TEST(Properties, ExactnessOnRandomPolynomials) {
    // p = sum c_kj (1/rho) Y_kj(t/rho) with degree <= 2M integrates to
    // rho^2 * (1/rho) * c_01 * sqrt(4 pi) over the sphere of radius rho.
    testutil::Rng rng(11);
    for (int M : {2, 6, 10}) {
        for (double rho : {1.0, 3.0}) {
            const auto rule = sphere_rule(M, rho);
            for (int trial = 0; trial < 5; ++trial) {
                const auto c = testutil::random_coeffs(2 * M, rho, rng);
                const auto p = synthesize(c, rule.points());
                const double exact = rho * c(0, 1) * std::sqrt(four_pi);
                EXPECT_NEAR(integrate(rule, p), exact, 1e-9 * std::max(1.0, std::abs(exact)));
            }
        }
    }
}

TEST(Properties, DegreeBeyondExactnessIsNotIntegrated) {
    // Negative control: a zonal harmonic of degree 2M+2 has mean zero, but the
    // degree-2M rule does not see that.
    const int M = 4;
    const auto rule = sphere_rule(M, 1.0);
    std::vector<double> s(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) s[i] = sph_harm({2 * M + 2, 2 * M + 3}, rule.points()[i].direction());
    EXPECT_GT(std::abs(integrate(rule, s)), 1e-6);
}

TEST(Properties, RefinementConsistency) {
    testutil::Rng rng(12);
    for (int M : {3, 8}) {
        const auto c = testutil::random_coeffs(2 * M, 1.0, rng);
        const auto r1 = sphere_rule(M, 1.0);
        const auto r2 = sphere_rule(M + 5, 1.0);
        EXPECT_NEAR(integrate(r1, synthesize(c, r1.points())), integrate(r2, synthesize(c, r2.points())), 1e-10);
    }
}
