#pragma once

// Gauss-Legendre line rules and the product cubature rule on a sphere.

#include "sphreg/errors.hpp"
#include "sphreg/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace sphreg {

struct LineRule {
    std::vector<double> nodes;    // strictly increasing, in (-1, 1)
    std::vector<double> weights;  // positive, sum to 2
};

/// n-point Gauss-Legendre rule on [-1, 1], exact for degree <= 2n - 1.
///
/// Roots of P_n are found by Newton's method from the Chebyshev-like guess
/// cos(pi (i + 3/4) / (n + 1/2)); weights are 2 / ((1 - t^2) P_n'(t)^2).
inline LineRule gauss_legendre(int n) {
    detail::require(n >= 1, "gauss_legendre: n must be >= 1");
    LineRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);

    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        bool converged = false;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0;
            double p0 = 0.0;
            for (int k = 1; k <= n; ++k) {
                const double p2 = p0;
                p0 = p1;
                p1 = ((2.0 * k - 1.0) * z * p0 - (k - 1.0) * p2) / k;
            }
            // p1 = P_n(z), p0 = P_{n-1}(z)
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double step = p1 / dp;
            z -= step;
            if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw NumericalError("gauss_legendre: Newton iteration did not converge for n = " + std::to_string(n));
        }
        // Recompute the derivative at the converged root.
        double p1 = 1.0;
        double p0 = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double p2 = p0;
            p0 = p1;
            p1 = ((2.0 * k - 1.0) * z * p0 - (k - 1.0) * p2) / k;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);

        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

/// N points on the sphere of radius rho with positive weights, exact for
/// spherical polynomials of degree <= exactness_degree under the surface
/// measure of that sphere.
class CubatureRule {
public:
    CubatureRule(std::vector<SpherePoint> points, std::vector<double> weights, int exactness_degree, int M)
        : points_(std::move(points)), weights_(std::move(weights)), exactness_(exactness_degree), M_(M) {
        detail::require(points_.size() == weights_.size(), "CubatureRule: point and weight counts differ");
        detail::require(!points_.empty(), "CubatureRule: empty rule");
    }

    std::size_t size() const { return points_.size(); }
    const std::vector<SpherePoint>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    int exactness_degree() const { return exactness_; }
    int M() const { return M_; }
    double radius() const { return points_.front().radius(); }

    /// Test hook: returns a copy with one weight overwritten.
    CubatureRule with_weight(std::size_t i, double w) const {
        CubatureRule copy = *this;
        copy.weights_.at(i) = w;
        return copy;
    }

private:
    std::vector<SpherePoint> points_;
    std::vector<double> weights_;
    int exactness_;
    int M_;
};

/// Tensor rule with M+1 Gauss-Legendre nodes in cos(polar angle) and
/// 2(M+1) equispaced longitudes phi_l = pi l / (M+1). N = 2(M+1)^2 points,
/// weight rho^2 * pi/(M+1) * w_i; exact to degree 2M on the sphere of
/// radius rho. Points are ordered latitude-major.
inline CubatureRule sphere_rule(int M, double rho) {
    detail::require(M >= 0, "sphere_rule: M must be >= 0");
    detail::require(rho > 0.0 && std::isfinite(rho), "sphere_rule: rho must be positive");
    const LineRule gl = gauss_legendre(M + 1);
    const int nlon = 2 * (M + 1);
    const double dphi = std::numbers::pi / (M + 1);

    std::vector<SpherePoint> points;
    std::vector<double> weights;
    points.reserve(static_cast<std::size_t>(M + 1) * nlon);
    weights.reserve(points.capacity());
    for (int i = 0; i <= M; ++i) {
        const double w = rho * rho * dphi * gl.weights[i];
        for (int l = 0; l < nlon; ++l) {
            points.emplace_back(UnitVector::from_angles(gl.nodes[i], dphi * l), rho);
            weights.push_back(w);
        }
    }
    return CubatureRule(std::move(points), std::move(weights), 2 * M, M);
}

/// sum_i w_i samples_i
inline double integrate(const CubatureRule& rule, std::span<const double> samples) {
    detail::require(samples.size() == rule.size(),
                    "integrate: expected " + std::to_string(rule.size()) + " samples, got " +
                        std::to_string(samples.size()));
    double s = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) s += rule.weights()[i] * samples[i];
    return s;
}

}  // namespace sphreg
