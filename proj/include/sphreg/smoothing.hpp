#pragma once

// Noise reduction: penalized least squares over spherical polynomials of
// degree <= M in the RKHS with kernel
//
//   K(t, tau) = sum_k beta_k^{-2} sum_j (1/rho) Y_{k,j}(t/rho) (1/rho) Y_{k,j}(tau/rho).
//
// With a cubature rule exact to degree 2M the minimizer is diagonal in the
// harmonic basis: c_{k,j} = analyze(samples)_{k,j} / (1 + lambda beta_k^2).

#include "sphreg/errors.hpp"
#include "sphreg/harmonics.hpp"
#include "sphreg/operators.hpp"
#include "sphreg/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace sphreg {

/// beta_0..beta_M, positive and nondecreasing.
class PenaltyWeights {
public:
    explicit PenaltyWeights(std::vector<double> beta) : beta_(std::move(beta)) {
        detail::require(!beta_.empty(), "PenaltyWeights: empty sequence");
        for (std::size_t k = 0; k < beta_.size(); ++k) {
            detail::require(beta_[k] > 0.0 && std::isfinite(beta_[k]),
                            "PenaltyWeights: beta_" + std::to_string(k) + " is not positive");
            if (k > 0) {
                detail::require(beta_[k] >= beta_[k - 1] * (1.0 - 1e-14),
                                "PenaltyWeights: sequence decreases at k = " + std::to_string(k));
            }
        }
    }

    static PenaltyWeights from_squared(const std::vector<double>& beta_sq) {
        std::vector<double> b(beta_sq.size());
        for (std::size_t k = 0; k < b.size(); ++k) b[k] = std::sqrt(beta_sq[k]);
        return PenaltyWeights(std::move(b));
    }

    static PenaltyWeights constant(int M, double value = 1.0) {
        return PenaltyWeights(std::vector<double>(static_cast<std::size_t>(M) + 1, value));
    }

    int M() const { return static_cast<int>(beta_.size()) - 1; }
    double operator[](int k) const { return beta_[static_cast<std::size_t>(k)]; }
    const std::vector<double>& values() const { return beta_; }

private:
    std::vector<double> beta_;
};

struct SmoothingParams {
    double lambda = 0.0;
    PenaltyWeights beta;

    SmoothingParams(double lambda_, PenaltyWeights beta_) : lambda(lambda_), beta(std::move(beta_)) {
        detail::require(lambda >= 0.0, "SmoothingParams: lambda must be >= 0");
    }

    /// 1 / (1 + lambda beta_k^2)
    double factor(int k) const {
        const double b = beta[k];
        return 1.0 / (1.0 + lambda * b * b);
    }
};

/// Reproducing kernel evaluated through the addition theorem:
/// sum_k beta_k^{-2} (2k+1)/(4 pi rho^2) P_k(cos gamma).
inline double kernel(const SpherePoint& t, const SpherePoint& tau, const PenaltyWeights& beta, int M) {
    detail::require(detail::same_radius(t.radius(), tau.radius()), "kernel: points lie on different spheres");
    detail::require(M >= 0 && M <= beta.M(), "kernel: penalty weights do not cover degree M");
    const double rho = t.radius();
    const double c = std::clamp(t.direction().dot(tau.direction()), -1.0, 1.0);
    std::vector<double> p(static_cast<std::size_t>(M) + 1);
    legendre_all(M, c, p);
    double s = 0.0;
    for (int k = 0; k <= M; ++k) s += (2.0 * k + 1.0) / (beta[k] * beta[k]) * p[k];
    return s / (four_pi * rho * rho);
}

/// Smoothing step given precomputed hyperinterpolation coefficients.
inline HarmonicCoefficients smooth_coefficients(const HarmonicCoefficients& hyper, const SmoothingParams& params) {
    detail::require(params.beta.M() >= hyper.M(), "smooth: penalty weights do not cover degree M");
    HarmonicCoefficients out(hyper.M(), hyper.radius());
    for (int k = 0; k <= hyper.M(); ++k) out.degree(k) = params.factor(k) * hyper.degree(k);
    return out;
}

/// T_{lambda,M} applied to samples at the rule's points; M is taken from the
/// penalty weights. The rule must be exact to degree 2M.
inline HarmonicCoefficients smooth(std::span<const double> samples, const CubatureRule& rule,
                                   const SmoothingParams& params) {
    return smooth_coefficients(analyze(samples, rule, params.beta.M()), params);
}

}  // namespace sphreg
