#pragma once

// Dense reference solver for the smoothing functional
//
//   min_p  sum_i w_i (p(t_i) - y_i)^2 + lambda ||p||_K^2 ,  p of degree <= M.
//
// Writing p = sum c_{k,j} (1/rho) Y_{k,j}(./rho) gives ||p||_K^2 = sum beta_k^2 c_{k,j}^2,
// so the normal equations are (B^T W B + lambda D) c = B^T W y with D = diag(beta_k^2).
// The system is assembled and solved without exploiting cubature exactness;
// it exists to check the diagonal closed form and is only meant for small M.

#include "sphreg/errors.hpp"
#include "sphreg/harmonics.hpp"
#include "sphreg/operators.hpp"
#include "sphreg/quadrature.hpp"
#include "sphreg/smoothing.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <span>
#include <string>

namespace sphreg {

inline constexpr int smooth_oracle_max_degree = 12;

/// Objective value of the smoothing functional at coefficients c.
inline double smoothing_objective(const HarmonicCoefficients& c, std::span<const double> samples,
                                  const CubatureRule& rule, const SmoothingParams& params) {
    detail::require(samples.size() == rule.size(), "smoothing_objective: sample count mismatch");
    const auto p = synthesize(c, rule.points());
    double fit = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double r = p[i] - samples[i];
        fit += rule.weights()[i] * r * r;
    }
    double pen = 0.0;
    for (int k = 0; k <= c.M(); ++k) pen += params.beta[k] * params.beta[k] * c.degree(k).squaredNorm();
    return fit + params.lambda * pen;
}

inline HarmonicCoefficients smooth_oracle(std::span<const double> samples, const CubatureRule& rule,
                                          const SmoothingParams& params) {
    const int M = params.beta.M();
    detail::require(M <= smooth_oracle_max_degree,
                    "smooth_oracle: dense solve limited to M <= " + std::to_string(smooth_oracle_max_degree));
    detail::require(samples.size() == rule.size(), "smooth_oracle: sample count mismatch");

    const auto nb = static_cast<Eigen::Index>(basis_size(M));
    const auto n = static_cast<Eigen::Index>(rule.size());
    Eigen::MatrixXd design(n, nb);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto row = eval_basis(M, rule.points()[static_cast<std::size_t>(i)]);
        for (Eigen::Index b = 0; b < nb; ++b) design(i, b) = row[static_cast<std::size_t>(b)];
    }
    const Eigen::Map<const Eigen::VectorXd> w(rule.weights().data(), n);
    const Eigen::Map<const Eigen::VectorXd> y(samples.data(), n);

    Eigen::MatrixXd normal = design.transpose() * w.asDiagonal() * design;
    for (int k = 0; k <= M; ++k) {
        const double pen = params.lambda * params.beta[k] * params.beta[k];
        for (int j = 0; j < 2 * k + 1; ++j) normal(k * k + j, k * k + j) += pen;
    }
    const Eigen::VectorXd rhs = design.transpose() * w.cwiseProduct(y);

    const Eigen::LLT<Eigen::MatrixXd> llt(normal);
    if (llt.info() != Eigen::Success) throw NumericalError("smooth_oracle: normal equations are singular");
    return HarmonicCoefficients(M, rule.radius(), llt.solve(rhs));
}

}  // namespace sphreg
