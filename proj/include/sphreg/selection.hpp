#pragma once

// Quasi-optimality parameter choice on geometric grids, for one parameter
// and nested over (alpha, lambda).

#include "sphreg/collocation.hpp"
#include "sphreg/errors.hpp"
#include "sphreg/operators.hpp"
#include "sphreg/quadrature.hpp"
#include "sphreg/smoothing.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace sphreg {

/// {0 if include_zero} U { base * factor^i : i = 0..count }
struct ParameterGrid {
    double base = 1.78e-5;
    double factor = 1.25;
    int count = 50;
    bool include_zero = true;

    void validate() const {
        detail::require(base > 0.0 && std::isfinite(base), "ParameterGrid: base must be > 0");
        detail::require(factor > 1.0 && std::isfinite(factor), "ParameterGrid: factor must be > 1");
        detail::require(count >= 1, "ParameterGrid: count must be >= 1");
    }
};

inline std::vector<double> expand_grid(const ParameterGrid& g) {
    g.validate();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(g.count) + 2);
    if (g.include_zero) out.push_back(0.0);
    for (int i = 0; i <= g.count; ++i) out.push_back(g.base * std::pow(g.factor, i));
    return out;
}

/// Approximates the uniform norm on a sphere by the maximum over a fixed grid.
class SupNormEvaluator {
public:
    SupNormEvaluator(int M, std::span<const SpherePoint> grid) : basis_(M, nonempty(grid)) {}

    const BasisMatrix& basis() const { return basis_; }
    double radius() const { return basis_.radius(); }
    int M() const { return basis_.M(); }

    double operator()(const HarmonicCoefficients& c) const { return basis_.synthesize(c).cwiseAbs().maxCoeff(); }

    /// Per-degree synthesized components: column k holds the values on the
    /// grid of the degree-k part of c. A function whose coefficients are
    /// f_k c_{k,j} then evaluates to components * f.
    Eigen::MatrixXd degree_components(const HarmonicCoefficients& c) const {
        basis_.check(c);
        Eigen::MatrixXd h(basis_.rows(), c.M() + 1);
        for (int k = 0; k <= c.M(); ++k) {
            h.col(k) = basis_.matrix().middleCols(static_cast<Eigen::Index>(k) * k, 2 * k + 1) * c.degree(k);
        }
        return h;
    }

private:
    static std::span<const SpherePoint> nonempty(std::span<const SpherePoint> grid) {
        detail::require(!grid.empty(), "sup_norm: empty evaluation grid");
        return grid;
    }

    BasisMatrix basis_;
};

inline double sup_norm(const HarmonicCoefficients& c, std::span<const SpherePoint> eval_grid) {
    return SupNormEvaluator(c.M(), eval_grid)(c);
}

struct SelectionResult {
    std::size_t chosen_index = 0;
    double chosen_value = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> differences;  // differences[i-1] = ||x_i - x_{i-1}||, i = 1..n-1
    HarmonicCoefficients solution{0, 1.0};
};

namespace detail {

/// First index (1-based over differences) attaining the minimum.
inline std::size_t argmin_difference(std::span<const double> d) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] < d[best]) best = i;
    }
    return best + 1;
}

}  // namespace detail

/// Quasi-optimality: chooses i in 1..n-1 minimizing ||x_i - x_{i-1}||; ties
/// go to the smallest index. `values` (optional) are the parameters the
/// solutions were computed with, ascending.
inline SelectionResult select_single(std::span<const HarmonicCoefficients> solutions, const SupNormEvaluator& norm,
                                     std::span<const double> values = {}) {
    detail::require(solutions.size() >= 2, "select_single: need at least 2 solutions");
    detail::require(values.empty() || values.size() == solutions.size(),
                    "select_single: parameter values do not match solutions");
    SelectionResult r;
    r.differences.reserve(solutions.size() - 1);
    for (std::size_t i = 1; i < solutions.size(); ++i) r.differences.push_back(norm(solutions[i] - solutions[i - 1]));
    r.chosen_index = detail::argmin_difference(r.differences);
    if (!values.empty()) r.chosen_value = values[r.chosen_index];
    r.solution = solutions[r.chosen_index];
    return r;
}

inline SelectionResult select_single(std::span<const HarmonicCoefficients> solutions,
                                     std::span<const SpherePoint> eval_grid, std::span<const double> values = {}) {
    detail::require(!solutions.empty(), "select_single: need at least 2 solutions");
    return select_single(solutions, SupNormEvaluator(solutions.front().M(), eval_grid), values);
}

struct TwoStepTraceRecord {
    double alpha = 0.0;
    double chosen_lambda = 0.0;
    double inner_min_diff = std::numeric_limits<double>::quiet_NaN();  // NaN when the lambda grid has one value
    double outer_diff = std::numeric_limits<double>::quiet_NaN();      // NaN for the first alpha
};

struct TwoStepSelection {
    double alpha = 0.0;
    double lambda = 0.0;
    std::size_t alpha_index = 0;
    std::size_t lambda_index = 0;
    HarmonicCoefficients solution{0, 1.0};
    std::vector<TwoStepTraceRecord> trace;
};

/// Nested quasi-optimality starting from hyperinterpolation coefficients on
/// the data sphere. For each alpha_j the inner search picks lambda(alpha_j)
/// among {x_{alpha_j, lambda_i}}_i; the outer search then runs over
/// {x_{alpha_j, lambda(alpha_j)}}_j. A grid with a single value is taken as
/// fixed. All differences are sup norms on the solution sphere.
inline TwoStepSelection select_two_step(const HarmonicCoefficients& hyper, const SphericalSymbol& symbol,
                                        const PenaltyWeights& beta, std::span<const double> alphas,
                                        std::span<const double> lambdas, const SupNormEvaluator& norm) {
    detail::require(!alphas.empty() && !lambdas.empty(), "select_two_step: empty parameter grid");
    const int M = hyper.M();
    detail::require(symbol.M() >= M && beta.M() >= M, "select_two_step: symbol or penalty weights too short");
    detail::require(detail::same_radius(norm.radius(), symbol.R()), "select_two_step: grid is not on radius R");

    // Values of x_{alpha,lambda} on the grid are components * f with
    // f_k = a_k/(alpha + a_k^2) / (1 + lambda beta_k^2).
    const Eigen::MatrixXd components = norm.degree_components(
        HarmonicCoefficients(M, symbol.R(), hyper.values()));
    const auto nk = static_cast<Eigen::Index>(M) + 1;

    auto factors = [&](double alpha, double lambda) {
        const CollocationParams cp(alpha, symbol);
        const SmoothingParams sp(lambda, beta);
        Eigen::VectorXd f(nk);
        for (int k = 0; k <= M; ++k) f[k] = cp.factor(k) * sp.factor(k);
        return f;
    };
    auto diff_norms = [&](const Eigen::MatrixXd& f) {
        const Eigen::MatrixXd d = f.rightCols(f.cols() - 1) - f.leftCols(f.cols() - 1);
        const Eigen::MatrixXd v = components * d;
        std::vector<double> out(static_cast<std::size_t>(d.cols()));
        for (Eigen::Index c = 0; c < d.cols(); ++c) out[static_cast<std::size_t>(c)] = v.col(c).cwiseAbs().maxCoeff();
        return out;
    };

    const auto nl = static_cast<Eigen::Index>(lambdas.size());
    const auto na = static_cast<Eigen::Index>(alphas.size());
    std::vector<std::size_t> inner_choice(alphas.size(), 0);
    Eigen::MatrixXd outer(nk, na);

    TwoStepSelection result;
    result.trace.resize(alphas.size());
    for (Eigen::Index j = 0; j < na; ++j) {
        const double alpha = alphas[static_cast<std::size_t>(j)];
        auto& rec = result.trace[static_cast<std::size_t>(j)];
        rec.alpha = alpha;
        std::size_t li = 0;
        if (nl >= 2) {
            Eigen::MatrixXd f(nk, nl);
            for (Eigen::Index i = 0; i < nl; ++i) f.col(i) = factors(alpha, lambdas[static_cast<std::size_t>(i)]);
            const auto d = diff_norms(f);
            li = detail::argmin_difference(d);
            rec.inner_min_diff = d[li - 1];
        }
        inner_choice[static_cast<std::size_t>(j)] = li;
        rec.chosen_lambda = lambdas[li];
        outer.col(j) = factors(alpha, rec.chosen_lambda);
    }

    std::size_t aj = 0;
    if (na >= 2) {
        const auto d = diff_norms(outer);
        for (std::size_t j = 1; j < alphas.size(); ++j) result.trace[j].outer_diff = d[j - 1];
        aj = detail::argmin_difference(d);
    }
    result.alpha_index = aj;
    result.lambda_index = inner_choice[aj];
    result.alpha = alphas[aj];
    result.lambda = lambdas[result.lambda_index];
    result.solution = two_step_from_hyper(hyper, SmoothingParams(result.lambda, beta), CollocationParams(result.alpha, symbol));
    return result;
}

/// Convenience form working from samples at the rule's points.
inline TwoStepSelection select_two_step(std::span<const double> samples, const CubatureRule& rule,
                                        const SphericalSymbol& symbol, const PenaltyWeights& beta,
                                        const ParameterGrid& alpha_grid, const ParameterGrid& lambda_grid,
                                        std::span<const SpherePoint> eval_grid) {
    const int M = symbol.M();
    detail::require(beta.M() == M, "select_two_step: penalty weights and symbol differ in degree");
    const auto alphas = expand_grid(alpha_grid);
    const auto lambdas = expand_grid(lambda_grid);
    const SupNormEvaluator norm(M, eval_grid);
    return select_two_step(analyze(samples, rule, M), symbol, beta, alphas, lambdas, norm);
}

}  // namespace sphreg
