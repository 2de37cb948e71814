#pragma once

// Regularized collocation, the composite two-step solution, filtered
// projections and the computable norm bound of the composite operator.

#include "sphreg/errors.hpp"
#include "sphreg/harmonics.hpp"
#include "sphreg/operators.hpp"
#include "sphreg/quadrature.hpp"
#include "sphreg/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace sphreg {

struct CollocationParams {
    double alpha = 0.0;
    SphericalSymbol symbol;

    CollocationParams(double alpha_, SphericalSymbol symbol_) : alpha(alpha_), symbol(std::move(symbol_)) {
        detail::require(alpha >= 0.0, "CollocationParams: alpha must be >= 0");
    }

    /// a_k / (alpha + a_k^2); exactly 1/a_k at alpha = 0.
    double factor(int k) const {
        const double a = symbol[k];
        if (alpha == 0.0) {
            if (a == 0.0) throw NumericalError("invert_regularized: a_" + std::to_string(k) + " = 0 with alpha = 0");
            return 1.0 / a;
        }
        return a / (alpha + a * a);
    }
};

/// R_{alpha,M}: coefficients on radius rho to coefficients on radius R,
/// x_{k,j} = a_k / (alpha + a_k^2) p_{k,j}.
inline HarmonicCoefficients invert_regularized(const HarmonicCoefficients& p, const CollocationParams& params) {
    detail::require(p.M() <= params.symbol.M(), "invert_regularized: coefficient degree exceeds symbol length");
    detail::require(detail::same_radius(p.radius(), params.symbol.rho()),
                    "invert_regularized: coefficients are not on the data sphere radius rho");
    HarmonicCoefficients x(p.M(), params.symbol.R());
    for (int k = 0; k <= p.M(); ++k) x.degree(k) = params.factor(k) * p.degree(k);
    return x;
}

/// x^eps_{alpha,lambda} = R_{alpha,M} T_{lambda,M} y^eps.
inline HarmonicCoefficients two_step_solve(std::span<const double> samples, const CubatureRule& rule,
                                           const SmoothingParams& sp, const CollocationParams& cp) {
    return invert_regularized(smooth(samples, rule, sp), cp);
}

/// Same as two_step_solve but starting from precomputed analyze() output.
inline HarmonicCoefficients two_step_from_hyper(const HarmonicCoefficients& hyper, const SmoothingParams& sp,
                                                const CollocationParams& cp) {
    return invert_regularized(smooth_coefficients(hyper, sp), cp);
}

/// Single-step regularized collocation on raw data: R_{alpha,M} applied to
/// the hyperinterpolant.
inline HarmonicCoefficients regularized_collocation(std::span<const double> samples, const CubatureRule& rule,
                                                    const CollocationParams& cp) {
    return invert_regularized(analyze(samples, rule, cp.symbol.M()), cp);
}

/// Presmoothing followed by formal inversion p_{k,j} / a_k.
inline HarmonicCoefficients presmoothed_inversion(std::span<const double> samples, const CubatureRule& rule,
                                                  const SmoothingParams& sp, const SphericalSymbol& symbol) {
    return invert_regularized(smooth(samples, rule, sp), CollocationParams(0.0, symbol));
}

/// C^1 map h: [0, inf) -> [0, 1] with h = 1 on [0, 1/2] and h = 0 on [1, inf).
class FilterFunction {
public:
    explicit FilterFunction(std::function<double(double)> h) : h_(std::move(h)) {}

    /// h(t) = cos^2(pi (t - 1/2)) on [1/2, 1].
    static FilterFunction cosine() {
        return FilterFunction([](double t) {
            if (t <= 0.5) return 1.0;
            if (t >= 1.0) return 0.0;
            const double c = std::cos(std::numbers::pi * (t - 0.5));
            return c * c;
        });
    }

    double operator()(double t) const { return h_(t); }

private:
    std::function<double(double)> h_;
};

/// Degree k scaled by h(k/M). For M = 0 only degree 0 exists and keeps h(0).
inline HarmonicCoefficients filtered_projection(const HarmonicCoefficients& c, const FilterFunction& h, int M) {
    detail::require(M >= 0, "filtered_projection: M must be >= 0");
    HarmonicCoefficients out(c.M(), c.radius());
    for (int k = 0; k <= c.M(); ++k) {
        const double t = (M == 0) ? (k == 0 ? 0.0 : std::numeric_limits<double>::infinity())
                                  : static_cast<double>(k) / M;
        out.degree(k) = h(t) * c.degree(k);
    }
    return out;
}

/// Default grid for sup norms over the sphere of radius R: the points of
/// sphere_rule(2M, R).
inline std::vector<SpherePoint> default_eval_grid(int M, double R) { return sphere_rule(2 * M, R).points(); }

enum class BoundForm {
    /// (1/(R rho)) max_t | sum_i w_i sum_k c_k P_k(t.t_i/(R rho)) |, the displayed form.
    displayed,
    /// (1/(R rho)) max_t sum_i w_i | sum_k c_k P_k(t.t_i/(R rho)) |, the Lebesgue
    /// constant of the kernel representation obtained in the proof.
    lebesgue,
};

/// Grid estimate of the norm bound of R_{alpha,M} T_{lambda,M} from C(rho-sphere)
/// to C(R-sphere), with c_k = (2k+1) a_k / (4 pi (alpha + a_k^2)(1 + lambda beta_k^2)).
/// The maximum over the sphere is replaced by a maximum over eval_grid.
inline double composite_norm_bound(const SmoothingParams& sp, const CollocationParams& cp, const CubatureRule& rule,
                                   std::span<const SpherePoint> eval_grid, BoundForm form = BoundForm::displayed) {
    detail::require(!eval_grid.empty(), "composite_norm_bound: empty evaluation grid");
    const int M = sp.beta.M();
    detail::require(cp.symbol.M() >= M, "composite_norm_bound: symbol does not cover degree M");
    const double R = cp.symbol.R();
    const double rho = cp.symbol.rho();
    detail::require(detail::same_radius(rule.radius(), rho), "composite_norm_bound: rule is not on radius rho");
    for (const auto& t : eval_grid) {
        detail::require(detail::same_radius(t.radius(), R), "composite_norm_bound: grid is not on radius R");
    }

    std::vector<double> coef(static_cast<std::size_t>(M) + 1);
    for (int k = 0; k <= M; ++k) coef[k] = (2.0 * k + 1.0) * cp.factor(k) * sp.factor(k) / four_pi;

    std::vector<double> p(static_cast<std::size_t>(M) + 1);
    double best = 0.0;
    for (const auto& t : eval_grid) {
        double total = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double c = std::clamp(t.direction().dot(rule.points()[i].direction()), -1.0, 1.0);
            legendre_all(M, c, p);
            double inner = 0.0;
            for (int k = 0; k <= M; ++k) inner += coef[k] * p[k];
            total += rule.weights()[i] * (form == BoundForm::lebesgue ? std::abs(inner) : inner);
        }
        best = std::max(best, std::abs(total));
    }
    return best / (R * rho);
}

}  // namespace sphreg
