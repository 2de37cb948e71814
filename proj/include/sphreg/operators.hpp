#pragma once

// Spectral analysis and synthesis on a sphere, the truncated
// pseudo-differential operator A_M and Sobolev-type norms.

#include "sphreg/errors.hpp"
#include "sphreg/harmonics.hpp"
#include "sphreg/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace sphreg {

namespace detail {

inline bool same_radius(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace detail

/// Fourier coefficients c_{k,j} = <(1/r) Y_{k,j}(. / r), f> of a function f on
/// the sphere of radius r, k = 0..M, stored flat at k*k + j - 1.
class HarmonicCoefficients {
public:
    HarmonicCoefficients(int M, double radius) : M_(M), radius_(radius), values_(Eigen::VectorXd::Zero(basis_size(M))) {
        detail::require(M >= 0, "HarmonicCoefficients: M must be >= 0");
        detail::require(radius > 0.0 && std::isfinite(radius), "HarmonicCoefficients: radius must be positive");
    }

    HarmonicCoefficients(int M, double radius, Eigen::VectorXd values)
        : HarmonicCoefficients(M, radius) {
        detail::require(values.size() == static_cast<Eigen::Index>(basis_size(M)),
                        "HarmonicCoefficients: expected (M+1)^2 values");
        values_ = std::move(values);
    }

    int M() const { return M_; }
    double radius() const { return radius_; }
    const Eigen::VectorXd& values() const { return values_; }
    Eigen::VectorXd& values() { return values_; }

    double operator()(int k, int j) const { return values_[static_cast<Eigen::Index>(DegreeIndex(k, j).flat())]; }
    double& operator()(int k, int j) { return values_[static_cast<Eigen::Index>(DegreeIndex(k, j).flat())]; }

    /// The 2k+1 coefficients of degree k.
    auto degree(int k) const { return values_.segment(static_cast<Eigen::Index>(k) * k, 2 * k + 1); }
    auto degree(int k) { return values_.segment(static_cast<Eigen::Index>(k) * k, 2 * k + 1); }

    HarmonicCoefficients operator-(const HarmonicCoefficients& o) const {
        detail::require(M_ == o.M_ && detail::same_radius(radius_, o.radius_),
                        "HarmonicCoefficients: operands differ in degree or radius");
        return HarmonicCoefficients(M_, radius_, values_ - o.values_);
    }

    HarmonicCoefficients scaled(double s) const { return HarmonicCoefficients(M_, radius_, values_ * s); }

private:
    int M_;
    double radius_;
    Eigen::VectorXd values_;
};

/// Matrix of basis values (1/r) Y_{k,j}(t/r) at a fixed point set, one row per
/// point. All points must share one radius.
class BasisMatrix {
public:
    BasisMatrix(int M, std::span<const SpherePoint> points) : M_(M) {
        detail::require(M >= 0, "BasisMatrix: M must be >= 0");
        detail::require(!points.empty(), "BasisMatrix: empty point set");
        radius_ = points.front().radius();
        const auto nb = static_cast<Eigen::Index>(basis_size(M));
        // Column-major storage; build the transpose so each point writes a contiguous column.
        Eigen::MatrixXd bt(nb, static_cast<Eigen::Index>(points.size()));
        for (std::size_t i = 0; i < points.size(); ++i) {
            detail::require(detail::same_radius(points[i].radius(), radius_),
                            "BasisMatrix: points lie on different spheres");
            sph_harm_all(M, points[i].direction(), std::span<double>(bt.col(static_cast<Eigen::Index>(i)).data(), nb));
        }
        matrix_ = bt.transpose() / radius_;
    }

    int M() const { return M_; }
    double radius() const { return radius_; }
    Eigen::Index rows() const { return matrix_.rows(); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }

    /// Values at the points of the function with the given coefficients.
    Eigen::VectorXd synthesize(const HarmonicCoefficients& c) const {
        check(c);
        return matrix_.leftCols(static_cast<Eigen::Index>(basis_size(c.M()))) * c.values();
    }

    void check(const HarmonicCoefficients& c) const {
        detail::require(detail::same_radius(c.radius(), radius_),
                        "synthesize: coefficients live on radius " + std::to_string(c.radius()) +
                            " but points on radius " + std::to_string(radius_));
        detail::require(c.M() <= M_, "synthesize: coefficient degree exceeds basis degree");
    }

private:
    int M_;
    double radius_ = 1.0;
    Eigen::MatrixXd matrix_;
};

/// Discrete Fourier analysis with a cubature rule exact to degree 2M.
class Analyzer {
public:
    Analyzer(const CubatureRule& rule, int M) : M_(M), n_(rule.size()), basis_(M, rule.points()) {
        detail::require(rule.exactness_degree() >= 2 * M,
                        "analyze: rule exact to degree " + std::to_string(rule.exactness_degree()) +
                            " but degree 2M = " + std::to_string(2 * M) + " is required");
        weights_ = Eigen::Map<const Eigen::VectorXd>(rule.weights().data(), static_cast<Eigen::Index>(n_));
    }

    int M() const { return M_; }
    std::size_t size() const { return n_; }
    double radius() const { return basis_.radius(); }
    const BasisMatrix& basis() const { return basis_; }

    /// c_{k,j} = sum_i w_i (1/rho) Y_{k,j}(t_i/rho) samples_i
    HarmonicCoefficients analyze(std::span<const double> samples) const {
        detail::require(samples.size() == n_, "analyze: expected " + std::to_string(n_) + " samples, got " +
                                                   std::to_string(samples.size()));
        const Eigen::Map<const Eigen::VectorXd> s(samples.data(), static_cast<Eigen::Index>(n_));
        Eigen::VectorXd ws = weights_.cwiseProduct(s);
        return HarmonicCoefficients(M_, radius(), basis_.matrix().transpose() * ws);
    }

private:
    int M_;
    std::size_t n_;
    BasisMatrix basis_;
    Eigen::VectorXd weights_;
};

inline HarmonicCoefficients analyze(std::span<const double> samples, const CubatureRule& rule, int M) {
    return Analyzer(rule, M).analyze(samples);
}

inline std::vector<double> synthesize(const HarmonicCoefficients& c, std::span<const SpherePoint> pts) {
    if (pts.empty()) return {};
    const BasisMatrix b(c.M(), pts);
    const Eigen::VectorXd v = b.synthesize(c);
    return {v.data(), v.data() + v.size()};
}

/// Per-degree multipliers (a_k), k = 0..M, of the operator mapping functions
/// on the sphere of radius R to functions on the sphere of radius rho.
class SphericalSymbol {
public:
    SphericalSymbol(std::vector<double> a, double R, double rho, std::string name = "custom")
        : a_(std::move(a)), R_(R), rho_(rho), name_(std::move(name)) {
        detail::require(!a_.empty(), "SphericalSymbol: empty symbol");
        detail::require(R > 0.0 && rho >= R, "SphericalSymbol: need 0 < R <= rho");
        for (std::size_t k = 0; k < a_.size(); ++k) {
            detail::require(a_[k] > 0.0 && std::isfinite(a_[k]),
                            name_ + " symbol: a_" + std::to_string(k) + " is not positive");
            if (k > 0) {
                detail::require(a_[k] <= a_[k - 1] * (1.0 + 1e-14),
                                name_ + " symbol is not nonincreasing at k = " + std::to_string(k) +
                                    " (invalid preset configuration)");
            }
        }
    }

    int M() const { return static_cast<int>(a_.size()) - 1; }
    double R() const { return R_; }
    double rho() const { return rho_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& a() const { return a_; }
    double operator[](int k) const { return a_[static_cast<std::size_t>(k)]; }

private:
    std::vector<double> a_;
    double R_;
    double rho_;
    std::string name_;
};

enum class SymbolKind { sst, sgg, geometric, polynomial };

struct SymbolSpec {
    SymbolKind kind = SymbolKind::geometric;
    double param = 1.48;  // base q for geometric, exponent s for polynomial; unused otherwise
};

/// sst:        a_k = (k+1)/rho (R/rho)^k
/// sgg:        a_k = (k+1)(k+2)/rho^2 (R/rho)^k
/// geometric:  a_k = q^{-k}
/// polynomial: a_k = (k+1)^{-s}
inline SphericalSymbol symbol_preset(SymbolSpec spec, double R, double rho, int M) {
    detail::require(M >= 0, "symbol_preset: M must be >= 0");
    detail::require(R > 0.0 && R <= rho, "symbol_preset: need 0 < R <= rho");
    std::vector<double> a(static_cast<std::size_t>(M) + 1);
    std::string name;
    switch (spec.kind) {
        case SymbolKind::sst:
            name = "sst";
            for (int k = 0; k <= M; ++k) a[k] = (k + 1.0) / rho * std::pow(R / rho, k);
            break;
        case SymbolKind::sgg:
            name = "sgg";
            for (int k = 0; k <= M; ++k) a[k] = (k + 1.0) * (k + 2.0) / (rho * rho) * std::pow(R / rho, k);
            break;
        case SymbolKind::geometric:
            detail::require(spec.param > 1.0, "symbol_preset: geometric base must be > 1");
            name = "geometric";
            for (int k = 0; k <= M; ++k) a[k] = std::pow(spec.param, -k);
            break;
        case SymbolKind::polynomial:
            detail::require(spec.param > 0.0, "symbol_preset: polynomial exponent must be > 0");
            name = "polynomial";
            for (int k = 0; k <= M; ++k) a[k] = std::pow(k + 1.0, -spec.param);
            break;
    }
    return SphericalSymbol(std::move(a), R, rho, std::move(name));
}

/// y_{k,j} = a_k x_{k,j}; input on radius R, output on radius rho.
inline HarmonicCoefficients apply_forward(const SphericalSymbol& symbol, const HarmonicCoefficients& x) {
    detail::require(detail::same_radius(x.radius(), symbol.R()), "apply_forward: coefficients are not on radius R");
    detail::require(x.M() <= symbol.M(), "apply_forward: coefficient degree exceeds symbol length");
    HarmonicCoefficients y(x.M(), symbol.rho());
    for (int k = 0; k <= x.M(); ++k) y.degree(k) = symbol[k] * x.degree(k);
    return y;
}

/// Per-degree denominators w_k of a Sobolev-type norm.
struct SmoothnessWeights {
    std::vector<double> w;
};

/// sqrt( sum_{k,j} c_{k,j}^2 / w_k )
inline double sobolev_norm(const HarmonicCoefficients& c, const SmoothnessWeights& weights) {
    detail::require(weights.w.size() >= static_cast<std::size_t>(c.M()) + 1,
                    "sobolev_norm: weight table does not cover degrees 0..M");
    double s = 0.0;
    for (int k = 0; k <= c.M(); ++k) {
        const double wk = weights.w[static_cast<std::size_t>(k)];
        detail::require(wk > 0.0, "sobolev_norm: weight w_" + std::to_string(k) + " is not positive");
        s += c.degree(k).squaredNorm() / wk;
    }
    return std::sqrt(s);
}

}  // namespace sphreg
