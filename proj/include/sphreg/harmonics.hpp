#pragma once

// Legendre polynomials and real orthonormal spherical harmonics.
//
// Convention: for degree k and order m = -k..k the order index is
// j = m + k + 1, and
//
//   Y_{k,j}(u) = Nbar_k^0 P_k(cos th)                         m == 0
//              = sqrt(2) Nbar_k^m P_k^m(cos th) cos(m phi)    m >  0
//              = sqrt(2) Nbar_k^|m| P_k^|m|(cos th) sin(|m| phi)  m < 0
//
// with the Condon-Shortley phase omitted. The basis is L2-orthonormal on the
// unit sphere. Coefficient arrays are stored flat, entry (k, j) at k*k + j - 1.

#include "sphreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace sphreg {

inline constexpr double four_pi = 4.0 * std::numbers::pi;

class UnitVector {
public:
    /// Throws unless x^2 + y^2 + z^2 = 1 within 1e-12.
    UnitVector(double x, double y, double z) : x_(x), y_(y), z_(z) {
        const double n2 = x * x + y * y + z * z;
        detail::require(std::abs(n2 - 1.0) <= 1e-12, "UnitVector: components are not of unit length");
    }

    static UnitVector normalized(double x, double y, double z) {
        const double n = std::sqrt(x * x + y * y + z * z);
        detail::require(n > 0.0 && std::isfinite(n), "UnitVector: cannot normalize a zero vector");
        return UnitVector(x / n, y / n, z / n, Unchecked{});
    }

    static UnitVector from_angles(double cos_theta, double phi) {
        const double s = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
        return UnitVector(s * std::cos(phi), s * std::sin(phi), cos_theta, Unchecked{});
    }

    double x() const { return x_; }
    double y() const { return y_; }
    double z() const { return z_; }

    double dot(const UnitVector& o) const { return x_ * o.x_ + y_ * o.y_ + z_ * o.z_; }

private:
    struct Unchecked {};
    UnitVector(double x, double y, double z, Unchecked) : x_(x), y_(y), z_(z) {}

    double x_;
    double y_;
    double z_;
};

/// A point t on the sphere of the given radius; direction is t / |t|.
class SpherePoint {
public:
    SpherePoint(UnitVector direction, double radius) : direction_(direction), radius_(radius) {
        detail::require(radius > 0.0 && std::isfinite(radius), "SpherePoint: radius must be positive");
    }

    /// Point given by Cartesian coordinates; the radius is |(x, y, z)|.
    static SpherePoint from_cartesian(double x, double y, double z) {
        const double r = std::sqrt(x * x + y * y + z * z);
        return SpherePoint(UnitVector::normalized(x, y, z), r);
    }

    const UnitVector& direction() const { return direction_; }
    double radius() const { return radius_; }
    double x() const { return radius_ * direction_.x(); }
    double y() const { return radius_ * direction_.y(); }
    double z() const { return radius_ * direction_.z(); }

private:
    UnitVector direction_;
    double radius_;
};

struct DegreeIndex {
    int k = 0;
    int j = 1;

    DegreeIndex(int degree, int order_index) : k(degree), j(order_index) {
        detail::require(k >= 0 && j >= 1 && j <= 2 * k + 1,
                        "DegreeIndex: need k >= 0 and 1 <= j <= 2k+1, got (" + std::to_string(k) + ", " +
                            std::to_string(j) + ")");
    }

    int order() const { return j - k - 1; }
    std::size_t flat() const { return static_cast<std::size_t>(k) * k + (j - 1); }

    static DegreeIndex from_flat(std::size_t n) {
        const int k = static_cast<int>(std::sqrt(static_cast<double>(n)));
        int kk = k;
        while (static_cast<std::size_t>(kk) * kk > n) --kk;
        while (static_cast<std::size_t>(kk + 1) * (kk + 1) <= n) ++kk;
        return DegreeIndex(kk, static_cast<int>(n - static_cast<std::size_t>(kk) * kk) + 1);
    }

    friend bool operator==(const DegreeIndex&, const DegreeIndex&) = default;
};

/// Number of harmonics of degree <= M.
constexpr std::size_t basis_size(int M) { return static_cast<std::size_t>(M + 1) * (M + 1); }

/// P_k(t) by the three-term recurrence (k+1)P_{k+1} = (2k+1)tP_k - kP_{k-1}.
inline double legendre(int k, double t) {
    detail::require(k >= 0, "legendre: degree must be nonnegative");
    if (!(std::abs(t) <= 1.0 + 1e-12)) throw std::domain_error("legendre: argument outside [-1, 1]");
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = t;
    for (int n = 1; n < k; ++n) {
        const double next = ((2.0 * n + 1.0) * t * cur - n * prev) / (n + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

/// Fills out[0..kmax] with P_0(t)..P_kmax(t).
inline void legendre_all(int kmax, double t, std::span<double> out) {
    detail::require(kmax >= 0 && out.size() >= static_cast<std::size_t>(kmax) + 1,
                    "legendre_all: output span too short");
    if (!(std::abs(t) <= 1.0 + 1e-12)) throw std::domain_error("legendre_all: argument outside [-1, 1]");
    out[0] = 1.0;
    if (kmax == 0) return;
    out[1] = t;
    for (int n = 1; n < kmax; ++n) out[n + 1] = ((2.0 * n + 1.0) * t * out[n] - n * out[n - 1]) / (n + 1.0);
}

/// All Y_{k,j}(u) for k <= M in flat canonical order. `out` must hold
/// (M+1)^2 entries.
///
/// Fully normalized associated Legendre functions are generated column by
/// column in m: the sectoral seed sqrt((2m+1)/(2m)) sin(th) Pbar_{m-1}^{m-1}
/// followed by the standard upward recurrence in degree.
inline void sph_harm_all(int M, const UnitVector& u, std::span<double> out) {
    detail::require(M >= 0, "sph_harm_all: M must be nonnegative");
    detail::require(out.size() >= basis_size(M), "sph_harm_all: output span too short");

    const double ct = u.z();
    const double st = std::hypot(u.x(), u.y());
    double c1 = 1.0;
    double s1 = 0.0;
    if (st > 0.0) {
        c1 = u.x() / st;
        s1 = u.y() / st;
    }

    double cos_m = 1.0;  // cos(m phi)
    double sin_m = 0.0;  // sin(m phi)
    double pmm = 1.0 / std::sqrt(four_pi);
    for (int m = 0; m <= M; ++m) {
        if (m > 0) {
            pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st;
            const double c = cos_m * c1 - sin_m * s1;
            sin_m = sin_m * c1 + cos_m * s1;
            cos_m = c;
        }
        const double cs = (m == 0) ? 1.0 : std::numbers::sqrt2 * cos_m;
        const double sn = std::numbers::sqrt2 * sin_m;

        auto store = [&](int k, double p) {
            const std::size_t base = static_cast<std::size_t>(k) * k + k;
            out[base + m] = p * cs;
            if (m > 0) out[base - m] = p * sn;
        };

        store(m, pmm);
        if (m == M) break;

        double p_km2 = pmm;
        double p_km1 = std::sqrt(2.0 * m + 3.0) * ct * pmm;
        store(m + 1, p_km1);
        double a_prev = std::sqrt(2.0 * m + 3.0);  // a_{m+1}^m
        for (int k = m + 2; k <= M; ++k) {
            const double kk = static_cast<double>(k);
            const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - static_cast<double>(m) * m));
            const double p = a * (ct * p_km1 - p_km2 / a_prev);
            store(k, p);
            p_km2 = p_km1;
            p_km1 = p;
            a_prev = a;
        }
    }
}

inline double sph_harm(DegreeIndex idx, const UnitVector& u) {
    std::vector<double> all(basis_size(idx.k));
    sph_harm_all(idx.k, u, all);
    return all[idx.flat()];
}

/// (1/r) Y_{k,j}(t/r) for all k <= M, flat canonical order.
inline std::vector<double> eval_basis(int M, const SpherePoint& p) {
    std::vector<double> out(basis_size(M));
    sph_harm_all(M, p.direction(), out);
    const double inv_r = 1.0 / p.radius();
    for (double& v : out) v *= inv_r;
    return out;
}

}  // namespace sphreg
