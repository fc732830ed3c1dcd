#pragma once

/// Exact integrals of y^alpha against products of linear functions on an
/// axial interval. The weight is singular at y = 0 for alpha < 0, so these
/// are evaluated analytically instead of by Gauss quadrature.

#include <array>
#include <cmath>

#include "obstakl/errors.hpp"

namespace obstakl {

/// G_m = int_lo^hi y^alpha t^m dy with t = (y - lo)/(hi - lo), m in {0,1,2}.
///
/// Near y = 0 (or when the interval is long compared to its distance from the
/// origin) the power rule is used directly. For short intervals far from the
/// origin the power-rule differences cancel, so the weight is expanded as
/// lo^alpha (1 + r t)^alpha with r = (hi-lo)/lo <= 1/2 and the binomial series
/// is integrated term by term.
inline double weighted_moment(double lo, double hi, double alpha, int m) {
    detail::require(lo >= 0.0 && hi > lo, "weighted_moment needs 0 <= lo < hi");
    detail::require(std::abs(alpha) < 1.0, "weight exponent must satisfy |alpha| < 1");
    detail::require(m >= 0 && m <= 2, "weighted_moment supports m = 0, 1, 2");
    const double L = hi - lo;
    if (lo == 0.0) return std::pow(L, alpha + 1.0) / (alpha + m + 1.0);
    const double r = L / lo;
    if (r <= 0.5) {
        double sum = 0.0;
        double coeff = 1.0;  // binom(alpha, j) r^j
        for (int j = 0; j < 200; ++j) {
            const double term = coeff / (j + m + 1.0);
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
            coeff *= (alpha - j) / (j + 1.0) * r;
        }
        return L * std::pow(lo, alpha) * sum;
    }
    static constexpr std::array<std::array<double, 3>, 3> binom{{{1, 0, 0}, {1, 1, 0}, {1, 2, 1}}};
    double sum = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double p = alpha + i + 1.0;
        const double diff = std::pow(hi, p) - std::pow(lo, p);
        sum += binom[m][i] * std::pow(-lo, m - i) * diff / p;
    }
    return sum / std::pow(L, m);
}

/// Weighted 1D element matrices for the hat functions of [a,b], integrated
/// over a sub-interval [lo,hi] of [a,b].
struct AxialElement {
    std::array<std::array<double, 2>, 2> mass;       ///< int y^a rho_i rho_j
    std::array<std::array<double, 2>, 2> stiffness;  ///< int y^a rho_i' rho_j'
};

inline AxialElement axial_element(double a, double b, double alpha, double lo, double hi) {
    detail::require(b > a, "axial interval has zero length");
    detail::require(lo >= a && hi <= b && hi > lo, "sub-interval outside the axial cell");
    const double h = b - a;
    const double G0 = weighted_moment(lo, hi, alpha, 0);
    const double G1 = weighted_moment(lo, hi, alpha, 1);
    const double G2 = weighted_moment(lo, hi, alpha, 2);
    // rho_1 = p1 + q1 t, rho_0 = p0 + q0 t on t in [0,1].
    const double p1 = (lo - a) / h, q1 = (hi - lo) / h;
    const std::array<double, 2> p{1.0 - p1, p1}, q{-q1, q1};
    AxialElement e{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            e.mass[i][j] = p[i] * p[j] * G0 + (p[i] * q[j] + p[j] * q[i]) * G1 + q[i] * q[j] * G2;
            e.stiffness[i][j] = (i == j ? 1.0 : -1.0) * G0 / (h * h);
        }
    // exact symmetry
    e.mass[1][0] = e.mass[0][1];
    return e;
}

inline AxialElement axial_element(double a, double b, double alpha) {
    return axial_element(a, b, alpha, a, b);
}

}  // namespace obstakl
