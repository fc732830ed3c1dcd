#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "obstakl/errors.hpp"

namespace obstakl {

/// Quadrature point in barycentric form: lambda[0..dim] sum to one; weights
/// sum to one (multiply by the cell measure).
struct QuadPoint {
    std::array<double, 3> lambda;
    double weight;
};

using QuadRule = std::vector<QuadPoint>;

/// Gauss-Legendre rule with `n` points on a reference interval.
inline QuadRule gauss_interval(int n) {
    std::vector<double> x, w;
    switch (n) {
        case 1: x = {0.0}; w = {2.0}; break;
        case 2: x = {-1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)}; w = {1.0, 1.0}; break;
        case 3:
            x = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
            w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
            break;
        case 4: {
            const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(1.2));
            const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(1.2));
            const double wa = (18.0 + std::sqrt(30.0)) / 36.0, wb = (18.0 - std::sqrt(30.0)) / 36.0;
            x = {-b, -a, a, b};
            w = {wb, wa, wa, wb};
            break;
        }
        case 5: {
            const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
            const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
            const double wa = (322.0 + 13.0 * std::sqrt(70.0)) / 900.0;
            const double wb = (322.0 - 13.0 * std::sqrt(70.0)) / 900.0;
            x = {-b, -a, 0.0, a, b};
            w = {wb, wa, 128.0 / 225.0, wa, wb};
            break;
        }
        default: throw InputError("gauss_interval supports 1..5 points");
    }
    QuadRule rule;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = 0.5 * (x[i] + 1.0);
        rule.push_back({{1.0 - t, t, 0.0}, 0.5 * w[i]});
    }
    return rule;
}

/// Three interior points, exact for quadratics.
inline QuadRule triangle_rule_3() {
    const double a = 2.0 / 3.0, b = 1.0 / 6.0;
    return {{{a, b, b}, 1.0 / 3.0}, {{b, a, b}, 1.0 / 3.0}, {{b, b, a}, 1.0 / 3.0}};
}

/// Seven-point rule, exact for polynomials of degree 5.
inline QuadRule triangle_rule_7() {
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, b1 = (9.0 + 2.0 * s15) / 21.0;
    const double a2 = (6.0 + s15) / 21.0, b2 = (9.0 - 2.0 * s15) / 21.0;
    const double w1 = (155.0 - s15) / 1200.0, w2 = (155.0 + s15) / 1200.0;
    return {{{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0},
            {{b1, a1, a1}, w1}, {{a1, b1, a1}, w1}, {{a1, a1, b1}, w1},
            {{b2, a2, a2}, w2}, {{a2, b2, a2}, w2}, {{a2, a2, b2}, w2}};
}

/// Load rule: 3 Gauss points per interval, 3 points per triangle.
inline QuadRule load_rule(int dim) { return dim == 1 ? gauss_interval(3) : triangle_rule_3(); }

/// Error-norm rule: 5 Gauss points per interval, degree-5 rule per triangle.
inline QuadRule error_rule(int dim) { return dim == 1 ? gauss_interval(5) : triangle_rule_7(); }

}  // namespace obstakl
