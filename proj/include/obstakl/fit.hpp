#pragma once

#include <cmath>
#include <span>

#include "obstakl/errors.hpp"

namespace obstakl {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

/// Least-squares line through (x_i, y_i).
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    detail::require(x.size() == y.size(), "linear_fit: length mismatch");
    detail::require(x.size() >= 2, "linear_fit needs at least two points");
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n, my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    detail::require(sxx > 0.0, "linear_fit: abscissae are all equal");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    // constant data is fitted exactly
    f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

}  // namespace obstakl
