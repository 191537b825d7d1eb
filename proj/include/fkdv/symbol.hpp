#pragma once

#include <cmath>
#include <stdexcept>

namespace fkdv {

// Fourier multiplier m(xi) = (1 + xi^2)^(-s/2), the symbol of the smoothing
// operator. m is even, strictly decreasing in |xi|, with m(0) = 1.
inline double multiplier(double s, double xi) {
    if (!(s > 0.0) || !std::isfinite(s))
        throw std::invalid_argument("multiplier: order s must be positive");
    return std::pow(1.0 + xi * xi, -0.5 * s);
}

}  // namespace fkdv
