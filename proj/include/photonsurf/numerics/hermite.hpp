#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>

namespace photonsurf::numerics {

/// Cubic Hermite interpolation through (x[i], y[i]) with slopes dy[i].
/// x must be strictly increasing.
inline double hermite_eval(std::span<const double> x, std::span<const double> y,
                           std::span<const double> dy, double at) {
    if (x.size() < 2 || y.size() != x.size() || dy.size() != x.size()) {
        throw std::invalid_argument("hermite_eval: mismatched or too short inputs");
    }
    auto it = std::upper_bound(x.begin(), x.end(), at);
    std::size_t hi = static_cast<std::size_t>(it - x.begin());
    hi = std::clamp<std::size_t>(hi, 1, x.size() - 1);
    const std::size_t lo = hi - 1;
    const double h = x[hi] - x[lo];
    const double u = (at - x[lo]) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    return h00 * y[lo] + h10 * h * dy[lo] + h01 * y[hi] + h11 * h * dy[hi];
}

}  // namespace photonsurf::numerics
