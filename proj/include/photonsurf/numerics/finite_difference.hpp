#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace photonsurf::numerics {

/// Five-point central first derivative, O(h^4).
template <class F>
double derivative5(F&& f, double x, double h) {
    return (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
}

/// Step for derivative5 scaled to the magnitude of x.
inline double derivative5_step(double x) {
    return 1e-3 * std::max(1.0, std::abs(x));
}

/// Centered second difference of uniformly spaced samples at index i, O(h^2).
inline double second_difference(std::span<const double> y, std::size_t i, double h) {
    return (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
}

/// Centered first difference at index i, O(h^2).
inline double first_difference(std::span<const double> y, std::size_t i, double h) {
    return (y[i + 1] - y[i - 1]) / (2.0 * h);
}

/// Richardson-extrapolated second derivative from the h and 2h stencils,
/// O(h^4). Requires 2 <= i < y.size() - 2.
inline double second_derivative_richardson(std::span<const double> y, std::size_t i, double h) {
    const double d1 = (y[i + 1] - 2.0 * y[i] + y[i - 1]) / (h * h);
    const double d2 = (y[i + 2] - 2.0 * y[i] + y[i - 2]) / (4.0 * h * h);
    return (4.0 * d1 - d2) / 3.0;
}

/// Richardson-extrapolated first derivative, O(h^4). Requires 2 <= i < size - 2.
inline double first_derivative_richardson(std::span<const double> y, std::size_t i, double h) {
    const double d1 = (y[i + 1] - y[i - 1]) / (2.0 * h);
    const double d2 = (y[i + 2] - y[i - 2]) / (4.0 * h);
    return (4.0 * d1 - d2) / 3.0;
}

/// Finite-difference weights for derivatives 0..m at x0 on arbitrary nodes
/// (Fornberg's recursion). w[k][j] multiplies the value at nodes[j] in the
/// k-th derivative.
inline std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> nodes, int m) {
    const std::size_t n = nodes.size();
    std::vector<std::vector<double>> w(m + 1, std::vector<double>(n, 0.0));
    w[0][0] = 1.0;
    double c1 = 1.0;
    double c4 = nodes[0] - x0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = std::min<int>(static_cast<int>(i), m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) w[k][i] = c1 * (k * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k) w[k][j] = (c4 * w[k][j] - k * w[k - 1][j]) / c3;
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    return w;
}

}  // namespace photonsurf::numerics
