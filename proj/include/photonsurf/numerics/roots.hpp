#pragma once

#include <cmath>
#include <limits>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/roots.hpp>

namespace photonsurf::numerics {

/// Log-spaced grid of `count` points on [lo, hi], endpoints included.
inline std::vector<double> log_grid(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
        throw std::invalid_argument("log_grid: need 0 < lo < hi and count >= 2");
    }
    std::vector<double> grid(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = lo * std::exp(step * static_cast<double>(i));
    }
    grid.back() = hi;
    return grid;
}

inline std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
    if (!(hi > lo) || count < 2) {
        throw std::invalid_argument("linear_grid: need lo < hi and count >= 2");
    }
    std::vector<double> grid(count);
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = lo + step * static_cast<double>(i);
    }
    grid.back() = hi;
    return grid;
}

/// Bracketing bisection on [a, b]; g(a) and g(b) must not share a strict sign.
/// Stops once the bracket is narrower than `abs_tol` or a few ulps.
template <class F>
double bisect_root(F&& g, double a, double b, double abs_tol = 1e-12) {
    const double ga = g(a);
    if (ga == 0.0) return a;
    const double gb = g(b);
    if (gb == 0.0) return b;
    auto done = [abs_tol](double lo, double hi) {
        const double w = std::abs(hi - lo);
        return w < abs_tol || w <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi));
    };
    boost::uintmax_t max_iter = 400;
    const auto bracket = boost::math::tools::bisect(g, a, b, done, max_iter);
    return 0.5 * (bracket.first + bracket.second);
}

/// All roots of g located by sign changes between consecutive grid nodes,
/// each refined by bisection. A node where g vanishes exactly counts once.
template <class F>
std::vector<double> scan_roots(F&& g, std::span<const double> grid, double abs_tol = 1e-12) {
    std::vector<double> roots;
    if (grid.size() < 2) return roots;
    double prev = g(grid[0]);
    if (prev == 0.0) roots.push_back(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = g(grid[i]);
        if (cur == 0.0) {
            roots.push_back(grid[i]);
        } else if (prev != 0.0 && std::signbit(prev) != std::signbit(cur)) {
            roots.push_back(bisect_root(g, grid[i - 1], grid[i], abs_tol));
        }
        prev = cur;
    }
    return roots;
}

}  // namespace photonsurf::numerics
