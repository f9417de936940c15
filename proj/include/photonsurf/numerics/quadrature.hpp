#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace photonsurf::numerics {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod quadrature of f over [a, b].
/// The interval is mapped onto [0, 1] first: the error estimate carries an
/// absolute floor that would otherwise stall refinement on very short
/// intervals.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double rel_tol = 1e-10, unsigned max_depth = 20) {
    QuadratureResult out;
    if (a == b) return out;
    const double w = b - a;
    auto g = [&f, a, w](double u) { return w * f(a + w * u); };
    out.value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        g, 0.0, 1.0, max_depth, rel_tol, &out.error_estimate);
    return out;
}

}  // namespace photonsurf::numerics
