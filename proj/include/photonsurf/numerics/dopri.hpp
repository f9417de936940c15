#pragma once

// Dormand-Prince 5(4) embedded Runge-Kutta stepping with a standard
// proportional step-size controller. States are fixed-size arrays so the
// whole integrator stays allocation free.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>

namespace photonsurf::numerics {

template <std::size_t N>
using State = std::array<double, N>;

struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double min_step = 1e-13;
    double max_step = std::numeric_limits<double>::infinity();
};

enum class AdvanceStatus {
    Reached,    // arrived at the requested end point
    Stopped,    // the accept hook asked to stop
    Underflow,  // step size fell below StepControl::min_step
};

namespace detail {

// Butcher tableau
inline constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
inline constexpr double a21 = 1.0 / 5.0;
inline constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
inline constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
inline constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                        a54 = -212.0 / 729.0;
inline constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                        a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
inline constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                        b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - b* (fifth minus fourth order weights)
inline constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                        e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

template <std::size_t N>
bool all_finite(const State<N>& y) {
    return std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace detail

/// One trial step of size h from (s, y). `rhs(s, y, dy)` returns false when
/// y lies outside the domain of the vector field. On success fills y_new and
/// the scaled error norm (<= 1 means acceptable).
template <std::size_t N, class Rhs>
bool dopri_trial(Rhs& rhs, double s, const State<N>& y, const State<N>& k1, double h,
                 const StepControl& ctrl, State<N>& y_new, State<N>& k7, double& err_norm) {
    using namespace detail;
    State<N> k2{}, k3{}, k4{}, k5{}, k6{}, tmp{};
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    if (!rhs(s + c2 * h, tmp, k2)) return false;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    if (!rhs(s + c3 * h, tmp, k3)) return false;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    if (!rhs(s + c4 * h, tmp, k4)) return false;
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    if (!rhs(s + c5 * h, tmp, k5)) return false;
    for (std::size_t i = 0; i < N; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    if (!rhs(s + h, tmp, k6)) return false;
    for (std::size_t i = 0; i < N; ++i)
        y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    if (!detail::all_finite(y_new) || !rhs(s + h, y_new, k7)) return false;

    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double err =
            h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale =
            ctrl.abs_tol + ctrl.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        acc += (err / scale) * (err / scale);
    }
    err_norm = std::sqrt(acc / static_cast<double>(N));
    return std::isfinite(err_norm);
}

/// Advance y from s to s_end (either direction) with adaptive substeps.
/// `h` carries the last accepted step magnitude between calls.
/// After each accepted substep `hook(s, y)` may modify y (e.g. project it
/// back onto an invariant manifold) and returns false to stop.
template <std::size_t N, class Rhs, class Hook>
AdvanceStatus dopri_advance(Rhs& rhs, Hook& hook, double& s, State<N>& y, double s_end, double& h,
                            const StepControl& ctrl) {
    const double dir = s_end >= s ? 1.0 : -1.0;
    State<N> k1{}, k7{}, y_new{};
    if (!rhs(s, y, k1)) return AdvanceStatus::Underflow;
    h = std::clamp(std::abs(h), ctrl.min_step, ctrl.max_step);
    while (dir * (s_end - s) > 0.0) {
        const double remaining = std::abs(s_end - s);
        const bool last = h >= remaining * (1.0 - 1e-12);
        const double step = last ? remaining : h;
        double err_norm = 0.0;
        const bool ok = dopri_trial<N>(rhs, s, y, k1, dir * step, ctrl, y_new, k7, err_norm);
        if (ok && err_norm <= 1.0) {
            s = last ? s_end : s + dir * step;
            y = y_new;
            const bool keep_going = hook(s, y);
            if (!rhs(s, y, k1)) return AdvanceStatus::Stopped;
            if (!keep_going) return AdvanceStatus::Stopped;
            const double grow = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -0.2) : 5.0;
            const double next = step * std::clamp(grow, 0.2, 5.0);
            if (!last || next > h) h = std::min(next, ctrl.max_step);
        } else {
            const double shrink = ok ? std::max(0.2, 0.9 * std::pow(err_norm, -0.25)) : 0.25;
            h = step * shrink;
            if (h < ctrl.min_step) return AdvanceStatus::Underflow;
        }
    }
    return AdvanceStatus::Reached;
}

}  // namespace photonsurf::numerics
