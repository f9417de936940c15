#pragma once

// Spherically symmetric photon surfaces: photon spheres, arclength profile
// curves (t(s), r(s)), their residual checks and classification by
// umbilicity factor.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "photonsurf/errors.hpp"
#include "photonsurf/numerics/dopri.hpp"
#include "photonsurf/numerics/finite_difference.hpp"
#include "photonsurf/numerics/hermite.hpp"
#include "photonsurf/numerics/roots.hpp"
#include "photonsurf/spacetime.hpp"

namespace photonsurf {

struct PhotonSphere {
    double radius = 0.0;    // r_*
    double alpha = 0.0;     // √f(r_*) / r_*
    double residual = 0.0;  // |f'(r_*) r_* - 2 f(r_*)|
};

/// Photon-sphere condition g(r) = f'(r) r - 2 f(r).
inline double photon_sphere_condition(const ClassSSpacetime& st, double r) {
    const auto mv = st(r);
    return mv.df * r - 2.0 * mv.f;
}

inline std::vector<double> radial_scan_grid(const ClassSSpacetime& st, std::size_t grid) {
    const auto [lo, hi] = st.scan_range();
    return numerics::log_grid(lo, hi, std::max<std::size_t>(grid, 8));
}

inline std::vector<PhotonSphere> find_photon_spheres(const ClassSSpacetime& st, std::size_t grid = 512) {
    const auto nodes = radial_scan_grid(st, grid);
    auto g = [&st](double r) { return photon_sphere_condition(st, r); };
    std::vector<PhotonSphere> spheres;
    for (double r : numerics::scan_roots(g, nodes, 0.0)) {
        const double fr = st.f(r);
        spheres.push_back({r, std::sqrt(fr) / r, std::abs(g(r))});
    }
    return spheres;
}

/// (dr/dt)^2 = f^2 (α^2 r^2 - f) / (α^2 r^2); negative where r is forbidden for α.
inline double profile_slope_squared(const ClassSSpacetime& st, double alpha, double r) {
    const double fr = st.f(r);
    const double ar2 = alpha * alpha * r * r;
    return fr * fr * (ar2 - fr) / ar2;
}

/// ṙ^2 = α^2 r^2 - f(r).
inline double radial_speed_squared(const ClassSSpacetime& st, double alpha, double r) {
    return alpha * alpha * r * r - st.f(r);
}

/// Radii in I where α^2 r^2 = f(r), ascending. A double root (α = α_* at a
/// photon sphere) is reported once at r_*.
inline std::vector<double> turning_points(const ClassSSpacetime& st, double alpha, std::size_t grid = 512) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "umbilicity factor must be positive");
    const auto nodes = radial_scan_grid(st, grid);
    auto q = [&](double r) { return radial_speed_squared(st, alpha, r); };
    auto roots = numerics::scan_roots(q, nodes, 0.0);
    for (const auto& sphere : find_photon_spheres(st, grid)) {
        if (std::abs(alpha - sphere.alpha) <= 1e-9 * sphere.alpha) roots.push_back(sphere.radius);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double r : roots) {
        if (unique.empty() || r - unique.back() > 1e-6 * std::max(1.0, r)) unique.push_back(r);
    }
    return unique;
}

/// Closed-form Minkowski photon surface r(t) = √(α^-2 + (t - t0)^2).
inline double minkowski_exact(double alpha, double t0, double t) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "umbilicity factor must be positive");
    return std::sqrt(1.0 / (alpha * alpha) + (t - t0) * (t - t0));
}

// ---------------------------------------------------------------------------
// Profile integration

struct PhotonSurfaceSpec {
    double alpha = 0.0;
    double r0 = 0.0;
    double t0 = 0.0;
    int sign = +1;  // initial sign of ṙ
    double s_min = 0.0;
    double s_max = 10.0;
};

struct IntegrationOptions {
    double spacing = 1e-2;          // output sample spacing in arclength
    double tol = 1e-10;             // local error tolerance
    double turning_window = 1e-8;   // |α²r² - f| below which the second-order form runs unprojected
    double asymptote_tol = 1e-9;    // |r - r_*| / max(1, r_*) that counts as reaching a photon sphere
    double boundary_margin = 1e-9;  // stop at r_lo (1 + margin)
};

enum class Termination {
    SpanEnd,
    InnerBoundary,
    OuterBoundary,
    PhotonSphereAsymptote,
    PhotonSphere,  // exact cylinder r ≡ r_*
};

inline const char* to_string(Termination t) {
    switch (t) {
        case Termination::SpanEnd: return "span-end";
        case Termination::InnerBoundary: return "inner-boundary";
        case Termination::OuterBoundary: return "outer-boundary";
        case Termination::PhotonSphereAsymptote: return "asymptotic-to-photon-sphere";
        case Termination::PhotonSphere: return "photon-sphere";
    }
    return "unknown";
}

struct ProfileSample {
    double s = 0.0;
    double t = 0.0;
    double r = 0.0;
    double dt = 0.0;  // dt/ds
    double dr = 0.0;  // dr/ds
};

struct ProfileCurve {
    double alpha = 0.0;
    double spacing = 0.0;  // 0 when samples are not uniformly spaced
    std::vector<ProfileSample> samples;
    bool t_monotone = true;
    Termination forward_end = Termination::SpanEnd;
    Termination backward_end = Termination::SpanEnd;

    std::vector<double> column(double ProfileSample::*field) const {
        std::vector<double> out;
        out.reserve(samples.size());
        for (const auto& p : samples) out.push_back(p.*field);
        return out;
    }
};

namespace detail {

struct TerminationWatch {
    double r_stop_lo = 0.0;
    double r_stop_hi = kInfinity;
    std::vector<double> sphere_radii;
    double asymptote_tol = 1e-9;

    // returns true when r has left the chart or reached a photon-sphere asymptote
    bool check(double r, Termination& why) const {
        if (r <= r_stop_lo) {
            why = Termination::InnerBoundary;
            return true;
        }
        if (r >= r_stop_hi) {
            why = Termination::OuterBoundary;
            return true;
        }
        // only critical curves carry sphere radii, and they can only approach r_*
        for (double rs : sphere_radii) {
            if (std::abs(r - rs) < asymptote_tol * std::max(1.0, rs)) {
                why = Termination::PhotonSphereAsymptote;
                return true;
            }
        }
        return false;
    }
};

inline TerminationWatch make_watch(const ClassSSpacetime& st, const IntegrationOptions& opt,
                                   std::vector<double> sphere_radii) {
    TerminationWatch w;
    w.r_stop_lo = st.r_lo() > 0.0 ? st.r_lo() * (1.0 + opt.boundary_margin) : 0.0;
    w.r_stop_hi = std::isfinite(st.r_hi()) ? st.r_hi() * (1.0 - opt.boundary_margin) : kInfinity;
    w.sphere_radii = std::move(sphere_radii);
    w.asymptote_tol = opt.asymptote_tol;
    return w;
}

inline std::vector<double> uniform_offsets(double s_end, double spacing) {
    // multiples of spacing from 0 towards s_end (inclusive within rounding)
    std::vector<double> out;
    const double count = std::floor(std::abs(s_end) / spacing + 1e-9);
    const double dir = s_end >= 0.0 ? 1.0 : -1.0;
    for (double k = 1; k <= count; k += 1.0) out.push_back(dir * k * spacing);
    return out;
}

inline std::optional<PhotonSphere> sphere_through(const ClassSSpacetime& st, double alpha, double r0) {
    for (const auto& sphere : find_photon_spheres(st)) {
        if (std::abs(r0 - sphere.radius) <= 1e-12 * std::max(1.0, sphere.radius) &&
            std::abs(alpha - sphere.alpha) <= 1e-9 * sphere.alpha) {
            return sphere;
        }
    }
    return std::nullopt;
}

}  // namespace detail

/// Integrate a radial profile of the photon surface with umbilicity factor α
/// through (t0, r0). The regular second-order equation r̈ = α²r - f'/2 drives
/// the radius; outside the turning window ṙ is kept on the first-order branch
/// ṙ = ±√(α²r² - f), and ṫ = αr/f throughout.
inline ProfileCurve integrate_profile(const ClassSSpacetime& st, const PhotonSurfaceSpec& spec,
                                      const IntegrationOptions& opt = {}) {
    const double alpha = spec.alpha;
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "umbilicity factor must be positive");
    if (!(opt.spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample spacing must be positive");
    if (!(spec.s_min <= 0.0 && spec.s_max >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "arclength span must contain s = 0");
    }
    if (spec.sign != 1 && spec.sign != -1 && spec.sign != 0) {
        throw Error(ErrorCode::InvalidArgument, "sign must be -1, 0 or +1");
    }
    if (!st.contains(spec.r0)) {
        std::ostringstream os;
        os << "initial radius r0 = " << spec.r0 << " is outside the radial interval (" << st.r_lo() << ", "
           << st.r_hi() << ")";
        throw Error(ErrorCode::ForbiddenRadius, os.str());
    }
    const double f0 = st.f(spec.r0);
    double q0 = radial_speed_squared(st, alpha, spec.r0);
    // α²r0² − f at roundoff level is a turning point; its square root would not be
    if (std::abs(q0) <= 1e-14 * std::max(1.0, f0)) q0 = 0.0;
    if (q0 < 0.0) {
        if (q0 >= -1e-14 * std::max(1.0, f0)) {
            q0 = 0.0;
        } else {
            std::ostringstream os;
            os << "forbidden initial radius: alpha^2 r0^2 < f(r0) (" << alpha * alpha * spec.r0 * spec.r0
               << " < " << f0 << ")";
            throw Error(ErrorCode::ForbiddenRadius, os.str());
        }
    }
    if (spec.sign == 0 && q0 > opt.turning_window) {
        throw Error(ErrorCode::InvalidArgument, "sign = 0 requires r0 to be a turning point");
    }

    ProfileCurve curve;
    curve.alpha = alpha;
    curve.spacing = opt.spacing;

    const auto forward = detail::uniform_offsets(spec.s_max, opt.spacing);
    const auto backward = detail::uniform_offsets(spec.s_min, opt.spacing);

    // exact cylinder: "either" branch
    if (const auto sphere = detail::sphere_through(st, alpha, spec.r0)) {
        const double dt = 1.0 / std::sqrt(f0);
        auto make = [&](double s) { return ProfileSample{s, spec.t0 + dt * s, spec.r0, dt, 0.0}; };
        for (auto it = backward.rbegin(); it != backward.rend(); ++it) curve.samples.push_back(make(*it));
        curve.samples.push_back(make(0.0));
        for (double s : forward) curve.samples.push_back(make(s));
        curve.forward_end = curve.backward_end = Termination::PhotonSphere;
        return curve;
    }

    std::vector<double> radii;
    for (const auto& sphere : find_photon_spheres(st)) {
        if (std::abs(alpha - sphere.alpha) <= 1e-9 * sphere.alpha) radii.push_back(sphere.radius);
    }
    const auto watch = detail::make_watch(st, opt, radii);

    using State = numerics::State<3>;  // (t, r, ṙ)
    const double a2 = alpha * alpha;
    auto rhs = [&st, alpha, a2](double, const State& y, State& dy) {
        const double r = y[1];
        if (!(r > st.r_lo()) || !(r < st.r_hi())) return false;
        const auto mv = st(r);
        if (!(mv.f > 0.0)) return false;
        dy[0] = alpha * r / mv.f;
        dy[1] = y[2];
        dy[2] = a2 * r - 0.5 * mv.df;
        return true;
    };

    numerics::StepControl ctrl;
    ctrl.rel_tol = opt.tol;
    ctrl.abs_tol = opt.tol;
    ctrl.max_step = opt.spacing;
    ctrl.min_step = 1e-14;

    auto make_sample = [&](double s, const State& y) {
        const double fr = st.f(y[1]);
        return ProfileSample{s, y[0], y[1], alpha * y[1] / fr, y[2]};
    };

    auto run = [&](const std::vector<double>& grid, std::vector<ProfileSample>& out) {
        const double initial_dr = spec.sign == 0 ? 0.0 : spec.sign * std::sqrt(q0);
        State y{spec.t0, spec.r0, initial_dr};
        double s = 0.0;
        double h = opt.spacing;
        Termination why = Termination::SpanEnd;
        bool stop = false;
        auto hook = [&](double, State& state) {
            const double q = a2 * state[1] * state[1] - st.f(state[1]);
            if (q > opt.turning_window && state[2] != 0.0) state[2] = std::copysign(std::sqrt(q), state[2]);
            stop = watch.check(state[1], why);
            return !stop;
        };
        for (double target : grid) {
            const auto status = numerics::dopri_advance<3>(rhs, hook, s, y, target, h, ctrl);
            if (status == numerics::AdvanceStatus::Underflow) {
                // an inward curve may stall just outside r_lo where f -> 0
                if (watch.check(y[1] * (1.0 - 1e-12), why) && why == Termination::InnerBoundary) break;
                std::ostringstream os;
                os << "step-size underflow at s = " << s << " (t = " << y[0] << ", r = " << y[1]
                   << ", dr/ds = " << y[2] << ")";
                throw Error(ErrorCode::StepUnderflow, os.str());
            }
            if (status == numerics::AdvanceStatus::Stopped || stop) {
                if (!stop) why = Termination::InnerBoundary;
                break;
            }
            out.push_back(make_sample(s, y));
        }
        return why;
    };

    std::vector<ProfileSample> fwd, bwd;
    curve.forward_end = run(forward, fwd);
    curve.backward_end = run(backward, bwd);

    curve.samples.reserve(fwd.size() + bwd.size() + 1);
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) curve.samples.push_back(*it);
    curve.samples.push_back(make_sample(0.0, State{spec.t0, spec.r0, spec.sign * std::sqrt(q0)}));
    for (const auto& p : fwd) curve.samples.push_back(p);

    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
        if (!(curve.samples[i].t > curve.samples[i - 1].t)) curve.t_monotone = false;
    }
    return curve;
}

// ---------------------------------------------------------------------------
// Checks on sampled curves

struct ProfileInvariants {
    double max_unit_residual = 0.0;     // |f ṫ² - ṙ²/f - 1|
    double max_alpha_residual = 0.0;    // |f ṫ / r - α|
    bool future_directed = true;        // ṫ > 0 at every sample
};

inline ProfileInvariants profile_invariants(const ClassSSpacetime& st, const ProfileCurve& curve) {
    ProfileInvariants out;
    for (const auto& p : curve.samples) {
        const double fr = st.f(p.r);
        out.max_unit_residual = std::max(out.max_unit_residual, std::abs(fr * p.dt * p.dt - p.dr * p.dr / fr - 1.0));
        out.max_alpha_residual = std::max(out.max_alpha_residual, std::abs(fr * p.dt / p.r - curve.alpha));
        if (!(p.dt > 0.0)) out.future_directed = false;
    }
    return out;
}

struct OdeResidualReport {
    double max_t_residual = 0.0;     // ẗ + (f'/f) ṙ ṫ - (ṙ/r) ṫ
    double max_r_residual = 0.0;     // r̈ + (f f'/2) ṫ² - (f'/2f) ṙ² - (f ṫ)²/r
    double max_unit_residual = 0.0;  // f ṫ² - ṙ²/f - 1
    std::size_t worst_t_index = 0;
    std::size_t worst_r_index = 0;
};

inline double sample_spacing(const ProfileCurve& curve) {
    if (curve.samples.size() < 2) return 0.0;
    const double h = curve.samples[1].s - curve.samples[0].s;
    for (std::size_t i = 2; i < curve.samples.size(); ++i) {
        const double d = curve.samples[i].s - curve.samples[i - 1].s;
        if (std::abs(d - h) > 1e-6 * std::abs(h)) return 0.0;
    }
    return h;
}

/// Second-order residuals with ẗ, r̈ from centered differences of the
/// samples; maxima over interior samples.
inline OdeResidualReport ode_residuals(const ClassSSpacetime& st, const ProfileCurve& curve) {
    if (curve.samples.size() < 5) throw Error(ErrorCode::TooFewSamples, "ode_residuals needs >= 5 samples");
    const double h = sample_spacing(curve);
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "ode_residuals needs uniformly spaced samples");
    const auto t = curve.column(&ProfileSample::t);
    const auto r = curve.column(&ProfileSample::r);
    OdeResidualReport rep;
    for (std::size_t i = 1; i + 1 < curve.samples.size(); ++i) {
        const auto& p = curve.samples[i];
        const auto mv = st(p.r);
        const double f = mv.f, df = mv.df;
        const double tdd = numerics::second_difference(t, i, h);
        const double rdd = numerics::second_difference(r, i, h);
        const double res_t = std::abs(tdd + (df / f) * p.dr * p.dt - (p.dr / p.r) * p.dt);
        const double ft = f * p.dt;
        const double res_r =
            std::abs(rdd + 0.5 * f * df * p.dt * p.dt - (df / (2.0 * f)) * p.dr * p.dr - ft * ft / p.r);
        const double unit = std::abs(f * p.dt * p.dt - p.dr * p.dr / f - 1.0);
        if (res_t > rep.max_t_residual) {
            rep.max_t_residual = res_t;
            rep.worst_t_index = i;
        }
        if (res_r > rep.max_r_residual) {
            rep.max_r_residual = res_r;
            rep.worst_r_index = i;
        }
        rep.max_unit_residual = std::max(rep.max_unit_residual, unit);
    }
    return rep;
}

/// Radii where ṙ changes sign between samples, located by interpolating ṙ
/// linearly and then r with the cubic Hermite through (r, ṙ).
inline std::vector<double> sampled_turning_radii(const ProfileCurve& curve) {
    std::vector<double> out;
    const auto& sm = curve.samples;
    for (std::size_t i = 1; i < sm.size(); ++i) {
        const double a = sm[i - 1].dr, b = sm[i].dr;
        if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0)) {
            const double u = a / (a - b);
            const double h = sm[i].s - sm[i - 1].s;
            const double x[2] = {0.0, h};
            const double y[2] = {sm[i - 1].r, sm[i].r};
            const double dy[2] = {a, b};
            out.push_back(numerics::hermite_eval(x, y, dy, u * h));
        }
    }
    return out;
}

/// (t, r) at arbitrary arclength by cubic Hermite interpolation.
inline ProfileSample profile_at(const ProfileCurve& curve, double s) {
    const auto ss = curve.column(&ProfileSample::s);
    const auto t = curve.column(&ProfileSample::t);
    const auto dt = curve.column(&ProfileSample::dt);
    const auto r = curve.column(&ProfileSample::r);
    const auto dr = curve.column(&ProfileSample::dr);
    ProfileSample out;
    out.s = s;
    out.t = numerics::hermite_eval(ss, t, dt, s);
    out.r = numerics::hermite_eval(ss, r, dr, s);
    out.dt = std::nan("");
    out.dr = std::nan("");
    return out;
}

// ---------------------------------------------------------------------------
// Classification

enum class SurfaceKind { PhotonSphere, Subcritical, Critical, Supercritical, NoSphereReference };

inline const char* to_string(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::PhotonSphere: return "photon-sphere";
        case SurfaceKind::Subcritical: return "subcritical";
        case SurfaceKind::Critical: return "critical";
        case SurfaceKind::Supercritical: return "supercritical";
        case SurfaceKind::NoSphereReference: return "no-sphere-reference";
    }
    return "unknown";
}

enum class Region { Below, At, Above };

inline const char* to_string(Region r) {
    switch (r) {
        case Region::Below: return "below";
        case Region::At: return "at";
        case Region::Above: return "above";
    }
    return "unknown";
}

struct SurfaceClass {
    SurfaceKind kind = SurfaceKind::NoSphereReference;
    std::vector<PhotonSphere> spheres;
    std::vector<SurfaceKind> per_sphere;     // α compared with each α_*
    std::vector<double> turning_radii;
    std::vector<Region> region_vs_spheres;   // r0 relative to each r_*
    std::vector<Region> region_vs_turning;   // r0 relative to each turning radius
    bool admissible = true;                  // α² r0² >= f(r0)
};

inline SurfaceClass classify(const ClassSSpacetime& st, double alpha, double r0) {
    if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "umbilicity factor must be positive");
    if (!st.contains(r0)) throw Error(ErrorCode::OutOfDomain, "r0 is outside the radial interval");
    SurfaceClass out;
    out.spheres = find_photon_spheres(st);
    out.turning_radii = turning_points(st, alpha);
    out.admissible = radial_speed_squared(st, alpha, r0) >= -1e-14 * std::max(1.0, st.f(r0));

    auto region = [](double x, double ref) {
        if (std::abs(x - ref) <= 1e-9 * std::max(1.0, ref)) return Region::At;
        return x < ref ? Region::Below : Region::Above;
    };
    for (const auto& sphere : out.spheres) {
        SurfaceKind k;
        if (std::abs(alpha - sphere.alpha) <= 1e-9 * sphere.alpha) {
            k = region(r0, sphere.radius) == Region::At ? SurfaceKind::PhotonSphere : SurfaceKind::Critical;
        } else {
            k = alpha < sphere.alpha ? SurfaceKind::Subcritical : SurfaceKind::Supercritical;
        }
        out.per_sphere.push_back(k);
        out.region_vs_spheres.push_back(region(r0, sphere.radius));
    }
    for (double tp : out.turning_radii) out.region_vs_turning.push_back(region(r0, tp));

    if (out.spheres.empty()) {
        out.kind = SurfaceKind::NoSphereReference;
    } else if (std::find(out.per_sphere.begin(), out.per_sphere.end(), SurfaceKind::PhotonSphere) !=
               out.per_sphere.end()) {
        out.kind = SurfaceKind::PhotonSphere;
    } else if (std::find(out.per_sphere.begin(), out.per_sphere.end(), SurfaceKind::Critical) !=
               out.per_sphere.end()) {
        out.kind = SurfaceKind::Critical;
    } else {
        out.kind = out.per_sphere.front();
    }
    return out;
}

}  // namespace photonsurf
