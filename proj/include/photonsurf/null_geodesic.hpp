#pragma once

// Null geodesics of class-S spacetimes from the conserved-charge reduction,
// confined to one great circle, and the photon-surface profile they generate.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "photonsurf/errors.hpp"
#include "photonsurf/numerics/dopri.hpp"
#include "photonsurf/photon_surface.hpp"
#include "photonsurf/spacetime.hpp"

namespace photonsurf {

struct ConservedCharges {
    double E = 1.0;    // energy
    double ell = 0.0;  // total angular momentum

    bool principal() const { return ell == 0.0; }
    void validate() const {
        if (!(E > 0.0)) throw Error(ErrorCode::InvalidArgument, "energy E must be positive");
        if (!(ell >= 0.0)) throw Error(ErrorCode::InvalidArgument, "angular momentum must be non-negative");
    }
};

struct GeodesicSpec {
    ConservedCharges charges;
    double r0 = 0.0;
    double t0 = 0.0;
    double phi0 = 0.0;
    int sign = +1;  // initial sign of dr/dλ; 0 only at a turning point
    double lambda_min = 0.0;
    double lambda_max = 10.0;
};

struct GeodesicSample {
    double s = 0.0;      // affine parameter
    double t = 0.0;
    double r = 0.0;
    double phi = 0.0;    // angular phase along the great circle
    double dr = 0.0;     // dr/dλ
    double sigma = 0.0;  // arclength of the generated profile, dσ/dλ = ℓ/r
};

struct NullGeodesicTrajectory {
    ConservedCharges charges;
    std::vector<GeodesicSample> samples;  // ascending affine parameter
    Termination forward_end = Termination::SpanEnd;
    Termination backward_end = Termination::SpanEnd;
};

/// |−f ṫ² + ṙ²/f + r² φ̇²| with ṫ = E/f and φ̇ = ℓ/r².
inline double null_residual(const ClassSSpacetime& st, const ConservedCharges& c, const GeodesicSample& p) {
    const double f = st.f(p.r);
    const double tdot = c.E / f;
    const double phidot = c.ell / (p.r * p.r);
    return std::abs(-f * tdot * tdot + p.dr * p.dr / f + p.r * p.r * phidot * phidot);
}

inline double umbilicity_from_charges(const ConservedCharges& c) {
    c.validate();
    if (c.principal()) {
        throw Error(ErrorCode::PrincipalNull,
                    "angular momentum is zero: the generated hypersurface is principal null, not a photon surface");
    }
    return c.E / c.ell;
}

inline double critical_impact_parameter(const ClassSSpacetime& st, const PhotonSphere& sphere) {
    return sphere.radius / std::sqrt(st.f(sphere.radius));
}

inline NullGeodesicTrajectory integrate_null_geodesic(const ClassSSpacetime& st, const GeodesicSpec& spec,
                                                      const IntegrationOptions& opt = {}) {
    const auto& c = spec.charges;
    c.validate();
    if (!(opt.spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample spacing must be positive");
    if (!(spec.lambda_min <= 0.0 && spec.lambda_max >= 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "affine span must contain 0");
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
    const double E2 = c.E * c.E, L2 = c.ell * c.ell;
    auto speed2 = [&](double r) { return E2 - L2 * st.f(r) / (r * r); };
    double q0 = speed2(spec.r0);
    if (std::abs(q0) <= 1e-14 * E2) q0 = 0.0;
    if (q0 < 0.0) {
        if (q0 >= -1e-14 * E2) {
            q0 = 0.0;
        } else {
            std::ostringstream os;
            os << "forbidden initial radius: E^2 < ell^2 f(r0)/r0^2 at r0 = " << spec.r0;
            throw Error(ErrorCode::ForbiddenRadius, os.str());
        }
    }
    if (spec.sign == 0 && q0 > opt.turning_window * std::max(1.0, E2)) {
        throw Error(ErrorCode::InvalidArgument, "sign = 0 requires r0 to be a turning point");
    }

    NullGeodesicTrajectory traj;
    traj.charges = c;
    const auto forward = detail::uniform_offsets(spec.lambda_max, opt.spacing);
    const auto backward = detail::uniform_offsets(spec.lambda_min, opt.spacing);

    // circular orbit on a photon sphere
    if (!c.principal()) {
        if (const auto sphere = detail::sphere_through(st, c.E / c.ell, spec.r0)) {
            (void)sphere;
            const double f0 = st.f(spec.r0);
            auto make = [&](double s) {
                return GeodesicSample{s,   spec.t0 + c.E / f0 * s, spec.r0, spec.phi0 + c.ell / (spec.r0 * spec.r0) * s,
                                      0.0, c.ell / spec.r0 * s};
            };
            for (auto it = backward.rbegin(); it != backward.rend(); ++it) traj.samples.push_back(make(*it));
            traj.samples.push_back(make(0.0));
            for (double s : forward) traj.samples.push_back(make(s));
            traj.forward_end = traj.backward_end = Termination::PhotonSphere;
            return traj;
        }
    }

    std::vector<double> radii;
    if (!c.principal()) {
        for (const auto& sphere : find_photon_spheres(st)) {
            if (std::abs(c.E / c.ell - sphere.alpha) <= 1e-9 * sphere.alpha) radii.push_back(sphere.radius);
        }
    }
    const auto watch = detail::make_watch(st, opt, radii);

    using State = numerics::State<5>;  // (t, r, φ, ṙ, σ)
    auto rhs = [&st, &c, L2](double, const State& y, State& dy) {
        const double r = y[1];
        if (!(r > st.r_lo()) || !(r < st.r_hi())) return false;
        const auto mv = st(r);
        if (!(mv.f > 0.0)) return false;
        dy[0] = c.E / mv.f;
        dy[1] = y[3];
        dy[2] = c.ell / (r * r);
        dy[3] = L2 * (2.0 * mv.f - r * mv.df) / (2.0 * r * r * r);
        dy[4] = c.ell / r;
        return true;
    };

    numerics::StepControl ctrl;
    ctrl.rel_tol = opt.tol;
    ctrl.abs_tol = opt.tol;
    ctrl.max_step = opt.spacing;
    ctrl.min_step = 1e-14;

    auto make_sample = [](double s, const State& y) { return GeodesicSample{s, y[0], y[1], y[2], y[3], y[4]}; };
    const double window = opt.turning_window * std::max(1.0, E2);

    auto run = [&](const std::vector<double>& grid, std::vector<GeodesicSample>& out) {
        State y{spec.t0, spec.r0, spec.phi0, spec.sign == 0 ? 0.0 : spec.sign * std::sqrt(q0), 0.0};
        double s = 0.0;
        double h = opt.spacing;
        Termination why = Termination::SpanEnd;
        bool stop = false;
        auto hook = [&](double, State& state) {
            const double q = speed2(state[1]);
            if (q > window && state[3] != 0.0) state[3] = std::copysign(std::sqrt(q), state[3]);
            stop = watch.check(state[1], why);
            return !stop;
        };
        for (double target : grid) {
            const auto status = numerics::dopri_advance<5>(rhs, hook, s, y, target, h, ctrl);
            if (status == numerics::AdvanceStatus::Underflow) {
                if (watch.check(y[1] * (1.0 - 1e-12), why) && why == Termination::InnerBoundary) break;
                std::ostringstream os;
                os << "step-size underflow at affine parameter " << s << " (t = " << y[0] << ", r = " << y[1]
                   << ", phi = " << y[2] << ")";
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

    std::vector<GeodesicSample> fwd, bwd;
    traj.forward_end = run(forward, fwd);
    traj.backward_end = run(backward, bwd);
    for (auto it = bwd.rbegin(); it != bwd.rend(); ++it) traj.samples.push_back(*it);
    traj.samples.push_back(
        make_sample(0.0, State{spec.t0, spec.r0, spec.phi0, spec.sign == 0 ? 0.0 : spec.sign * std::sqrt(q0), 0.0}));
    for (const auto& p : fwd) traj.samples.push_back(p);
    return traj;
}

/// Profile (t(σ), r(σ)) of the hypersurface swept out by rotating the
/// geodesic, parametrized by its unit-speed arclength σ. Samples keep the
/// geodesic's affine spacing, so they are generally not uniform in σ.
inline ProfileCurve generated_surface_profile(const ClassSSpacetime& st, const NullGeodesicTrajectory& traj) {
    const double alpha = umbilicity_from_charges(traj.charges);
    ProfileCurve curve;
    curve.alpha = alpha;
    curve.spacing = 0.0;
    curve.forward_end = traj.forward_end;
    curve.backward_end = traj.backward_end;
    for (const auto& p : traj.samples) {
        const double f = st.f(p.r);
        curve.samples.push_back({p.sigma, p.t, p.r, alpha * p.r / f, p.dr * p.r / traj.charges.ell});
    }
    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
        if (!(curve.samples[i].t > curve.samples[i - 1].t)) curve.t_monotone = false;
    }
    return curve;
}

/// Resample a profile onto uniform arclength spacing by cubic Hermite
/// interpolation, with ṙ interpolated using r̈ = α²r − f'/2.
inline ProfileCurve resample_profile(const ClassSSpacetime& st, const ProfileCurve& curve, double spacing) {
    if (curve.samples.size() < 2) throw Error(ErrorCode::TooFewSamples, "resample needs >= 2 samples");
    if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "sample spacing must be positive");
    const double a = curve.alpha;
    const auto s = curve.column(&ProfileSample::s);
    const auto t = curve.column(&ProfileSample::t);
    const auto dt = curve.column(&ProfileSample::dt);
    const auto r = curve.column(&ProfileSample::r);
    const auto dr = curve.column(&ProfileSample::dr);
    std::vector<double> ddr;
    for (double ri : r) ddr.push_back(a * a * ri - 0.5 * st.df(ri));

    ProfileCurve out;
    out.alpha = a;
    out.spacing = spacing;
    out.forward_end = curve.forward_end;
    out.backward_end = curve.backward_end;
    out.t_monotone = curve.t_monotone;
    const double k_lo = std::ceil(s.front() / spacing - 1e-9);
    const double k_hi = std::floor(s.back() / spacing + 1e-9);
    for (double k = k_lo; k <= k_hi; k += 1.0) {
        const double x = std::clamp(k * spacing, s.front(), s.back());
        const double rx = numerics::hermite_eval(s, r, dr, x);
        out.samples.push_back({x, numerics::hermite_eval(s, t, dt, x), rx, a * rx / st.f(rx),
                               numerics::hermite_eval(s, dr, ddr, x)});
    }
    return out;
}

struct OracleDeviation {
    double max_dt = 0.0;  // sup |t_profile - t_generated|
    double max_dr = 0.0;  // sup |r_profile - r_generated|
    std::size_t compared = 0;
};

/// Cross-check a profile against the surface generated by the null geodesic
/// with E = 1, ℓ = 1/α through the curve's s = 0 sample, on the shared
/// arclength range.
inline OracleDeviation profile_oracle_deviation(const ClassSSpacetime& st, const ProfileCurve& curve, int sign,
                                                const IntegrationOptions& opt = {}) {
    if (curve.samples.size() < 2) throw Error(ErrorCode::TooFewSamples, "oracle comparison needs >= 2 samples");
    const auto origin = std::find_if(curve.samples.begin(), curve.samples.end(),
                                     [](const ProfileSample& p) { return p.s == 0.0; });
    if (origin == curve.samples.end()) throw Error(ErrorCode::InvalidArgument, "profile has no s = 0 sample");
    double r_max = 0.0, r_min = kInfinity;
    for (const auto& p : curve.samples) {
        r_max = std::max(r_max, p.r);
        r_min = std::min(r_min, p.r);
    }

    GeodesicSpec g;
    g.charges = {1.0, 1.0 / curve.alpha};
    g.r0 = origin->r;
    g.t0 = origin->t;
    g.sign = sign;
    // dσ/dλ = ℓ/r, so λ = σ r_max / ℓ covers the arclength range
    const double stretch = 1.05 * r_max / g.charges.ell;
    g.lambda_min = curve.samples.front().s * stretch;
    g.lambda_max = curve.samples.back().s * stretch;
    IntegrationOptions gopt = opt;
    // affine spacing that keeps the generated samples at most opt.spacing apart in σ
    gopt.spacing = opt.spacing * r_min / g.charges.ell;
    const auto generated = generated_surface_profile(st, integrate_null_geodesic(st, g, gopt));

    const auto s = generated.column(&ProfileSample::s);
    const auto t = generated.column(&ProfileSample::t);
    const auto dt = generated.column(&ProfileSample::dt);
    const auto r = generated.column(&ProfileSample::r);
    const auto dr = generated.column(&ProfileSample::dr);
    OracleDeviation out;
    if (s.size() < 2) return out;
    for (const auto& p : curve.samples) {
        if (p.s < s.front() || p.s > s.back()) continue;
        out.max_dt = std::max(out.max_dt, std::abs(p.t - numerics::hermite_eval(s, t, dt, p.s)));
        out.max_dr = std::max(out.max_dr, std::abs(p.r - numerics::hermite_eval(s, r, dr, p.s)));
        ++out.compared;
    }
    return out;
}

}  // namespace photonsurf
