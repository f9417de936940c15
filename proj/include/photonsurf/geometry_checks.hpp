#pragma once

// Curvature identities and isotropic conditions evaluated numerically on
// class-S spacetimes and sampled photon-surface profiles.

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "photonsurf/errors.hpp"
#include "photonsurf/isotropic.hpp"
#include "photonsurf/numerics/finite_difference.hpp"
#include "photonsurf/photon_surface.hpp"
#include "photonsurf/spacetime.hpp"

namespace photonsurf {

/// Outcome of a check that only applies to some families.
struct CheckResult {
    bool applicable = true;
    double residual = 0.0;
    double expected = 0.0;
    std::string note;
};

// ---------------------------------------------------------------------------
// Surface scalar curvature

/// Scalar curvature of p = -ds² + r(s)² Ω_{n-1} from r, ṙ, r̈ at one point.
inline double warped_scalar_curvature(int n, double r, double dr, double ddr) {
    const double k = static_cast<double>(n - 1);
    return 2.0 * k * ddr / r + k * (k - 1.0) * (1.0 + dr * dr) / (r * r);
}

/// max |R_p − target| over interior samples, with r̈ from Richardson-
/// extrapolated centered differences. The target is n(n−1)α² for vacuum and
/// (n−1)Λ + n(n−1)α² for an Einstein family with constant Λ.
inline CheckResult surface_scalar_curvature_check(const ClassSSpacetime& st, const ProfileCurve& curve, double alpha) {
    if (curve.samples.size() < 5) throw Error(ErrorCode::TooFewSamples, "scalar curvature check needs >= 5 samples");
    const double h = sample_spacing(curve);
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "scalar curvature check needs uniform samples");
    CheckResult out;
    const auto lambda = st.einstein_constant();
    if (!lambda) {
        out.applicable = false;
        out.note = "no constant Einstein curvature known for this family; identity skipped";
        return out;
    }
    const int n = st.n();
    out.expected = static_cast<double>(n - 1) * *lambda + n * (n - 1) * alpha * alpha;
    if (*lambda != 0.0) out.note = "non-vacuum: checked with the Einstein-constant term";
    const auto r = curve.column(&ProfileSample::r);
    for (std::size_t i = 2; i + 2 < r.size(); ++i) {
        const double ddr = numerics::second_derivative_richardson(r, i, h);
        const double rp = warped_scalar_curvature(n, r[i], curve.samples[i].dr, ddr);
        out.residual = std::max(out.residual, std::abs(rp - out.expected));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Static slice data of the round spheres {t = const, r = const}

struct SliceData {
    double r = 0.0;
    double N = 0.0;        // lapse √f
    double H = 0.0;        // mean curvature (n−1)√f / r
    double nu_N = 0.0;     // normal derivative of the lapse, f'/2
    double R_sigma = 0.0;  // (n−1)(n−2)/r²
};

inline SliceData slice_data(const ClassSSpacetime& st, double r) {
    const auto mv = st(r);
    if (!(mv.f > 0.0)) {
        std::ostringstream os;
        os << "f(r) <= 0 at r = " << r;
        throw Error(ErrorCode::OutOfDomain, os.str());
    }
    const double k = static_cast<double>(st.n() - 1);
    SliceData d;
    d.r = r;
    d.N = std::sqrt(mv.f);
    d.H = k * d.N / r;
    d.nu_N = 0.5 * mv.df;
    d.R_sigma = k * (k - 1.0) / (r * r);
    return d;
}

/// |R_σ − 2Hν(N)/N − ((n−2)/(n−1))H²|; only expected to vanish for vacuum.
inline CheckResult slice_identity_residual(const ClassSSpacetime& st, double r) {
    const auto d = slice_data(st, r);
    const double k = static_cast<double>(st.n() - 1);
    CheckResult out;
    out.residual = std::abs(d.R_sigma - 2.0 * d.H * d.nu_N / d.N - ((k - 1.0) / k) * d.H * d.H);
    if (!st.is_vacuum()) {
        out.applicable = false;
        out.note = "identity not expected to hold (non-vacuum family)";
    }
    return out;
}

struct CConstant {
    double c = 0.0;
    double constraint1 = 0.0;  // |R_σ − cH²|
    double constraint2 = 0.0;  // |2ν(N) − (c − (n−2)/(n−1))HN|
};

inline CConstant c_constant(const ClassSSpacetime& st, double r) {
    if (!st.in_closure(r)) throw Error(ErrorCode::OutOfDomain, "radius outside the radial interval");
    const auto mv = st(r);
    const double k = static_cast<double>(st.n() - 1);
    const double N = std::sqrt(std::max(0.0, mv.f));
    const double H = k * N / r;
    if (!(H > 1e-14 * k / r)) {
        std::ostringstream os;
        os << "mean curvature H vanishes at r = " << r << ": minimal sphere (static horizon), c undefined";
        throw Error(ErrorCode::MinimalSurface, os.str());
    }
    const double nu = 0.5 * mv.df;
    const double base = (k - 1.0) / k;
    CConstant out;
    out.c = base + 2.0 * nu / (N * H);
    const double R_sigma = k * (k - 1.0) / (r * r);
    out.constraint1 = std::abs(R_sigma - out.c * H * H);
    out.constraint2 = std::abs(2.0 * nu - (out.c - base) * H * N);
    return out;
}

/// Raw flux f'(r) r^{n−1} / 2 of the lapse gradient through the sphere of radius r.
inline double mass_flux(const ClassSSpacetime& st, double r) {
    if (!st.in_closure(r)) throw Error(ErrorCode::OutOfDomain, "radius outside the radial interval");
    return 0.5 * st.df(r) * std::pow(r, st.n() - 1);
}

// ---------------------------------------------------------------------------
// Isotropic conditions

inline void require_in_J(const IsotropicForm& iso, double S) {
    if (!iso.contains(S)) {
        std::ostringstream os;
        os << "isotropic radius " << S << " outside (" << iso.s_lo() << ", " << iso.s_hi() << ")";
        throw Error(ErrorCode::OutOfDomain, os.str());
    }
}

inline double isotropic_sphere_residual(const IsotropicForm& iso, double S) {
    require_in_J(iso, S);
    const auto psi = iso.psi(S);
    const auto N = iso.lapse(S);
    return std::abs(1.0 + (psi.derivative / psi.value - N.derivative / N.value) * S);
}

struct IsotropicSample {
    double t = 0.0;
    double S = 0.0;
    double dS = 0.0;   // dS/dt
    double ddS = 0.0;  // d²S/dt²
};

inline double isotropic_surface_residual(const IsotropicForm& iso, const std::vector<IsotropicSample>& samples) {
    if (samples.empty()) throw Error(ErrorCode::TooFewSamples, "isotropic surface residual needs >= 1 sample");
    double worst = 0.0;
    for (const auto& p : samples) {
        require_in_J(iso, p.S);
        const auto psi = iso.psi(p.S);
        const auto N = iso.lapse(p.S);
        const double lp = psi.derivative / psi.value;
        const double ln = N.derivative / N.value;
        const double psi2 = psi.value * psi.value;
        const double v2 = p.dS * p.dS;
        const double res = (1.0 + lp * p.S) * (N.value * N.value - psi2 * v2) - p.S * N.derivative * N.value -
                           p.S * psi2 * (p.ddS + (lp - 2.0 * ln) * v2);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

/// Isotropic profile S(t) of a uniformly sampled area-radius profile, with
/// s = s_of_r(r). Ṡ and S̈ come from Richardson differences in arclength:
/// Ṡ = S_σ/t_σ, S̈ = (S_σσ t_σ − S_σ t_σσ)/t_σ³. Two samples are dropped at
/// each end.
template <class Map>
std::vector<IsotropicSample> map_profile_to_isotropic(const ProfileCurve& curve, Map&& s_of_r) {
    if (curve.samples.size() < 5) throw Error(ErrorCode::TooFewSamples, "mapping needs >= 5 samples");
    const double h = sample_spacing(curve);
    if (!(h > 0.0)) throw Error(ErrorCode::InvalidArgument, "mapping needs uniform samples");
    const auto t = curve.column(&ProfileSample::t);
    std::vector<double> S;
    S.reserve(curve.samples.size());
    for (const auto& p : curve.samples) S.push_back(s_of_r(p.r));
    std::vector<IsotropicSample> out;
    for (std::size_t i = 2; i + 2 < S.size(); ++i) {
        const double ts = numerics::first_derivative_richardson(t, i, h);
        const double tss = numerics::second_derivative_richardson(t, i, h);
        const double Ss = numerics::first_derivative_richardson(S, i, h);
        const double Sss = numerics::second_derivative_richardson(S, i, h);
        out.push_back({t[i], S[i], Ss / ts, (Sss * ts - Ss * tss) / (ts * ts * ts)});
    }
    return out;
}

/// Same mapping for a form produced by to_isotropic, differentiated exactly:
/// dS/dr = S/(r√f) along the radial map, with ṫ, ṙ from the samples and
/// r̈ = α²r − f'/2. Stays accurate close to a horizon, where differences of t
/// lose all precision. Every sample is kept.
inline std::vector<IsotropicSample> map_profile_to_isotropic(const IsotropicForm& iso, const ProfileCurve& curve) {
    if (!iso.provenance()) throw Error(ErrorCode::InvalidArgument, "isotropic form has no class-S provenance");
    const auto& st = iso.provenance()->spacetime;
    const double a = curve.alpha;
    std::vector<IsotropicSample> out;
    out.reserve(curve.samples.size());
    for (const auto& p : curve.samples) {
        const auto mv = st(p.r);
        const double rf = std::sqrt(mv.f);
        const double S = iso.provenance()->s_of_r(p.r);
        const double S_r = S / (p.r * rf);
        const double S_rr = S_r / (p.r * rf) - S * (rf + 0.5 * p.r * mv.df / rf) / (p.r * p.r * mv.f);
        const double ddr = a * a * p.r - 0.5 * mv.df;
        const double t1 = p.dt;
        const double t2 = a * p.dr * (mv.f - p.r * mv.df) / (mv.f * mv.f);
        const double S1 = S_r * p.dr;
        const double S2 = S_rr * p.dr * p.dr + S_r * ddr;
        out.push_back({p.t, S, S1 / t1, (S2 * t1 - S1 * t2) / (t1 * t1 * t1)});
    }
    return out;
}

}  // namespace photonsurf
