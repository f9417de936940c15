#pragma once

// Isotropic form -Ñ(s)^2 dt^2 + ψ(s)^2 δ of a class-S spacetime, the
// conversions in both directions and the conformal-flatness scan.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "photonsurf/errors.hpp"
#include "photonsurf/numerics/quadrature.hpp"
#include "photonsurf/numerics/roots.hpp"
#include "photonsurf/spacetime.hpp"

namespace photonsurf {

struct IsoValue {
    double value = 0.0;
    double derivative = 0.0;
};

/// Where an IsotropicForm came from when it was converted from a ClassSSpacetime.
struct IsotropicProvenance {
    ClassSSpacetime spacetime;
    double r0;
    double s0;                                // s(r0)
    std::function<double(double)> s_of_r;     // forward radial map
};

class IsotropicForm {
public:
    using Evaluator = std::function<IsoValue(double)>;

    IsotropicForm(double s_lo, double s_hi, Evaluator psi, Evaluator lapse,
                  std::optional<IsotropicProvenance> provenance = std::nullopt)
        : s_lo_(s_lo), s_hi_(s_hi),
          psi_(std::make_shared<const Evaluator>(std::move(psi))),
          lapse_(std::make_shared<const Evaluator>(std::move(lapse))),
          provenance_(std::move(provenance)) {
        if (!(s_lo >= 0.0) || !(s_hi > s_lo)) {
            throw Error(ErrorCode::InvalidArgument, "isotropic interval must satisfy 0 <= s_lo < s_hi");
        }
    }

    double s_lo() const { return s_lo_; }
    double s_hi() const { return s_hi_; }
    bool contains(double s) const { return s > s_lo_ && s < s_hi_; }

    IsoValue psi(double s) const { return (*psi_)(s); }
    IsoValue lapse(double s) const { return (*lapse_)(s); }

    /// r(s) = s ψ(s).
    double area_radius(double s) const { return s * psi(s).value; }

    const std::optional<IsotropicProvenance>& provenance() const { return provenance_; }

private:
    double s_lo_;
    double s_hi_;
    std::shared_ptr<const Evaluator> psi_;
    std::shared_ptr<const Evaluator> lapse_;
    std::optional<IsotropicProvenance> provenance_;
};

// ---------------------------------------------------------------------------
// Schwarzschild closed form: ψ = φ^{2/(n-2)}, Ñ = (2 - φ)/φ, φ = 1 + m/(2 s^{n-2}).

inline IsotropicForm schwarzschild_isotropic(double m, int n = 3) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "schwarzschild_isotropic requires n >= 3");
    const double k = static_cast<double>(n - 2);
    const double s_lo = m > 0.0 ? std::pow(0.5 * m, 1.0 / k) : (m == 0.0 ? 0.0 : std::pow(0.5 * -m, 1.0 / k));
    auto phi = [m, k](double s) {
        const double sk = std::pow(s, k);
        return IsoValue{1.0 + 0.5 * m / sk, -0.5 * m * k / (sk * s)};
    };
    auto psi = [phi, k](double s) {
        const auto p = phi(s);
        const double e = 2.0 / k;
        return IsoValue{std::pow(p.value, e), e * std::pow(p.value, e - 1.0) * p.derivative};
    };
    auto lapse = [phi](double s) {
        const auto p = phi(s);
        return IsoValue{(2.0 - p.value) / p.value, -2.0 * p.derivative / (p.value * p.value)};
    };
    return IsotropicForm(s_lo, kInfinity, psi, lapse);
}

/// Closed-form inverse of r = s φ_m^{2/(n-2)}(s) on the exterior (m >= 0).
inline double schwarzschild_isotropic_radius(double m, int n, double r) {
    const double k = static_cast<double>(n - 2);
    const double big = std::pow(r, 0.5 * k);  // r^{(n-2)/2} = w + m/(2w), w = s^{(n-2)/2}
    const double disc = big * big - 2.0 * m;
    if (disc < 0.0) throw Error(ErrorCode::OutOfDomain, "radius is inside the Schwarzschild horizon");
    const double w = 0.5 * (big + std::sqrt(disc));
    return std::pow(w, 2.0 / k);
}

namespace detail {

// Radial map L(r) = log s(r) = log s0 + ∫_{r0}^{r} dρ / (ρ √f(ρ)), tabulated on
// log-spaced nodes; off-node values integrate from the nearest node.
class IsotropicRadialMap {
public:
    IsotropicRadialMap(ClassSSpacetime st, double r0, double s0, double rel_tol)
        : st_(std::move(st)), rel_tol_(rel_tol) {
        const double r_lo = st_.r_lo();
        if (r_lo > 0.0) {
            const double f_lo = st_.f(r_lo);
            if (std::abs(f_lo) <= 1e-10) {
                horizon_ = true;
                check_horizon_order();
            }
        }
        if (!st_.in_closure(r0) || (r0 == 0.0)) {
            std::ostringstream os;
            os << "r0 = " << r0 << " is outside the closure of (" << st_.r_lo() << ", " << st_.r_hi() << ")";
            throw Error(ErrorCode::OutOfDomain, os.str());
        }
        if (!horizon_ && !(st_.f(r0) > 0.0)) {
            throw Error(ErrorCode::OutOfDomain, "f(r0) <= 0 outside a simple horizon");
        }
        if (!(s0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "isotropic normalization s(r0) must be > 0");

        const double scale = std::max(1.0, r0);
        double first = r_lo > 0.0 ? r_lo : 1e-6 * scale;
        double last = std::isfinite(st_.r_hi()) ? st_.r_hi() : std::max(1e4, 1e3 * scale);
        if (std::isfinite(st_.r_hi()) && std::abs(st_.f(st_.r_hi())) <= 1e-10) {
            throw Error(ErrorCode::NonIntegrable, "outer endpoint is a zero of f; not supported");
        }
        constexpr std::size_t kNodes = 129;
        nodes_.resize(kNodes);
        const double ratio = std::log(last / first) / static_cast<double>(kNodes - 1);
        for (std::size_t i = 0; i < kNodes; ++i) nodes_[i] = first * std::exp(ratio * static_cast<double>(i));
        nodes_.front() = first;
        nodes_.back() = last;
        values_.assign(kNodes, 0.0);
        for (std::size_t i = 1; i < kNodes; ++i) {
            values_[i] = values_[i - 1] + segment(nodes_[i - 1], nodes_[i]);
        }
        const double shift = std::log(s0) - primitive(r0);
        for (double& v : values_) v += shift;

        s_lo_ = r_lo > 0.0 ? std::exp(values_.front())
                           : std::exp(values_.front() - segment(1e-150, nodes_.front()));
        if (s_lo_ < 1e-100) s_lo_ = 0.0;
        s_hi_ = std::isfinite(st_.r_hi()) ? std::exp(values_.back()) : kInfinity;
    }

    const ClassSSpacetime& spacetime() const { return st_; }
    double s_lo() const { return s_lo_; }
    double s_hi() const { return s_hi_; }

    /// log s(r).
    double log_s(double r) const { return primitive(r); }

    /// Inverse map r(s), s in J.
    double radius(double s) const {
        if (!(s > s_lo_) || !(s < s_hi_)) {
            if (!(s >= s_lo_ && s <= s_hi_)) {
                std::ostringstream os;
                os << "isotropic radius " << s << " outside (" << s_lo_ << ", " << s_hi_ << ")";
                throw Error(ErrorCode::OutOfDomain, os.str());
            }
            if (s == s_lo_ && st_.r_lo() > 0.0) return st_.r_lo();
        }
        const double target = std::log(s);
        double lo = 0.0, hi = 0.0;
        if (target <= values_.front()) {
            hi = nodes_.front();
            lo = hi * 0.5;
            if (st_.r_lo() > 0.0) {
                lo = st_.r_lo();
            } else {
                while (primitive(lo) > target) lo *= 0.5;
            }
        } else if (target >= values_.back()) {
            lo = nodes_.back();
            hi = lo * 2.0;
            while (primitive(hi) < target) {
                lo = hi;
                hi *= 2.0;
                if (hi > st_.r_hi()) {
                    hi = st_.r_hi();
                    break;
                }
            }
        } else {
            const auto it = std::upper_bound(values_.begin(), values_.end(), target);
            const std::size_t j = static_cast<std::size_t>(it - values_.begin());
            lo = nodes_[j - 1];
            hi = nodes_[j];
        }
        return invert_bracketed(target, lo, hi);
    }

private:
    double integrand_log(double x) const {
        const double r = std::exp(x);
        return 1.0 / std::sqrt(st_.f(r));
    }

    // ∫_a^b dρ / (ρ √f(ρ)), a <= b
    double segment(double a, double b) const {
        if (a == b) return 0.0;
        const double zone = horizon_ ? 1.5 * st_.r_lo() : 0.0;
        double total = 0.0;
        if (horizon_ && a < zone) {
            const double m = std::min(b, zone);
            const double r_h = st_.r_lo();
            // ρ = r_h + u^2 removes the inverse square-root singularity
            auto g = [this, r_h](double u) {
                if (u == 0.0) {
                    const double slope = st_.df(r_h);
                    return 2.0 / (r_h * std::sqrt(slope));
                }
                const double rho = r_h + u * u;
                const double fr = st_.f(rho);
                return 2.0 * u / (rho * std::sqrt(fr));
            };
            // f loses relative precision as rho -> r_h, so the integrand is noisy
            // there; a shallow refinement depth keeps that from stalling
            total += numerics::integrate(g, std::sqrt(std::max(0.0, a - r_h)), std::sqrt(m - r_h), rel_tol_, 10)
                         .value;
            a = m;
        }
        if (b > a) {
            total += numerics::integrate([this](double x) { return integrand_log(x); }, std::log(a), std::log(b),
                                         rel_tol_)
                         .value;
        }
        return total;
    }

    double primitive(double r) const {
        if (!(r >= st_.r_lo()) || !(r <= st_.r_hi()) || !(r > 0.0)) {
            std::ostringstream os;
            os << "radius " << r << " outside the closure of the radial interval";
            throw Error(ErrorCode::OutOfDomain, os.str());
        }
        if (!values_ready()) return 0.0;
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
        std::size_t j = static_cast<std::size_t>(it - nodes_.begin());
        if (j == 0) return values_.front() - segment(r, nodes_.front());
        --j;
        if (j + 1 < nodes_.size() && (nodes_[j + 1] - r) < (r - nodes_[j])) {
            return values_[j + 1] - segment(r, nodes_[j + 1]);
        }
        return values_[j] + segment(nodes_[j], r);
    }

    bool values_ready() const { return !values_.empty(); }

    double invert_bracketed(double target, double lo, double hi) const {
        double f_lo = primitive(lo) - target;
        double f_hi = primitive(hi) - target;
        if (f_lo > 0.0 || f_hi < 0.0) {
            throw Error(ErrorCode::OutOfDomain, "isotropic inverse: target outside bracket");
        }
        double r = f_hi - f_lo > 0.0 ? lo + (hi - lo) * (-f_lo) / (f_hi - f_lo) : 0.5 * (lo + hi);
        for (int iter = 0; iter < 100; ++iter) {
            const double g = primitive(r) - target;
            if (g == 0.0) return r;
            if (g < 0.0) lo = r; else hi = r;
            const double fr = st_.f(r);
            double next = fr > 0.0 ? r - g * r * std::sqrt(fr) : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            if (std::abs(next - r) <= 1e-15 * r) return next;
            r = next;
            if (hi - lo <= 1e-15 * hi) return 0.5 * (lo + hi);
        }
        return r;
    }

    // Integrability at a zero of f requires f ~ (r - r_h)^k with k < 2.
    void check_horizon_order() const {
        const double r_h = st_.r_lo();
        const double d = 1e-4 * r_h;
        const double f1 = st_.f(r_h + d);
        const double f2 = st_.f(r_h + 2.0 * d);
        const double order = std::log2(f2 / f1);
        if (!(f1 > 0.0) || !(order < 1.9)) {
            std::ostringstream os;
            os << "1/(r sqrt f) is not integrable at r = " << r_h << " (f vanishes to order ~" << order << ")";
            throw Error(ErrorCode::NonIntegrable, os.str());
        }
    }

    ClassSSpacetime st_;
    double rel_tol_;
    bool horizon_ = false;
    std::vector<double> nodes_;
    std::vector<double> values_;
    double s_lo_ = 0.0;
    double s_hi_ = kInfinity;
};

}  // namespace detail

/// Rewrite a class-S spacetime in isotropic form; s(r0) = s0 (default s0 = r0).
/// Quadrature runs at `rel_tol`.
inline IsotropicForm to_isotropic(const ClassSSpacetime& st, double r0, std::optional<double> s0 = std::nullopt,
                                  double rel_tol = 1e-10) {
    const double norm = s0.value_or(r0);
    auto map = std::make_shared<const detail::IsotropicRadialMap>(st, r0, norm, rel_tol);
    auto psi = [map](double s) {
        const double r = map->radius(s);
        const double root_f = std::sqrt(std::max(0.0, map->spacetime().f(r)));
        return IsoValue{r / s, r * (root_f - 1.0) / (s * s)};
    };
    auto lapse = [map](double s) {
        const double r = map->radius(s);
        const auto mv = map->spacetime()(r);
        return IsoValue{std::sqrt(std::max(0.0, mv.f)), mv.df * r / (2.0 * s)};
    };
    auto forward = [map](double r) { return std::exp(map->log_s(r)); };
    return IsotropicForm(map->s_lo(), map->s_hi(), psi, lapse, IsotropicProvenance{st, r0, norm, forward});
}

/// Forward map s(r) for a form produced by to_isotropic.
inline double isotropic_radius_of(const IsotropicForm& iso, double r) {
    if (!iso.provenance()) {
        throw Error(ErrorCode::InvalidArgument, "isotropic form has no class-S provenance");
    }
    return iso.provenance()->s_of_r(r);
}

/// Normalization s(r0) matching the Schwarzschild closed form; r0 defaults for other families.
inline double calibrated_normalization(const ClassSSpacetime& st, double r0) {
    if (st.family() == Family::Schwarzschild && st.params().m >= 0.0) {
        return schwarzschild_isotropic_radius(st.params().m, st.n(), r0);
    }
    return r0;
}

inline IsotropicForm to_isotropic_calibrated(const ClassSSpacetime& st, double r0, double rel_tol = 1e-10) {
    return to_isotropic(st, r0, calibrated_normalization(st, r0), rel_tol);
}

// ---------------------------------------------------------------------------

namespace detail {

// Interior probe grid over J, clipping infinite or zero endpoints.
inline std::vector<double> isotropic_probe_grid(const IsotropicForm& iso, std::size_t count) {
    double lo = iso.s_lo();
    double hi = iso.s_hi();
    if (!std::isfinite(hi)) hi = std::max(100.0, 100.0 * std::max(lo, 1.0));
    if (lo <= 0.0) lo = 1e-6 * hi;
    return numerics::log_grid(lo, hi, std::max<std::size_t>(count, 2));
}

}  // namespace detail

struct CompatibilityReport {
    bool compatible = true;
    double worst_s = 0.0;
    double worst_residual = 0.0;
};

/// Checks Ñ(s) = 1 + sψ'(s)/ψ(s) > 0 on an interior grid of J.
inline CompatibilityReport isotropic_compatibility(const IsotropicForm& iso, double tol = 1e-8,
                                                   std::size_t grid = 512) {
    CompatibilityReport report;
    auto nodes = detail::isotropic_probe_grid(iso, grid + 2);
    for (std::size_t i = 1; i + 1 < nodes.size(); ++i) {
        const double s = nodes[i];
        const auto psi = iso.psi(s);
        const auto lapse = iso.lapse(s);
        const double required = 1.0 + s * psi.derivative / psi.value;
        double residual = std::abs(lapse.value - required);
        if (!(required > 0.0) || !(lapse.value > 0.0) || !(psi.value > 0.0)) {
            residual = std::max(residual, 1.0 + std::abs(required));
        }
        if (!std::isfinite(residual)) residual = kInfinity;
        if (residual > report.worst_residual) {
            report.worst_residual = residual;
            report.worst_s = s;
        }
    }
    report.compatible = report.worst_residual <= tol;
    return report;
}

/// Class-S form of an isotropic spacetime: r = sψ(s), f(r) = Ñ(s(r))^2.
inline ClassSSpacetime from_isotropic(const IsotropicForm& iso, int n = 3, double tol = 1e-8) {
    const auto report = isotropic_compatibility(iso, tol);
    if (!report.compatible) {
        std::ostringstream os;
        os << "isotropic data cannot be written in class-S form: worst violation of Ñ = 1 + sψ'/ψ > 0 is "
           << report.worst_residual << " at s = " << report.worst_s;
        throw Error(ErrorCode::IncompatibleIsotropic, os.str());
    }
    auto radius_at = [iso](double s) {
        if (s <= 0.0) return 0.0;
        const double r = iso.area_radius(s);
        return std::isfinite(r) ? r : 0.0;
    };
    const double r_lo = iso.s_lo() > 0.0 ? radius_at(iso.s_lo()) : 0.0;
    const double r_hi = std::isfinite(iso.s_hi()) ? radius_at(iso.s_hi()) : kInfinity;

    auto shared = std::make_shared<const IsotropicForm>(iso);
    auto eval = [shared](double r) {
        const auto& form = *shared;
        // sψ(s) is increasing with derivative ψ + sψ' = ψ (1 + sψ'/ψ)
        double lo = form.s_lo();
        double hi = std::isfinite(form.s_hi()) ? form.s_hi() : std::max(2.0 * r, 1.0);
        if (!std::isfinite(form.s_hi())) {
            while (form.area_radius(hi) < r) hi *= 2.0;
        }
        double s = r;
        if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
        for (int iter = 0; iter < 100; ++iter) {
            const auto psi = form.psi(s);
            const double g = s * psi.value - r;
            if (g == 0.0) break;
            if (g < 0.0) lo = s; else hi = s;
            const double slope = psi.value + s * psi.derivative;
            double next = slope > 0.0 ? s - g / slope : 0.5 * (lo + hi);
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
            const bool converged = std::abs(next - s) <= 1e-15 * s;
            s = next;
            if (converged || hi - lo <= 1e-15 * hi) break;
        }
        const auto psi = form.psi(s);
        const auto lapse = form.lapse(s);
        const double dr_ds = psi.value + s * psi.derivative;
        return MetricValue{lapse.value * lapse.value, 2.0 * lapse.value * lapse.derivative / dr_ds};
    };
    return ClassSSpacetime(n, r_lo, r_hi, MetricProfile(eval, "from isotropic form"), Family::Custom);
}

struct Subinterval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Maximal runs of the grid on J where |Ñ'/Ñ - ψ'/ψ| < tol, i.e. where the
/// spacetime is locally conformally flat and extra photon surfaces may exist.
inline std::vector<Subinterval> conformal_flatness_scan(const IsotropicForm& iso, std::size_t grid = 512,
                                                        double tol = 1e-10) {
    std::vector<Subinterval> runs;
    if (grid < 2) throw Error(ErrorCode::InvalidArgument, "conformal_flatness_scan needs >= 2 grid points");
    const auto nodes = detail::isotropic_probe_grid(iso, grid);
    auto flat_at = [&](std::size_t i) {
        double s = nodes[i];
        // endpoints of J may be degenerate (Ñ = 0 at a horizon); probe just inside
        if (i == 0 && s == iso.s_lo()) s *= 1.0 + 1e-9;
        if (i + 1 == nodes.size() && s == iso.s_hi()) s *= 1.0 - 1e-9;
        const auto psi = iso.psi(s);
        const auto lapse = iso.lapse(s);
        const double gap = std::abs(lapse.derivative / lapse.value - psi.derivative / psi.value);
        return std::isfinite(gap) && gap < tol;
    };
    std::optional<std::size_t> start;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const bool flat = flat_at(i);
        if (flat && !start) start = i;
        if (!flat && start) {
            runs.push_back({nodes[*start], nodes[i - 1]});
            start.reset();
        }
    }
    if (start) runs.push_back({nodes[*start], nodes.back()});
    // runs touching the ends of the grid extend to the ends of J
    for (auto& run : runs) {
        if (run.lo == nodes.front()) run.lo = iso.s_lo();
        if (run.hi == nodes.back()) run.hi = iso.s_hi();
    }
    return runs;
}

}  // namespace photonsurf
