#pragma once

// Static, spherically symmetric spacetimes with metric
//   g = -f(r) dt^2 + dr^2 / f(r) + r^2 Omega_{n-1}
// on R x I x S^{n-1}, plus the built-in metric families.

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/interpolators/quintic_hermite.hpp>

#include "photonsurf/errors.hpp"
#include "photonsurf/numerics/finite_difference.hpp"
#include "photonsurf/numerics/roots.hpp"

namespace photonsurf {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct MetricValue {
    double f = 0.0;
    double df = 0.0;
};

/// Radial metric function f together with its derivative f'.
class MetricProfile {
public:
    using Evaluator = std::function<MetricValue(double)>;

    MetricProfile(Evaluator eval, std::string description)
        : eval_(std::make_shared<const Evaluator>(std::move(eval))),
          description_(std::move(description)) {}

    /// f only; f' comes from a five-point central difference.
    static MetricProfile from_function(std::function<double(double)> f, std::string description) {
        auto fn = std::make_shared<const std::function<double(double)>>(std::move(f));
        return MetricProfile(
            [fn](double r) {
                const double h = numerics::derivative5_step(r) * 1e-1;
                return MetricValue{(*fn)(r), numerics::derivative5(*fn, r, h)};
            },
            std::move(description));
    }

    /// C² interpolant through tabulated (r, f) rows; r ascending. Slopes and
    /// curvatures at the nodes come from 9-point finite-difference stencils on
    /// the (possibly non-uniform) radii; evaluation is a local quintic
    /// Hermite. NaN outside the table.
    static MetricProfile from_table(std::vector<double> r, std::vector<double> f,
                                    std::string description) {
        if (r.size() < 4 || r.size() != f.size()) {
            throw Error(ErrorCode::InvalidArgument, "metric table needs >= 4 matching (r, f) rows");
        }
        for (std::size_t i = 1; i < r.size(); ++i) {
            if (!(r[i] > r[i - 1])) {
                throw Error(ErrorCode::InvalidArgument, "metric table radii must be strictly increasing");
            }
        }
        const std::size_t n = r.size();
        const std::size_t width = std::min<std::size_t>(n, 9);
        std::vector<double> d1(n), d2(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t start = std::min(i > width / 2 ? i - width / 2 : 0, n - width);
            const std::span<const double> nodes(r.data() + start, width);
            const auto w = numerics::fd_weights(r[i], nodes, 2);
            for (std::size_t j = 0; j < width; ++j) {
                d1[i] += w[1][j] * f[start + j];
                d2[i] += w[2][j] * f[start + j];
            }
        }
        const double lo = r.front(), hi = r.back();
        auto interp = std::make_shared<const boost::math::interpolators::quintic_hermite<std::vector<double>>>(
            std::move(r), std::move(f), std::move(d1), std::move(d2));
        return MetricProfile(
            [interp, lo, hi](double x) {
                if (!(x >= lo && x <= hi)) return MetricValue{std::nan(""), std::nan("")};
                return MetricValue{(*interp)(x), interp->prime(x)};
            },
            std::move(description));
    }

    MetricValue operator()(double r) const { return (*eval_)(r); }
    double f(double r) const { return (*eval_)(r).f; }
    double df(double r) const { return (*eval_)(r).df; }
    const std::string& description() const { return description_; }

private:
    std::shared_ptr<const Evaluator> eval_;
    std::string description_;
};

enum class Family { Minkowski, Schwarzschild, ReissnerNordstrom, SchwarzschildAdS, Custom };

inline const char* to_string(Family family) {
    switch (family) {
        case Family::Minkowski: return "minkowski";
        case Family::Schwarzschild: return "schwarzschild";
        case Family::ReissnerNordstrom: return "reissner-nordstrom";
        case Family::SchwarzschildAdS: return "schwarzschild-ads";
        case Family::Custom: return "custom";
    }
    return "unknown";
}

struct FamilyParams {
    double m = 0.0;
    double q = 0.0;
    double L = kInfinity;  // AdS curvature radius
};

/// Area of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
inline double unit_sphere_area(int n) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

class ClassSSpacetime {
public:
    ClassSSpacetime(int n, double r_lo, double r_hi, MetricProfile metric, Family family = Family::Custom,
                    FamilyParams params = {}, std::vector<std::string> warnings = {})
        : n_(n), r_lo_(r_lo), r_hi_(r_hi), metric_(std::move(metric)), family_(family),
          params_(params), warnings_(std::move(warnings)) {
        validate();
    }

    int n() const { return n_; }
    double r_lo() const { return r_lo_; }
    double r_hi() const { return r_hi_; }
    const MetricProfile& metric() const { return metric_; }
    Family family() const { return family_; }
    const FamilyParams& params() const { return params_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    MetricValue operator()(double r) const { return metric_(r); }
    double f(double r) const { return metric_.f(r); }
    double df(double r) const { return metric_.df(r); }

    bool contains(double r) const { return r > r_lo_ && r < r_hi_; }
    bool in_closure(double r) const { return r >= r_lo_ && r <= r_hi_; }

    /// Finite radial range for scans: [r_lo(1+1e-6), max(10 r_lo, 100)] clipped to I.
    std::pair<double, double> scan_range() const {
        const double lo = r_lo_ > 0.0 ? r_lo_ * (1.0 + 1e-6) : 1e-3;
        double hi = std::max(10.0 * r_lo_, 100.0);
        if (std::isfinite(r_hi_)) hi = std::min(hi, r_hi_ * (1.0 - 1e-9));
        return {lo, hi};
    }

    /// Ricci-flat built-ins.
    bool is_vacuum() const {
        return family_ == Family::Minkowski || family_ == Family::Schwarzschild;
    }

    /// Lambda with Ric = Lambda g when the family is known to be Einstein.
    std::optional<double> einstein_constant() const {
        if (is_vacuum()) return 0.0;
        if (family_ == Family::SchwarzschildAdS) return -static_cast<double>(n_) / (params_.L * params_.L);
        return std::nullopt;
    }

private:
    void validate() const {
        if (n_ < 2) throw Error(ErrorCode::InvalidArgument, "dimension n must be >= 2");
        if (n_ < 3 && family_ != Family::Custom) {
            throw Error(ErrorCode::InvalidArgument, "n = 2 is only allowed for custom profiles");
        }
        if (!(r_lo_ >= 0.0) || !(r_hi_ > r_lo_)) {
            throw Error(ErrorCode::EmptyExterior, "radial interval must satisfy 0 <= r_lo < r_hi");
        }
        const auto [lo, hi] = scan_range();
        const double probe_hi = std::isfinite(r_hi_) ? hi : std::max(hi, 1e4 * std::max(1.0, r_lo_));
        // a degenerate horizon makes f quadratically small next to r_lo; probe where it is resolvable
        const double probe_lo = r_lo_ > 0.0 ? r_lo_ * (1.0 + 1e-6) : lo;
        if (!(probe_hi > probe_lo)) return;
        for (double r : numerics::log_grid(probe_lo, probe_hi, 257)) {
            const double fr = f(r);
            if (!(fr > 0.0)) {
                std::ostringstream os;
                os << "f(r) <= 0 at r = " << r << " inside the declared interval (" << r_lo_ << ", "
                   << r_hi_ << ")";
                throw Error(ErrorCode::EmptyExterior, os.str());
            }
        }
    }

    int n_;
    double r_lo_;
    double r_hi_;
    MetricProfile metric_;
    Family family_;
    FamilyParams params_;
    std::vector<std::string> warnings_;
};

// ---------------------------------------------------------------------------
// Built-in families

inline ClassSSpacetime minkowski(int n = 3) {
    return ClassSSpacetime(n, 0.0, kInfinity,
                           MetricProfile([](double) { return MetricValue{1.0, 0.0}; }, "f = 1"),
                           Family::Minkowski);
}

inline ClassSSpacetime schwarzschild(double m, int n = 3) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "schwarzschild requires n >= 3");
    const double k = static_cast<double>(n - 2);
    const double r_lo = m > 0.0 ? std::pow(2.0 * m, 1.0 / k) : 0.0;
    MetricProfile metric(
        [m, k](double r) {
            const double rk = std::pow(r, k);
            return MetricValue{1.0 - 2.0 * m / rk, 2.0 * m * k / (rk * r)};
        },
        "f = 1 - 2m/r^(n-2)");
    return ClassSSpacetime(n, r_lo, kInfinity, std::move(metric), Family::Schwarzschild,
                           FamilyParams{m, 0.0, kInfinity});
}

/// 3+1 Reissner-Nordstrom exterior, f = 1 - 2m/r + q^2/r^2 on (r_+, inf).
inline ClassSSpacetime reissner_nordstrom(double m, double q, int n = 3) {
    if (n != 3) throw Error(ErrorCode::InvalidArgument, "reissner-nordstrom is built in for n = 3 only");
    std::vector<std::string> warnings;
    double r_lo = 0.0;
    const double disc = m * m - q * q;
    if (disc >= 0.0) {
        r_lo = m + std::sqrt(disc);
        if (r_lo < 0.0) r_lo = 0.0;
        if (disc == 0.0) warnings.emplace_back("extremal: degenerate horizon at r = m");
    } else {
        warnings.emplace_back("super-extremal: q^2 > m^2, no horizon (naked singularity)");
    }
    MetricProfile metric(
        [m, q](double r) {
            const double q2 = q * q;
            return MetricValue{1.0 - 2.0 * m / r + q2 / (r * r),
                               2.0 * m / (r * r) - 2.0 * q2 / (r * r * r)};
        },
        "f = 1 - 2m/r + q^2/r^2");
    return ClassSSpacetime(3, r_lo, kInfinity, std::move(metric), Family::ReissnerNordstrom,
                           FamilyParams{m, q, kInfinity}, std::move(warnings));
}

/// Schwarzschild-anti de Sitter, f = 1 - 2m/r^(n-2) + r^2/L^2.
inline ClassSSpacetime schwarzschild_ads(double m, double L, int n = 3) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "schwarzschild-ads requires n >= 3");
    if (!(L > 0.0)) throw Error(ErrorCode::InvalidArgument, "AdS radius L must be positive");
    const double k = static_cast<double>(n - 2);
    auto fn = [m, k, L](double r) {
        const double rk = std::pow(r, k);
        return MetricValue{1.0 - 2.0 * m / rk + r * r / (L * L), 2.0 * m * k / (rk * r) + 2.0 * r / (L * L)};
    };
    double r_lo = 0.0;
    if (m > 0.0) {
        // f is increasing for m > 0 and positive at (2m)^{1/(n-2)}.
        const double hi = std::pow(2.0 * m, 1.0 / k);
        r_lo = numerics::bisect_root([&](double r) { return fn(r).f; }, hi * 1e-12, hi, hi * 1e-15);
    }
    return ClassSSpacetime(n, r_lo, kInfinity, MetricProfile(fn, "f = 1 - 2m/r^(n-2) + r^2/L^2"),
                           Family::SchwarzschildAdS, FamilyParams{m, 0.0, L});
}

/// Build a family by name: "minkowski" {}, "schwarzschild" {m}, "reissner-nordstrom"
/// (alias "rn") {m, q}, "schwarzschild-ads" (alias "sads") {m, L}.
inline ClassSSpacetime build_family(std::string_view name, std::span<const double> params, int n) {
    auto need = [&](std::size_t count) {
        if (params.size() != count) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string(name) + " expects " + std::to_string(count) + " parameter(s)");
        }
    };
    if (name == "minkowski") {
        need(0);
        return minkowski(n);
    }
    if (name == "schwarzschild") {
        need(1);
        return schwarzschild(params[0], n);
    }
    if (name == "reissner-nordstrom" || name == "rn") {
        need(2);
        return reissner_nordstrom(params[0], params[1], n);
    }
    if (name == "schwarzschild-ads" || name == "sads") {
        need(2);
        return schwarzschild_ads(params[0], params[1], n);
    }
    throw Error(ErrorCode::UnknownFamily, "unknown spacetime family '" + std::string(name) + "'");
}

/// Same spacetime restricted to a sub-interval of its exterior.
inline ClassSSpacetime restrict_interval(const ClassSSpacetime& st, double r_lo, double r_hi) {
    if (r_lo < st.r_lo() || r_hi > st.r_hi() || !(r_hi > r_lo)) {
        std::ostringstream os;
        os << "interval (" << r_lo << ", " << r_hi << ") is not inside (" << st.r_lo() << ", "
           << st.r_hi() << ")";
        throw Error(ErrorCode::EmptyExterior, os.str());
    }
    return ClassSSpacetime(st.n(), r_lo, r_hi, st.metric(), st.family(), st.params(), st.warnings());
}

}  // namespace photonsurf
