#pragma once

// Command-line front end: spheres | profile | geodesic | sweep | verify | isotropic.
// run_cli() is the whole program; tools/photonsurf.cpp only forwards to it.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "photonsurf/errors.hpp"
#include "photonsurf/geometry_checks.hpp"
#include "photonsurf/io/config.hpp"
#include "photonsurf/io/csv.hpp"
#include "photonsurf/isotropic.hpp"
#include "photonsurf/null_geodesic.hpp"
#include "photonsurf/photon_surface.hpp"
#include "photonsurf/spacetime.hpp"

#ifndef PHOTONSURF_VERSION
#define PHOTONSURF_VERSION "0.1.0"
#endif

namespace photonsurf::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

inline constexpr const char* kVersion = PHOTONSURF_VERSION;

enum ExitCode : int {
    kOk = 0,
    kOther = 1,
    kConfigError = 2,
    kInvalidSpec = 3,
    kEmptySweep = 4,
    kVerifyFailed = 5,
};

inline int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigParse:
        case ErrorCode::UnknownFamily:
            return kConfigError;
        case ErrorCode::InvalidArgument:
        case ErrorCode::EmptyExterior:
        case ErrorCode::OutOfDomain:
        case ErrorCode::ForbiddenRadius:
        case ErrorCode::PrincipalNull:
        case ErrorCode::MinimalSurface:
        case ErrorCode::IncompatibleIsotropic:
        case ErrorCode::NonIntegrable:
            return kInvalidSpec;
        case ErrorCode::StepUnderflow:
        case ErrorCode::TooFewSamples:
            return kOther;
    }
    return kOther;
}

struct Options {
    std::string command;
    std::string config;
    std::string out = ".";
    std::string format = "csv";
    unsigned workers = 0;
    double tol = 1e-10;
    bool oracle = false;
};

struct Context {
    Options opt;
    io::Config cfg;
    fs::path base;  // directory of the config file
    std::ostream& out;
    std::ostream& err;
};

// ---------------------------------------------------------------------------
// shared helpers

inline json number(double x) {
    if (std::isfinite(x)) return json(x);
    return json(std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf"));
}

inline json numbers(const std::vector<double>& xs) {
    json a = json::array();
    for (double x : xs) a.push_back(number(x));
    return a;
}

inline json spacetime_json(const ClassSSpacetime& st) {
    json j;
    j["family"] = to_string(st.family());
    j["n"] = st.n();
    j["m"] = number(st.params().m);
    j["q"] = number(st.params().q);
    j["L"] = number(st.params().L);
    j["r_lo"] = number(st.r_lo());
    j["r_hi"] = number(st.r_hi());
    j["metric"] = st.metric().description();
    if (!st.warnings().empty()) j["warnings"] = st.warnings();
    return j;
}

inline json spheres_json(const ClassSSpacetime& st, const std::vector<PhotonSphere>& spheres) {
    json a = json::array();
    for (const auto& s : spheres) {
        a.push_back({{"r_star", number(s.radius)},
                     {"alpha_star", number(s.alpha)},
                     {"b_star", number(critical_impact_parameter(st, s))},
                     {"residual", number(s.residual)}});
    }
    return a;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline void write_text(const fs::path& path, const std::string& text) { io::CsvWriter::write_file(path, text); }

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Writes `stem`.csv or `stem`.json depending on --format; returns the file name.
inline std::string write_table(const Context& ctx, const fs::path& dir, const std::string& stem, const Table& t) {
    if (ctx.opt.format == "json") {
        json j;
        j["columns"] = t.header;
        json rows = json::array();
        for (const auto& r : t.rows) rows.push_back(numbers(r));
        j["rows"] = rows;
        write_text(dir / (stem + ".json"), dump(j));
        return stem + ".json";
    }
    io::CsvWriter w(t.header);
    for (const auto& r : t.rows) w.row(r);
    w.save(dir / (stem + ".csv"));
    return stem + ".csv";
}

inline Table profile_table(const ClassSSpacetime& st, const ProfileCurve& curve) {
    Table t{{"s", "t", "r", "dt_ds", "dr_ds", "unit_residual"}, {}};
    for (const auto& p : curve.samples) {
        const double f = st.f(p.r);
        t.rows.push_back({p.s, p.t, p.r, p.dt, p.dr, std::abs(f * p.dt * p.dt - p.dr * p.dr / f - 1.0)});
    }
    return t;
}

inline json class_json(const SurfaceClass& c) {
    json j;
    j["kind"] = to_string(c.kind);
    json per = json::array();
    for (std::size_t i = 0; i < c.spheres.size(); ++i) {
        per.push_back({{"r_star", number(c.spheres[i].radius)},
                       {"alpha_vs_alpha_star", to_string(c.per_sphere[i])},
                       {"r0_region", to_string(c.region_vs_spheres[i])}});
    }
    j["spheres"] = per;
    j["turning_points"] = numbers(c.turning_radii);
    json reg = json::array();
    for (auto r : c.region_vs_turning) reg.push_back(to_string(r));
    j["r0_vs_turning_points"] = reg;
    return j;
}

inline IntegrationOptions integration_options(const Context& ctx, double spacing) {
    IntegrationOptions o;
    o.spacing = spacing;
    o.tol = ctx.opt.tol;
    return o;
}

/// α from `alpha` (a number or "alpha_star") or `alpha_scale` (multiple of the innermost α_*).
inline double resolve_alpha(const Context& ctx, const std::string& sec, const std::vector<PhotonSphere>& spheres) {
    const auto& cfg = ctx.cfg;
    if (cfg.has(sec, "alpha")) {
        if (cfg.get_string(sec, "alpha") == "alpha_star") {
            if (spheres.empty()) cfg.reject(sec, "alpha", "alpha_star requested but the spacetime has no photon sphere");
            return spheres.front().alpha;
        }
        return cfg.get_double(sec, "alpha");
    }
    if (cfg.has(sec, "alpha_scale")) {
        if (spheres.empty()) cfg.reject(sec, "alpha_scale", "alpha_scale needs a photon sphere");
        return cfg.get_double(sec, "alpha_scale") * spheres.front().alpha;
    }
    cfg.value(sec, "alpha");  // raises the missing-key diagnostic
    return 0.0;
}

/// Arclength span from s_min/s_max or the symmetric shorthand `span`.
inline std::pair<double, double> resolve_span(const io::Config& cfg, const std::string& sec, double fallback) {
    const double span = cfg.get_double(sec, "span", fallback);
    if (!(span >= 0.0) && cfg.has(sec, "span")) cfg.reject(sec, "span", "span must be non-negative");
    const double lo = cfg.get_double(sec, "s_min", -span);
    const double hi = cfg.get_double(sec, "s_max", span);
    return {lo, hi};
}

inline int resolve_sign(const io::Config& cfg, const std::string& sec) {
    const int sign = cfg.get_int(sec, "sign", 1);
    if (sign != 1 && sign != -1 && sign != 0) cfg.reject(sec, "sign", "sign must be -1, 0 or +1");
    return sign;
}

/// Values typed with a few digits (α_* ≈ 0.19245009, r_* = 3) are taken as
/// the photon sphere when both are within 1e-8 relative.
inline bool snap_to_sphere(const std::vector<PhotonSphere>& spheres, double& alpha, double& r0) {
    for (const auto& s : spheres) {
        if (std::abs(r0 - s.radius) <= 1e-8 * s.radius && std::abs(alpha - s.alpha) <= 1e-8 * s.alpha) {
            alpha = s.alpha;
            r0 = s.radius;
            return true;
        }
    }
    return false;
}

inline json manifest_header(const Context& ctx, const ClassSSpacetime& st) {
    json m;
    m["tool"] = "photonsurf";
    m["version"] = kVersion;
    m["operation"] = ctx.opt.command;
    m["spacetime"] = spacetime_json(st);
    m["tolerance"] = number(ctx.opt.tol);
    m["format"] = ctx.opt.format;
    return m;
}

// ---------------------------------------------------------------------------
// spheres

inline int cmd_spheres(Context& ctx) {
    const auto st = io::spacetime_from_config(ctx.cfg, ctx.base);
    const auto spheres = find_photon_spheres(st);
    json report = manifest_header(ctx, st);
    report["photon_spheres"] = spheres_json(st, spheres);
    if (ctx.opt.format == "json") {
        ctx.out << dump(report);
    } else if (spheres.empty()) {
        ctx.out << "no photon spheres\n";
    } else {
        ctx.out << std::left << std::setw(24) << "r_star" << std::setw(24) << "alpha_star" << "b_star\n";
        for (const auto& s : spheres) {
            ctx.out << std::setw(24) << io::format_double(s.radius) << std::setw(24) << io::format_double(s.alpha)
                    << io::format_double(critical_impact_parameter(st, s)) << "\n";
        }
    }
    if (ctx.opt.out != ".") write_text(fs::path(ctx.opt.out) / "spheres.json", dump(report));
    return kOk;
}

// ---------------------------------------------------------------------------
// profile

inline int cmd_profile(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const std::string sec = "profile";
    const auto st = io::spacetime_from_config(cfg, ctx.base);
    const auto spheres = find_photon_spheres(st);

    PhotonSurfaceSpec spec;
    spec.alpha = resolve_alpha(ctx, sec, spheres);
    spec.r0 = cfg.get_double(sec, "r0");
    spec.t0 = cfg.get_double(sec, "t0", 0.0);
    spec.sign = resolve_sign(cfg, sec);
    std::tie(spec.s_min, spec.s_max) = resolve_span(cfg, sec, 10.0);
    const double h = cfg.get_double(sec, "h", 1e-2);
    if (!(h > 0.0)) cfg.reject(sec, "h", "h must be positive");
    const bool snapped = snap_to_sphere(spheres, spec.alpha, spec.r0);

    const auto cls = classify(st, spec.alpha, spec.r0);
    const auto opt = integration_options(ctx, h);
    const auto curve = integrate_profile(st, spec, opt);
    const auto inv = profile_invariants(st, curve);

    const fs::path dir = ctx.opt.out;
    const auto file = write_table(ctx, dir, "profile", profile_table(st, curve));

    json m = manifest_header(ctx, st);
    m["parameters"] = {{"alpha", number(spec.alpha)}, {"r0", number(spec.r0)},     {"t0", number(spec.t0)},
                       {"sign", spec.sign},           {"s_min", number(spec.s_min)}, {"s_max", number(spec.s_max)},
                       {"h", number(h)},              {"snapped_to_photon_sphere", snapped}};
    m["photon_spheres"] = spheres_json(st, spheres);
    m["classification"] = class_json(cls);
    m["termination"] = {{"forward", to_string(curve.forward_end)}, {"backward", to_string(curve.backward_end)}};
    json residuals = {{"unit_speed", number(inv.max_unit_residual)}, {"umbilicity", number(inv.max_alpha_residual)}};
    if (curve.samples.size() >= 5) {
        const auto ode = ode_residuals(st, curve);
        residuals["ode_t"] = number(ode.max_t_residual);
        residuals["ode_r"] = number(ode.max_r_residual);
    }
    m["residuals"] = residuals;
    if (ctx.opt.oracle) {
        const auto dev = profile_oracle_deviation(st, curve, spec.sign, opt);
        m["oracle"] = {{"max_dt", number(dev.max_dt)}, {"max_dr", number(dev.max_dr)}, {"compared", dev.compared}};
        ctx.out << "oracle max deviation: dt " << io::format_double(dev.max_dt) << ", dr "
                << io::format_double(dev.max_dr) << "\n";
    }
    m["outputs"] = json::array({{{"path", file}, {"rows", curve.samples.size()}}});
    write_text(dir / "manifest.json", dump(m));

    ctx.out << "classification: " << to_string(cls.kind) << "\n"
            << "samples: " << curve.samples.size() << "\n"
            << "termination: " << to_string(curve.backward_end) << " / " << to_string(curve.forward_end) << "\n"
            << "max unit-speed residual: " << io::format_double(inv.max_unit_residual) << "\n"
            << "wrote " << (dir / file).string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// geodesic

inline int cmd_geodesic(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const std::string sec = "geodesic";
    const auto st = io::spacetime_from_config(cfg, ctx.base);

    GeodesicSpec spec;
    spec.charges.E = cfg.get_double(sec, "E", 1.0);
    spec.charges.ell = cfg.get_double(sec, "ell");
    spec.r0 = cfg.get_double(sec, "r0");
    spec.t0 = cfg.get_double(sec, "t0", 0.0);
    spec.phi0 = cfg.get_double(sec, "phi0", 0.0);
    spec.sign = resolve_sign(cfg, sec);
    spec.lambda_max = cfg.get_double(sec, "span", 10.0);
    spec.lambda_min = cfg.get_double(sec, "lambda_min", 0.0);
    const double h = cfg.get_double(sec, "h", 1e-2);
    if (!(h > 0.0)) cfg.reject(sec, "h", "h must be positive");

    const auto traj = integrate_null_geodesic(st, spec, integration_options(ctx, h));
    Table t{{"s", "t", "r", "phi", "null_residual"}, {}};
    double worst = 0.0;
    for (const auto& p : traj.samples) {
        const double res = null_residual(st, spec.charges, p);
        worst = std::max(worst, res);
        t.rows.push_back({p.s, p.t, p.r, p.phi, res});
    }
    const fs::path dir = ctx.opt.out;
    const auto file = write_table(ctx, dir, "geodesic", t);

    json m = manifest_header(ctx, st);
    m["charges"] = {{"E", number(spec.charges.E)}, {"ell", number(spec.charges.ell)}};
    m["parameters"] = {{"r0", number(spec.r0)},         {"t0", number(spec.t0)},
                       {"phi0", number(spec.phi0)},     {"sign", spec.sign},
                       {"lambda_min", number(spec.lambda_min)}, {"lambda_max", number(spec.lambda_max)},
                       {"h", number(h)}};
    if (spec.charges.principal()) {
        m["lambda"] = nullptr;
        m["principal_null"] = true;
    } else {
        m["lambda"] = number(umbilicity_from_charges(spec.charges));
        m["principal_null"] = false;
    }
    m["termination"] = {{"forward", to_string(traj.forward_end)}, {"backward", to_string(traj.backward_end)}};
    m["max_null_residual"] = number(worst);
    m["outputs"] = json::array({{{"path", file}, {"rows", traj.samples.size()}}});
    write_text(dir / "manifest.json", dump(m));

    ctx.out << "samples: " << traj.samples.size() << "\n"
            << "termination: " << to_string(traj.backward_end) << " / " << to_string(traj.forward_end) << "\n"
            << "max null residual: " << io::format_double(worst) << "\n"
            << "wrote " << (dir / file).string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------
// sweep

inline unsigned resolve_workers(unsigned requested) {
    if (const char* env = std::getenv("PHOTONSURF_WORKERS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

struct SweepCell {
    std::string id;
    std::size_t alpha_index = 0;
    double alpha = 0.0;
    double r0 = 0.0;
    std::string status;  // "ok", "skipped" or "failed"
    std::string reason;
    std::optional<SurfaceClass> cls;
    std::optional<ProfileCurve> curve;
    std::string file;
};

inline const char* alpha_group(const SurfaceClass& c) {
    switch (c.kind) {
        case SurfaceKind::Subcritical: return "subcritical";
        case SurfaceKind::Critical:
        case SurfaceKind::PhotonSphere: return "critical";
        case SurfaceKind::Supercritical: return "supercritical";
        case SurfaceKind::NoSphereReference: return "no-sphere-reference";
    }
    return "unknown";
}

inline std::string cell_id(std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << "a" << std::setw(3) << std::setfill('0') << i << "_r" << std::setw(3) << std::setfill('0') << j;
    return os.str();
}

inline int cmd_sweep(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const std::string sec = "sweep";
    const auto st = io::spacetime_from_config(cfg, ctx.base);
    const auto spheres = find_photon_spheres(st);

    std::vector<double> alphas;
    std::vector<double> scales;
    if (cfg.has(sec, "alpha")) {
        alphas = cfg.get_list(sec, "alpha");
    } else if (cfg.has(sec, "alpha_scale")) {
        scales = cfg.get_list(sec, "alpha_scale");
        if (!scales.empty() && spheres.empty()) cfg.reject(sec, "alpha_scale", "alpha_scale needs a photon sphere");
        for (double k : scales) alphas.push_back(k * spheres.front().alpha);
    } else {
        cfg.value(sec, "alpha");
    }
    const auto radii = cfg.get_list(sec, "r0");
    const int sign = resolve_sign(cfg, sec);
    const auto [s_min, s_max] = resolve_span(cfg, sec, 10.0);
    const double h = cfg.get_double(sec, "h", 1e-2);
    if (!(h > 0.0)) cfg.reject(sec, "h", "h must be positive");
    const auto opt = integration_options(ctx, h);
    const fs::path dir = ctx.opt.out;

    std::vector<SweepCell> cells;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        for (std::size_t j = 0; j < radii.size(); ++j) {
            SweepCell c;
            c.id = cell_id(i, j);
            c.alpha_index = i;
            c.alpha = alphas[i];
            c.r0 = radii[j];
            cells.push_back(std::move(c));
        }
    }

    auto work = [&](SweepCell& c) {
        try {
            if (!(c.alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "umbilicity factor must be positive");
            if (!st.contains(c.r0)) throw Error(ErrorCode::OutOfDomain, "r0 outside the radial interval");
            c.cls = classify(st, c.alpha, c.r0);
            if (!c.cls->admissible) {
                throw Error(ErrorCode::ForbiddenRadius, "forbidden: alpha^2 r0^2 < f(r0)");
            }
            PhotonSurfaceSpec spec{c.alpha, c.r0, 0.0, sign, s_min, s_max};
            c.curve = integrate_profile(st, spec, opt);
            c.file = "cells/" + write_table(ctx, dir / "cells", c.id, profile_table(st, *c.curve));
            c.status = "ok";
        } catch (const Error& e) {
            c.status = (e.code() == ErrorCode::StepUnderflow) ? "failed" : "skipped";
            c.reason = e.what();
            c.curve.reset();
        }
    };

    const unsigned workers = std::min<unsigned>(resolve_workers(ctx.opt.workers),
                                                std::max<std::size_t>(1, cells.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t k = next++; k < cells.size(); k = next++) work(cells[k]);
        });
    }
    for (auto& t : pool) t.join();

    // manifest and aggregate after the join barrier, in grid order
    json m = manifest_header(ctx, st);
    json params = {{"alpha", numbers(alphas)}, {"r0", numbers(radii)}, {"sign", sign},
                   {"s_min", number(s_min)},   {"s_max", number(s_max)}, {"h", number(h)}};
    if (!scales.empty()) params["alpha_scale"] = numbers(scales);
    m["parameters"] = params;
    m["photon_spheres"] = spheres_json(st, spheres);

    json jcells = json::array();
    json outputs = json::array();
    std::map<std::string, std::vector<std::string>> groups;
    std::ostringstream aggregate;
    std::ostringstream plot;
    std::size_t produced = 0;
    for (const auto& c : cells) {
        json jc = {{"id", c.id}, {"alpha", number(c.alpha)}, {"r0", number(c.r0)}, {"status", c.status}};
        if (!spheres.empty()) jc["alpha_over_alpha_star"] = number(c.alpha / spheres.front().alpha);
        if (!c.reason.empty()) jc["reason"] = c.reason;
        if (c.cls) {
            jc["classification"] = class_json(*c.cls);
            jc["group"] = alpha_group(*c.cls);
        }
        if (c.curve) {
            jc["termination"] = {{"forward", to_string(c.curve->forward_end)},
                                 {"backward", to_string(c.curve->backward_end)}};
            jc["samples"] = c.curve->samples.size();
            jc["file"] = c.file;
            outputs.push_back({{"path", c.file}, {"rows", c.curve->samples.size()}});
            groups[alpha_group(*c.cls)].push_back(c.id);

            aggregate << "# " << c.id << " alpha=" << io::format_double(c.alpha) << " r0="
                      << io::format_double(c.r0) << " class=" << to_string(c.cls->kind) << "\n";
            aggregate << "# t r\n";
            for (const auto& p : c.curve->samples) {
                aggregate << io::format_double(p.t) << " " << io::format_double(p.r) << "\n";
            }
            aggregate << "\n\n";
            plot << (produced == 0 ? "plot " : ", \\\n     ") << "'aggregate.dat' index " << produced
                 << " using 2:1 with lines title '" << c.id << " " << to_string(c.cls->kind) << "'";
            ++produced;
        }
        jcells.push_back(jc);
    }
    m["cells"] = jcells;
    json jgroups;
    for (const auto& [name, ids] : groups) jgroups[name] = ids;
    m["groups"] = jgroups;
    m["produced"] = produced;

    if (produced > 0) {
        write_text(dir / "aggregate.dat", aggregate.str());
        std::ostringstream gp;
        gp << "set xlabel 'r'\nset ylabel 't'\nset key outside\n" << plot.str() << "\n";
        write_text(dir / "plot.gp", gp.str());
        outputs.push_back({{"path", "aggregate.dat"}, {"rows", nullptr}});
        outputs.push_back({{"path", "plot.gp"}, {"rows", nullptr}});
    }
    m["outputs"] = outputs;
    write_text(dir / "manifest.json", dump(m));

    ctx.out << "cells: " << cells.size() << ", curves: " << produced << ", skipped: " << cells.size() - produced
            << "\n";
    for (const auto& [name, ids] : groups) ctx.out << "  " << name << ": " << ids.size() << "\n";
    if (produced == 0) {
        ctx.err << "sweep produced no curves\n";
        return kEmptySweep;
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// verify

struct CheckRecord {
    std::string name;
    std::string status;  // pass, fail, skip
    double residual = 0.0;
    double tolerance = 0.0;
    std::string note;
};

class Verifier {
public:
    void check(std::string name, double residual, double tol, std::string note = {}) {
        const bool ok = std::isfinite(residual) && residual < tol;
        records_.push_back({std::move(name), ok ? "pass" : "fail", residual, tol, std::move(note)});
    }
    void skip(std::string name, std::string note) {
        records_.push_back({std::move(name), "skip", 0.0, 0.0, std::move(note)});
    }
    void failure(std::string name, std::string note) {
        records_.push_back({std::move(name), "fail", std::nan(""), 0.0, std::move(note)});
    }

    bool all_passed() const {
        return std::none_of(records_.begin(), records_.end(), [](const CheckRecord& r) { return r.status == "fail"; });
    }
    const std::vector<CheckRecord>& records() const { return records_; }

    template <class F>
    void guarded(const std::string& name, F&& body) {
        try {
            body();
        } catch (const Error& e) {
            failure(name, e.what());
        }
    }

private:
    std::vector<CheckRecord> records_;
};

/// A curve that exists in every family: supercritical through the innermost
/// photon sphere when there is one, otherwise α = 1.5·√f(r0)/r0 at r0 = 2 r_lo
/// (or 1 when r_lo = 0), kept inside a finite r_hi.
inline std::pair<double, double> verification_curve_seed(const ClassSSpacetime& st,
                                                         const std::vector<PhotonSphere>& spheres) {
    if (!spheres.empty()) return {1.1 * spheres.front().alpha, spheres.front().radius};
    double r0 = st.r_lo() > 0.0 ? 2.0 * st.r_lo() : 1.0;
    if (!(r0 < st.r_hi())) r0 = std::isfinite(st.r_hi()) ? 0.5 * (st.r_lo() + st.r_hi()) : r0;
    return {1.5 * std::sqrt(st.f(r0)) / r0, r0};
}

/// Radii for the slice identities: the scan range, starting no lower than 0.5.
inline std::vector<double> verification_radii(const ClassSSpacetime& st) {
    const auto [lo, hi] = st.scan_range();
    return numerics::log_grid(std::max(lo * 1.01, std::min(0.5, 0.5 * hi)), hi, 20);
}

inline Verifier run_verification(const ClassSSpacetime& st, double tol) {
    Verifier v;
    const auto spheres = find_photon_spheres(st);
    for (std::size_t i = 0; i < spheres.size(); ++i) {
        v.check("photon_sphere_condition[" + std::to_string(i) + "]", spheres[i].residual, 1e-10);
    }

    // profile curve and its residuals
    const auto [alpha, r0] = verification_curve_seed(st, spheres);
    std::optional<ProfileCurve> curve;
    v.guarded("profile_integration", [&] {
        IntegrationOptions opt;
        opt.spacing = 2.5e-4;
        opt.tol = tol;
        curve = integrate_profile(st, PhotonSurfaceSpec{alpha, r0, 0.0, 1, -2.0, 2.0}, opt);
        // differences of t are ill-conditioned where f -> 0, so keep the run
        // of samples around s = 0 with f >= f(r0)/2
        const double floor = 0.5 * st.f(r0);
        auto& sm = curve->samples;
        const auto origin = std::find_if(sm.begin(), sm.end(), [](const ProfileSample& p) { return p.s == 0.0; });
        auto first = origin, last = origin;
        while (first != sm.begin() && st.f(std::prev(first)->r) >= floor) --first;
        while (std::next(last) != sm.end() && st.f(std::next(last)->r) >= floor) ++last;
        sm = std::vector<ProfileSample>(first, std::next(last));
    });
    if (curve) {
        const auto inv = profile_invariants(st, *curve);
        v.check("unit_speed", inv.max_unit_residual, 1e-8);
        v.check("umbilicity_conservation", inv.max_alpha_residual, 1e-8);
        v.guarded("ode_residuals", [&] {
            const auto ode = ode_residuals(st, *curve);
            v.check("ode_residual_t", ode.max_t_residual, 1e-5);
            v.check("ode_residual_r", ode.max_r_residual, 1e-5);
        });
        v.guarded("surface_scalar_curvature", [&] {
            const auto sc = surface_scalar_curvature_check(st, *curve, alpha);
            if (sc.applicable) {
                v.check("surface_scalar_curvature", sc.residual, 1e-5, sc.note);
            } else {
                v.skip("surface_scalar_curvature", sc.note);
            }
        });
    }

    // slice identities on the exterior
    const auto radii = verification_radii(st);
    if (st.is_vacuum()) {
        double slice = 0.0, c1 = 0.0, c2 = 0.0;
        v.guarded("slice_identity", [&] {
            for (double r : radii) {
                slice = std::max(slice, slice_identity_residual(st, r).residual);
                const auto c = c_constant(st, r);
                c1 = std::max(c1, c.constraint1);
                c2 = std::max(c2, c.constraint2);
            }
            v.check("slice_identity", slice, 1e-10);
            v.check("c_constraint_1", c1, 1e-10);
            v.check("c_constraint_2", c2, 1e-10);
        });
        std::vector<double> flux;
        for (double r : radii) flux.push_back(mass_flux(st, r));
        double mean = 0.0;
        for (double x : flux) mean += x;
        mean /= static_cast<double>(flux.size());
        double var = 0.0;
        for (double x : flux) var += (x - mean) * (x - mean);
        v.check("mass_flux_constancy", std::sqrt(var / static_cast<double>(flux.size())), 1e-10);
        if (st.params().m > 0.0) v.check("mass_flux_positive", mean > 0.0 ? 0.0 : 1.0, 0.5);
    } else {
        const std::string note = "identity not expected to hold (non-vacuum family)";
        v.skip("slice_identity", note);
        v.skip("c_constraint_1", note);
        v.skip("c_constraint_2", note);
        v.skip("mass_flux_constancy", note);
    }

    // isotropic form
    std::optional<IsotropicForm> iso;
    try {
        iso = to_isotropic_calibrated(st, spheres.empty() ? r0 : spheres.front().radius);
    } catch (const Error& e) {
        v.skip("isotropic", std::string("no isotropic form: ") + e.what());
    }
    if (iso) {
        for (std::size_t i = 0; i < spheres.size(); ++i) {
            v.guarded("isotropic_sphere[" + std::to_string(i) + "]", [&] {
                const double S = isotropic_radius_of(*iso, spheres[i].radius);
                v.check("isotropic_sphere[" + std::to_string(i) + "]", isotropic_sphere_residual(*iso, S), 1e-8);
            });
        }
        if (curve) {
            v.guarded("isotropic_surface", [&] {
                const auto samples = map_profile_to_isotropic(*iso, *curve);
                v.check("isotropic_surface", isotropic_surface_residual(*iso, samples), 1e-5);
            });
        }
        if (st.family() == Family::Schwarzschild && st.params().m >= 0.0) {
            v.guarded("isotropic_closed_form", [&] {
                const auto exact = schwarzschild_isotropic(st.params().m, st.n());
                double worst = 0.0;
                for (double s : detail::isotropic_probe_grid(exact, 64)) {
                    if (!iso->contains(s)) continue;
                    worst = std::max(worst, std::abs(iso->psi(s).value - exact.psi(s).value));
                    worst = std::max(worst, std::abs(iso->lapse(s).value - exact.lapse(s).value));
                }
                v.check("isotropic_closed_form", worst, 1e-8);
                const auto flat = conformal_flatness_scan(*iso);
                v.check("conformal_flatness_scan_empty", static_cast<double>(flat.size()), 0.5);
            });
        }
    }
    return v;
}

inline int cmd_verify(Context& ctx) {
    const auto st = io::spacetime_from_config(ctx.cfg, ctx.base);
    const auto v = run_verification(st, ctx.opt.tol);
    json report = manifest_header(ctx, st);
    json checks = json::array();
    for (const auto& r : v.records()) {
        json c = {{"name", r.name}, {"status", r.status}};
        if (r.status != "skip") {
            c["residual"] = number(r.residual);
            c["tolerance"] = number(r.tolerance);
        }
        if (!r.note.empty()) c["note"] = r.note;
        checks.push_back(c);
    }
    report["checks"] = checks;
    report["passed"] = v.all_passed();
    ctx.out << dump(report);
    if (ctx.opt.out != ".") write_text(fs::path(ctx.opt.out) / "verify.json", dump(report));
    for (const auto& r : v.records()) {
        if (r.status == "fail") {
            ctx.err << "FAILED " << r.name << ": residual " << io::format_double(r.residual) << " vs tolerance "
                    << io::format_double(r.tolerance) << (r.note.empty() ? "" : " (" + r.note + ")") << "\n";
        }
    }
    return v.all_passed() ? kOk : kVerifyFailed;
}

// ---------------------------------------------------------------------------
// isotropic

inline int cmd_isotropic(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const std::string sec = "isotropic";
    const auto st = io::spacetime_from_config(cfg, ctx.base);
    const auto spheres = find_photon_spheres(st);
    const auto [lo, hi] = st.scan_range();
    const double r0_default = spheres.empty() ? std::sqrt(lo * hi) : spheres.front().radius;
    const double r0 = cfg.get_double(sec, "r0", r0_default);
    const int grid = cfg.get_int(sec, "grid", 200);
    if (grid < 2) cfg.reject(sec, "grid", "grid must be >= 2");

    const auto iso = cfg.has(sec, "s0") ? to_isotropic(st, r0, cfg.get_double(sec, "s0"))
                                        : to_isotropic_calibrated(st, r0);
    Table t{{"s", "r", "psi", "dpsi_ds", "lapse", "dlapse_ds"}, {}};
    for (double s : detail::isotropic_probe_grid(iso, static_cast<std::size_t>(grid))) {
        const auto psi = iso.psi(s);
        const auto lapse = iso.lapse(s);
        t.rows.push_back({s, s * psi.value, psi.value, psi.derivative, lapse.value, lapse.derivative});
    }
    const fs::path dir = ctx.opt.out;
    const auto file = write_table(ctx, dir, "isotropic", t);

    json m = manifest_header(ctx, st);
    m["parameters"] = {{"r0", number(r0)}, {"s0", number(isotropic_radius_of(iso, r0))}, {"grid", grid}};
    m["interval"] = {{"s_lo", number(iso.s_lo())}, {"s_hi", number(iso.s_hi())}};
    json js = json::array();
    for (const auto& sp : spheres) {
        const double S = isotropic_radius_of(iso, sp.radius);
        js.push_back({{"r_star", number(sp.radius)},
                      {"S_star", number(S)},
                      {"residual", number(isotropic_sphere_residual(iso, S))}});
    }
    m["photon_spheres"] = js;
    const auto compat = isotropic_compatibility(iso);
    m["compatibility"] = {{"compatible", compat.compatible}, {"worst_s", number(compat.worst_s)},
                          {"worst_residual", number(compat.worst_residual)}};
    json flat = json::array();
    for (const auto& sub : conformal_flatness_scan(iso)) flat.push_back(json::array({number(sub.lo), number(sub.hi)}));
    m["conformally_flat_photon_surface_intervals"] = flat;
    m["outputs"] = json::array({{{"path", file}, {"rows", t.rows.size()}}});
    write_text(dir / "manifest.json", dump(m));

    ctx.out << "isotropic interval: (" << io::format_double(iso.s_lo()) << ", " << io::format_double(iso.s_hi())
            << ")\n";
    for (const auto& entry : js) {
        ctx.out << "photon sphere at S = " << entry["S_star"].dump() << " (residual " << entry["residual"].dump()
                << ")\n";
    }
    ctx.out << "wrote " << (dir / file).string() << "\n";
    return kOk;
}

// ---------------------------------------------------------------------------

inline int dispatch(Context& ctx) {
    const auto& c = ctx.opt.command;
    if (c == "spheres") return cmd_spheres(ctx);
    if (c == "profile") return cmd_profile(ctx);
    if (c == "geodesic") return cmd_geodesic(ctx);
    if (c == "sweep") return cmd_sweep(ctx);
    if (c == "verify") return cmd_verify(ctx);
    if (c == "isotropic") return cmd_isotropic(ctx);
    ctx.err << "unknown command " << c << "\n";
    return kConfigError;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Photon spheres and photon surfaces of static spherically symmetric spacetimes", "photonsurf"};
    app.set_version_flag("--version", kVersion);
    app.add_option("--config", opt.config, "configuration file")->required();
    app.add_option("--out", opt.out, "output directory");
    app.add_option("--workers", opt.workers, "worker threads for sweeps (PHOTONSURF_WORKERS overrides)");
    app.add_option("--format", opt.format, "data file format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--tol", opt.tol, "local integration tolerance")->check(CLI::PositiveNumber);
    app.require_subcommand(1, 1);
    const std::vector<std::pair<const char*, const char*>> commands = {
        {"spheres", "list photon spheres"},
        {"profile", "integrate one photon-surface profile"},
        {"geodesic", "integrate one null geodesic"},
        {"sweep", "integrate a grid of profiles"},
        {"verify", "run the geometry verification suite"},
        {"isotropic", "isotropic form and its photon-sphere residuals"},
    };
    for (const auto& [name, desc] : commands) {
        auto* sub = app.add_subcommand(name, desc);
        sub->fallthrough();
        if (std::string(name) == "profile") sub->add_flag("--oracle", opt.oracle, "null-geodesic cross-check");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }
    opt.command = app.get_subcommands().front()->get_name();

    try {
        io::Config cfg = io::load_config(opt.config);
        Context ctx{opt, std::move(cfg), fs::path(opt.config).parent_path(), out, err};
        if (ctx.base.empty()) ctx.base = ".";
        return dispatch(ctx);
    } catch (const Error& e) {
        err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kOther;
    }
}

}  // namespace photonsurf::cli
