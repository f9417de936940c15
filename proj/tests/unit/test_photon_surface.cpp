#include <cmath>

#include <gtest/gtest.h>

#include "photonsurf/photon_surface.hpp"

using namespace photonsurf;

TEST(PhotonSphere, SchwarzschildRadiusInEveryDimension) {
    for (int n = 3; n <= 7; ++n) {
        const auto spheres = find_photon_spheres(schwarzschild(1.0, n));
        ASSERT_EQ(spheres.size(), 1u) << "n = " << n;
        EXPECT_NEAR(spheres[0].radius, std::pow(static_cast<double>(n), 1.0 / (n - 2)), 1e-12);
        EXPECT_LT(spheres[0].residual, 1e-12);
    }
}

TEST(PhotonSphere, SchwarzschildAlpha) {
    const auto sph = find_photon_spheres(schwarzschild(1.0)).at(0);
    EXPECT_NEAR(sph.alpha, 0.19245008972987526, 1e-15);
    EXPECT_NEAR(1.0 / sph.alpha, 5.196152422706632, 1e-13);
}

TEST(PhotonSphere, ReissnerNordstrom) {
    const auto spheres = find_photon_spheres(reissner_nordstrom(1.0, 0.5));
    ASSERT_EQ(spheres.size(), 1u);
    EXPECT_NEAR(spheres[0].radius, 2.8228756555322953, 1e-12);
}

TEST(PhotonSphere, NoneInMinkowskiOrSmallMass) {
    EXPECT_TRUE(find_photon_spheres(minkowski()).empty());
    EXPECT_TRUE(find_photon_spheres(schwarzschild(0.0)).empty());
}

TEST(PhotonSphere, ConditionSignChange) {
    const auto st = schwarzschild(1.0);
    EXPECT_GT(photon_sphere_condition(st, 2.5), 0.0);
    EXPECT_LT(photon_sphere_condition(st, 3.5), 0.0);
    EXPECT_NEAR(photon_sphere_condition(st, 3.0), 0.0, 1e-15);
}

TEST(TurningPoints, SubcriticalHasTwo) {
    const auto tp = turning_points(schwarzschild(1.0), 0.15);
    ASSERT_EQ(tp.size(), 2u);
    EXPECT_NEAR(tp[0], 2.2595749439666594, 1e-10);
    EXPECT_NEAR(tp[1], 5.243216941077514, 1e-10);
}

TEST(TurningPoints, SupercriticalHasNone) {
    const auto st = schwarzschild(1.0);
    EXPECT_TRUE(turning_points(st, 0.25).empty());
    double lowest = 1e300;
    for (double r = 2.001; r < 50.0; r += 1e-3) lowest = std::min(lowest, radial_speed_squared(st, 0.25, r));
    EXPECT_NEAR(lowest, 0.19055, 1e-4);
}

TEST(TurningPoints, CriticalReportsTheSphereOnce) {
    const auto st = schwarzschild(1.0);
    const auto sph = find_photon_spheres(st).at(0);
    const auto tp = turning_points(st, sph.alpha);
    ASSERT_EQ(tp.size(), 1u);
    EXPECT_NEAR(tp[0], 3.0, 1e-12);
    EXPECT_THROW(turning_points(st, 0.0), Error);
}

TEST(Profile, SlopeSquaredSignsMatchAdmissibility) {
    const auto st = schwarzschild(1.0);
    EXPECT_LT(profile_slope_squared(st, 0.15, 4.0), 0.0);
    EXPECT_GT(profile_slope_squared(st, 0.15, 6.0), 0.0);
}

TEST(Profile, MinkowskiHyperboloid) {
    const auto st = minkowski();
    for (double alpha : {0.2, 1.0, 2.0}) {
        PhotonSurfaceSpec spec{alpha, 1.0 / alpha, 0.0, +1, -5.0, 5.0};
        const auto curve = integrate_profile(st, spec);
        for (const auto& p : curve.samples) {
            EXPECT_NEAR(p.r, minkowski_exact(alpha, 0.0, p.t), 1e-8);
        }
        EXPECT_EQ(curve.forward_end, Termination::SpanEnd);
        EXPECT_EQ(curve.backward_end, Termination::SpanEnd);
    }
}

TEST(Profile, UniformGridIncludesOrigin) {
    PhotonSurfaceSpec spec{0.15, 6.0, 1.5, -1, -2.0, 3.0};
    IntegrationOptions opt;
    opt.spacing = 0.05;
    const auto curve = integrate_profile(schwarzschild(1.0), spec, opt);
    ASSERT_EQ(curve.samples.size(), 101u);
    EXPECT_DOUBLE_EQ(curve.samples.front().s, -2.0);
    EXPECT_DOUBLE_EQ(curve.samples.back().s, 3.0);
    EXPECT_NEAR(sample_spacing(curve), 0.05, 1e-12);
    const auto& origin = curve.samples[40];
    EXPECT_EQ(origin.s, 0.0);
    EXPECT_DOUBLE_EQ(origin.r, 6.0);
    EXPECT_DOUBLE_EQ(origin.t, 1.5);
    EXPECT_LT(origin.dr, 0.0);
    opt.spacing = 0.025;
    const auto fine = integrate_profile(schwarzschild(1.0), spec, opt);
    const auto mid = profile_at(curve, 0.025);
    EXPECT_EQ(fine.samples[81].s, 0.025);
    EXPECT_NEAR(mid.r, fine.samples[81].r, 1e-6);
    EXPECT_NEAR(mid.t, fine.samples[81].t, 1e-6);
}

TEST(Profile, BouncesAtOuterTurningPoint) {
    PhotonSurfaceSpec spec{0.15, 6.0, 0.0, -1, -20.0, 20.0};
    IntegrationOptions opt;
    opt.spacing = 1e-3;
    const auto curve = integrate_profile(schwarzschild(1.0), spec, opt);
    const auto inv = profile_invariants(schwarzschild(1.0), curve);
    EXPECT_LT(inv.max_unit_residual, 1e-10);
    EXPECT_LT(inv.max_alpha_residual, 1e-10);
    EXPECT_TRUE(inv.future_directed);
    const auto radii = sampled_turning_radii(curve);
    ASSERT_FALSE(radii.empty());
    EXPECT_NEAR(radii[0], 5.243216941077514, 1e-7);
    double r_min = 1e300;
    for (const auto& p : curve.samples) r_min = std::min(r_min, p.r);
    EXPECT_GT(r_min, 5.243216941077514 - 1e-9);
}

TEST(Profile, PhotonSphereIsExactCylinder) {
    const auto st = schwarzschild(1.0);
    const auto sph = find_photon_spheres(st).at(0);
    PhotonSurfaceSpec spec{sph.alpha, sph.radius, 0.0, +1, -3.0, 3.0};
    const auto curve = integrate_profile(st, spec);
    EXPECT_EQ(curve.forward_end, Termination::PhotonSphere);
    for (const auto& p : curve.samples) {
        EXPECT_EQ(p.r, sph.radius);
        EXPECT_EQ(p.dr, 0.0);
        EXPECT_NEAR(p.t, p.s / std::sqrt(st.f(sph.radius)), 1e-12);
    }
}

TEST(Profile, CriticalCurveAsymptotesToSphere) {
    const auto st = schwarzschild(1.0);
    const auto sph = find_photon_spheres(st).at(0);
    PhotonSurfaceSpec spec{sph.alpha, 6.0, 0.0, -1, 0.0, 200.0};
    const auto curve = integrate_profile(st, spec);
    EXPECT_EQ(curve.forward_end, Termination::PhotonSphereAsymptote);
    EXPECT_NEAR(curve.samples.back().r, 3.0, 1e-3);
}

TEST(Profile, SupercriticalFallsToHorizon) {
    PhotonSurfaceSpec spec{0.25, 4.0, 0.0, -1, 0.0, 50.0};
    const auto curve = integrate_profile(schwarzschild(1.0), spec);
    EXPECT_EQ(curve.forward_end, Termination::InnerBoundary);
    EXPECT_LT(curve.samples.back().r, 2.01);
}

TEST(Profile, RestrictedIntervalStopsAtOuterBoundary) {
    const auto st = restrict_interval(schwarzschild(1.0), 2.0, 10.0);
    PhotonSurfaceSpec spec{0.25, 4.0, 0.0, +1, 0.0, 50.0};
    const auto curve = integrate_profile(st, spec);
    EXPECT_EQ(curve.forward_end, Termination::OuterBoundary);
    EXPECT_LE(curve.samples.back().r, 10.0);
}

TEST(Profile, ForbiddenRadiusRejected) {
    const auto st = schwarzschild(1.0);
    PhotonSurfaceSpec forbidden{0.15, 4.0, 0.0, -1, -1.0, 1.0};
    try {
        integrate_profile(st, forbidden);
        FAIL() << "expected ForbiddenRadius";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ForbiddenRadius);
    }
    PhotonSurfaceSpec inside{0.25, 1.9, 0.0, -1, -1.0, 1.0};
    EXPECT_THROW(integrate_profile(st, inside), Error);
}

TEST(Profile, OdeResidualsSmall) {
    const auto st = schwarzschild(1.0);
    PhotonSurfaceSpec spec{0.3, 5.0, 0.0, +1, -1.0, 5.0};
    IntegrationOptions opt;
    opt.spacing = 1e-3;
    const auto rep = ode_residuals(st, integrate_profile(st, spec, opt));
    EXPECT_LT(rep.max_t_residual, 1e-5);
    EXPECT_LT(rep.max_r_residual, 1e-5);
    EXPECT_LT(rep.max_unit_residual, 1e-10);
}

TEST(Classify, Kinds) {
    const auto st = schwarzschild(1.0);
    const double a_star = 0.19245008972987526;
    EXPECT_EQ(classify(st, a_star, 3.0).kind, SurfaceKind::PhotonSphere);
    EXPECT_EQ(classify(st, a_star, 6.0).kind, SurfaceKind::Critical);
    const auto sub = classify(st, 0.15, 6.0);
    EXPECT_EQ(sub.kind, SurfaceKind::Subcritical);
    EXPECT_TRUE(sub.admissible);
    ASSERT_EQ(sub.region_vs_turning.size(), 2u);
    EXPECT_EQ(sub.region_vs_turning[1], Region::Above);
    EXPECT_FALSE(classify(st, 0.15, 4.0).admissible);
    EXPECT_EQ(classify(st, 0.25, 4.0).kind, SurfaceKind::Supercritical);
    EXPECT_EQ(classify(minkowski(), 0.5, 4.0).kind, SurfaceKind::NoSphereReference);
    EXPECT_THROW(classify(st, 0.25, 1.5), Error);
}

TEST(Classify, Names) {
    EXPECT_STREQ(to_string(SurfaceKind::Subcritical), "subcritical");
    EXPECT_STREQ(to_string(Termination::PhotonSphereAsymptote), "asymptotic-to-photon-sphere");
}
