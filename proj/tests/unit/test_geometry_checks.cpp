#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "curvature_oracle.hpp"
#include "photonsurf/geometry_checks.hpp"

using namespace photonsurf;

TEST(WarpedCurvature, DeSitterClosedForm) {
    // r = a cosh(s/a): de Sitter of radius a, R = n(n-1)/a²
    for (int n = 3; n <= 6; ++n) {
        for (double a : {0.7, 2.0, 5.0}) {
            for (double s : {-1.0, 0.0, 0.4, 2.5}) {
                const double r = a * std::cosh(s / a);
                const double dr = std::sinh(s / a);
                const double ddr = std::cosh(s / a) / a;
                EXPECT_NEAR(warped_scalar_curvature(n, r, dr, ddr), n * (n - 1) / (a * a), 1e-12);
            }
        }
    }
}

TEST(WarpedCurvature, FiniteDifferenceOracle) {
    auto r = [](double s) { return 2.0 + std::sin(s) + 0.1 * s * s; };
    auto dr = [](double s) { return std::cos(s) + 0.2 * s; };
    auto ddr = [](double s) { return -std::sin(s) + 0.2; };
    for (int k = 2; k <= 3; ++k) {
        const auto g = oracle::warped_metric(r, k);
        for (double s : {-0.8, 0.3, 1.7}) {
            Eigen::VectorXd x = Eigen::VectorXd::Constant(k + 1, 1.1);
            x[0] = s;
            const double brute = oracle::scalar_curvature(g, x);
            EXPECT_NEAR(warped_scalar_curvature(k + 1, r(s), dr(s), ddr(s)), brute, 1e-6) << "k = " << k;
        }
    }
}

TEST(SurfaceCurvature, VacuumIdentity) {
    const auto st = schwarzschild(1.0);
    PhotonSurfaceSpec spec{0.3, 5.0, 0.0, +1, -2.0, 5.0};
    IntegrationOptions opt;
    opt.spacing = 1e-3;
    const auto res = surface_scalar_curvature_check(st, integrate_profile(st, spec, opt), spec.alpha);
    EXPECT_TRUE(res.applicable);
    EXPECT_DOUBLE_EQ(res.expected, 6.0 * 0.09);
    EXPECT_LT(res.residual, 1e-6);
}

TEST(SurfaceCurvature, EinsteinConstantOffset) {
    const auto st = schwarzschild_ads(1.0, 10.0);
    PhotonSurfaceSpec spec{0.35, 5.0, 0.0, +1, -1.0, 1.0};
    IntegrationOptions opt;
    opt.spacing = 1e-3;
    const auto res = surface_scalar_curvature_check(st, integrate_profile(st, spec, opt), spec.alpha);
    EXPECT_TRUE(res.applicable);
    EXPECT_NEAR(res.expected, 2.0 * (-0.03) + 6.0 * 0.35 * 0.35, 1e-15);
    EXPECT_LT(res.residual, 1e-6);
}

TEST(SurfaceCurvature, SkippedForUnknownMatter) {
    const auto st = reissner_nordstrom(1.0, 0.5);
    PhotonSurfaceSpec spec{0.3, 5.0, 0.0, +1, -1.0, 1.0};
    const auto res = surface_scalar_curvature_check(st, integrate_profile(st, spec), spec.alpha);
    EXPECT_FALSE(res.applicable);
    EXPECT_FALSE(res.note.empty());
}

TEST(Slice, IdentityAndConstraints) {
    for (int n = 3; n <= 7; ++n) {
        const auto st = schwarzschild(1.0, n);
        for (double r : {1.3 * st.r_lo(), 3.0, 17.0}) {
            const auto id = slice_identity_residual(st, r);
            EXPECT_TRUE(id.applicable);
            EXPECT_LT(id.residual, 1e-12);
            const auto c = c_constant(st, r);
            EXPECT_LT(c.constraint1, 1e-12);
            EXPECT_LT(c.constraint2, 1e-12);
        }
    }
}

TEST(Slice, PhotonSphereValueOfC) {
    // at r_*: f' r = 2f, so 2ν/(NH) = 2/(n-1) and c = n/(n-1)
    for (int n = 3; n <= 6; ++n) {
        const auto st = schwarzschild(1.0, n);
        const double r_star = std::pow(static_cast<double>(n), 1.0 / (n - 2));
        EXPECT_NEAR(c_constant(st, r_star).c, n / (n - 1.0), 1e-13);
    }
}

TEST(Slice, HorizonIsMinimal) {
    const auto st = schwarzschild(1.0);
    try {
        c_constant(st, 2.0);
        FAIL() << "expected MinimalSurface";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::MinimalSurface);
    }
    EXPECT_THROW(c_constant(st, 1.0), Error);
}

TEST(Slice, NonVacuumIdentityNotApplicable) {
    EXPECT_FALSE(slice_identity_residual(reissner_nordstrom(1.0, 0.5), 4.0).applicable);
}

TEST(MassFlux, ConstantAndPositive) {
    for (int n = 3; n <= 6; ++n) {
        const auto st = schwarzschild(1.0, n);
        const double ref = mass_flux(st, 10.0);
        EXPECT_GT(ref, 0.0);
        EXPECT_NEAR(ref, n - 2.0, 1e-12);
        for (double r : {1.1 * st.r_lo(), 4.0, 100.0}) EXPECT_NEAR(mass_flux(st, r), ref, 1e-12);
    }
    EXPECT_NEAR(mass_flux(schwarzschild(1.0), 7.0), 1.0, 1e-12);
    EXPECT_EQ(mass_flux(minkowski(), 3.0), 0.0);
}

TEST(IsotropicSurface, MappedProfileSatisfiesEquation) {
    const auto st = schwarzschild(1.0);
    const auto iso = to_isotropic_calibrated(st, 4.0);
    PhotonSurfaceSpec spec{0.3, 5.0, 0.0, +1, -1.5, 4.0};
    IntegrationOptions opt;
    opt.spacing = 1e-3;
    const auto samples = map_profile_to_isotropic(iso, integrate_profile(st, spec, opt));
    ASSERT_GT(samples.size(), 100u);
    EXPECT_LT(isotropic_surface_residual(iso, samples), 1e-5);
}

TEST(IsotropicSurface, ExactMappingAgreesWithDifferences) {
    const auto st = schwarzschild(1.0);
    const auto iso = to_isotropic_calibrated(st, 4.0);
    PhotonSurfaceSpec spec{0.15, 6.0, 0.0, -1, -3.0, 3.0};
    IntegrationOptions opt;
    opt.spacing = 1e-3;
    const auto curve = integrate_profile(st, spec, opt);
    const auto exact = map_profile_to_isotropic(iso, curve);
    const auto differenced = map_profile_to_isotropic(curve, [&iso](double r) { return isotropic_radius_of(iso, r); });
    ASSERT_EQ(exact.size(), differenced.size() + 4);
    for (std::size_t i = 0; i < differenced.size(); ++i) {
        EXPECT_EQ(exact[i + 2].S, differenced[i].S);
        EXPECT_NEAR(exact[i + 2].dS, differenced[i].dS, 1e-8);
        EXPECT_NEAR(exact[i + 2].ddS, differenced[i].ddS, 1e-6);
    }
    EXPECT_LT(isotropic_surface_residual(iso, differenced), 1e-5);
}

TEST(IsotropicSurface, NearHorizonSamples) {
    const auto st = schwarzschild(1.0);
    const auto iso = to_isotropic_calibrated(st, 4.0);
    PhotonSurfaceSpec spec{0.3, 5.0, 0.0, +1, -4.0, 1.0};
    IntegrationOptions opt;
    opt.spacing = 1e-3;
    const auto curve = integrate_profile(st, spec, opt);
    EXPECT_EQ(curve.backward_end, Termination::InnerBoundary);
    EXPECT_LT(isotropic_surface_residual(iso, map_profile_to_isotropic(iso, curve)), 1e-5);
}

TEST(IsotropicSurface, SphereSatisfiesEquationOnlyAtSStar) {
    const auto iso = schwarzschild_isotropic(1.0);
    const double S_star = 1.0 + std::sqrt(3.0) / 2.0;
    EXPECT_LT(isotropic_surface_residual(iso, {{0.0, S_star, 0.0, 0.0}}), 1e-12);
    EXPECT_GT(isotropic_surface_residual(iso, {{0.0, 3.0, 0.0, 0.0}}), 1e-2);
    EXPECT_THROW(isotropic_surface_residual(iso, {}), Error);
}
