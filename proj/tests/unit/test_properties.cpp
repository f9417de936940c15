// Randomized invariants over seeded parameter draws.

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "photonsurf/geometry_checks.hpp"
#include "photonsurf/null_geodesic.hpp"

using namespace photonsurf;

namespace {

struct Draw {
    explicit Draw(unsigned seed) : rng(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int pick(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
    std::mt19937_64 rng;
};

}  // namespace

TEST(Property, ProfilesConserveInvariants) {
    Draw d(11);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = d.pick(3, 5);
        const auto st = schwarzschild(1.0, n);
        const double r0 = d.uniform(1.2 * st.r_lo(), 12.0);
        const double a_min = std::sqrt(st.f(r0)) / r0;
        const double alpha = a_min * d.uniform(1.0001, 2.0);
        const int sign = d.pick(0, 1) ? 1 : -1;
        PhotonSurfaceSpec spec{alpha, r0, 0.0, sign, -3.0, 3.0};
        const auto curve = integrate_profile(st, spec);
        const auto inv = profile_invariants(st, curve);
        EXPECT_LT(inv.max_unit_residual, 1e-9) << "n=" << n << " r0=" << r0 << " alpha=" << alpha;
        EXPECT_LT(inv.max_alpha_residual, 1e-9) << "n=" << n << " r0=" << r0 << " alpha=" << alpha;
        EXPECT_TRUE(inv.future_directed);
    }
}

TEST(Property, TimeTranslationShiftsT) {
    const auto st = schwarzschild(1.0);
    PhotonSurfaceSpec a{0.3, 5.0, 0.0, +1, -2.0, 2.0};
    PhotonSurfaceSpec b = a;
    b.t0 = 7.25;
    const auto ca = integrate_profile(st, a);
    const auto cb = integrate_profile(st, b);
    ASSERT_EQ(ca.samples.size(), cb.samples.size());
    for (std::size_t i = 0; i < ca.samples.size(); ++i) {
        EXPECT_NEAR(cb.samples[i].t - ca.samples[i].t, 7.25, 1e-12);
        EXPECT_EQ(cb.samples[i].r, ca.samples[i].r);
    }
}

TEST(Property, ReversingSignReflectsArclength) {
    // (t, r)(s) with ṙ(0) < 0 equals (−t, r)(−s) with ṙ(0) > 0
    const auto st = schwarzschild(1.0);
    const auto fwd = integrate_profile(st, {0.3, 5.0, 0.0, +1, -2.0, 2.0});
    const auto bwd = integrate_profile(st, {0.3, 5.0, 0.0, -1, -2.0, 2.0});
    ASSERT_EQ(fwd.samples.size(), bwd.samples.size());
    const std::size_t n = fwd.samples.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = fwd.samples[i];
        const auto& q = bwd.samples[n - 1 - i];
        EXPECT_NEAR(p.r, q.r, 1e-9);
        EXPECT_NEAR(p.t, -q.t, 1e-9);
    }
}

TEST(Property, PhotonSphereScalesWithMass) {
    Draw d(5);
    for (int trial = 0; trial < 8; ++trial) {
        const double m = d.uniform(0.05, 20.0);
        const auto spheres = find_photon_spheres(schwarzschild(m));
        ASSERT_EQ(spheres.size(), 1u);
        EXPECT_NEAR(spheres[0].radius, 3.0 * m, 1e-11 * m);
        EXPECT_NEAR(spheres[0].alpha * m, 1.0 / std::sqrt(27.0), 1e-12);
    }
}

TEST(Property, SliceIdentitiesAtRandomRadii) {
    Draw d(23);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = d.pick(3, 7);
        const auto st = schwarzschild(d.uniform(0.1, 3.0), n);
        const double r = st.r_lo() * std::exp(d.uniform(0.01, 4.0));
        EXPECT_LT(slice_identity_residual(st, r).residual, 1e-10);
        const auto c = c_constant(st, r);
        EXPECT_LT(c.constraint1, 1e-10);
        EXPECT_LT(c.constraint2, 1e-10 * std::max(1.0, c.c));
    }
}

TEST(Property, GeodesicsStayNull) {
    Draw d(7);
    const auto st = schwarzschild(1.0);
    for (int trial = 0; trial < 10; ++trial) {
        GeodesicSpec g;
        g.r0 = d.uniform(3.5, 15.0);
        const double b_max = g.r0 / std::sqrt(st.f(g.r0));
        g.charges = {d.uniform(0.5, 2.0), 0.0};
        g.charges.ell = g.charges.E * b_max * d.uniform(0.1, 0.999);
        g.sign = d.pick(0, 1) ? 1 : -1;
        g.lambda_min = -5.0;
        g.lambda_max = 5.0;
        const auto traj = integrate_null_geodesic(st, g);
        for (const auto& p : traj.samples) {
            EXPECT_LT(null_residual(st, g.charges, p), 1e-9 * g.charges.E * g.charges.E);
        }
    }
}

TEST(Property, TurningPointsAreZerosOfRadialSpeed) {
    Draw d(3);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = d.pick(3, 6);
        const auto st = schwarzschild(1.0, n);
        const double a_star = find_photon_spheres(st).at(0).alpha;
        const double alpha = a_star * d.uniform(0.3, 0.99);
        const auto tp = turning_points(st, alpha);
        ASSERT_EQ(tp.size(), 2u);
        for (double r : tp) EXPECT_NEAR(radial_speed_squared(st, alpha, r), 0.0, 1e-12);
    }
}
