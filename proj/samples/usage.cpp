// Photon spheres of a few exteriors and one profile curve through each.

#include <cstdio>

#include "photonsurf/photonsurf.hpp"

using namespace photonsurf;

int main() {
    const ClassSSpacetime spacetimes[] = {schwarzschild(1.0, 3), schwarzschild(1.0, 4),
                                          reissner_nordstrom(1.0, 0.5), schwarzschild_ads(1.0, 10.0)};
    for (const auto& st : spacetimes) {
        std::printf("%s n=%d\n", to_string(st.family()), st.n());
        for (const auto& sphere : find_photon_spheres(st)) {
            std::printf("  r_* = %.10f  alpha_* = %.10f  b_* = %.10f\n", sphere.radius, sphere.alpha,
                        critical_impact_parameter(st, sphere));

            // slightly supercritical surface through the photon sphere radius
            PhotonSurfaceSpec spec{1.05 * sphere.alpha, sphere.radius, 0.0, +1, -3.0, 3.0};
            const auto curve = integrate_profile(st, spec);
            const auto inv = profile_invariants(st, curve);
            const auto& last = curve.samples.back();
            std::printf("  profile: %zu samples, ends at t = %.6f, r = %.6f (%s), unit residual %.2e\n",
                        curve.samples.size(), last.t, last.r, to_string(curve.forward_end), inv.max_unit_residual);
        }
    }

    // the same surface seen from its generating null geodesics
    const auto st = schwarzschild(1.0, 3);
    const ConservedCharges charges{1.0, 6.0};
    GeodesicSpec g{charges, 8.0, 0.0, 0.0, -1, 0.0, 30.0};
    const auto traj = integrate_null_geodesic(st, g);
    const auto profile = generated_surface_profile(st, traj);
    std::printf("geodesic E=%.1f ell=%.1f generates a photon surface with alpha = %.6f (%zu samples)\n", charges.E,
                charges.ell, umbilicity_from_charges(charges), profile.samples.size());
    return 0;
}
