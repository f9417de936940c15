#pragma once

#include "photonsurf/errors.hpp"
#include "photonsurf/geometry_checks.hpp"
#include "photonsurf/isotropic.hpp"
#include "photonsurf/null_geodesic.hpp"
#include "photonsurf/photon_surface.hpp"
#include "photonsurf/spacetime.hpp"
