#pragma once

#include <cstdint>
#include <random>

#include "bwm/config.hpp"
#include "bwm/dynamics.hpp"

namespace bwm {

// Smooth periodic bump centred in the box, peak value 1:
// prod_a exp((cos(2 pi (x_a - c_a) / l) - 1) (l / (2 pi width))^2).
double bump_profile(const Grid& grid, double width, double x, double y);

Vec default_base(const ManifoldSpec& m);
// A unit tangent vector at `base`.
Vec default_direction(const ManifoldSpec& m, const Vec& base);

// Random trigonometric polynomial in R^ncomp with modes |j_a| <= kmax (the
// mean excluded), scaled so that the largest pointwise norm is 1.
GridField random_bandlimited_field(const Grid& grid, int ncomp, int kmax,
                                   std::mt19937_64& rng);

// Pushes `base` along the tangent field `amplitude * f` in small retracted
// steps, so that every intermediate point stays well inside the tube.
GridField push_onto_manifold(const ManifoldSpec& m, const Vec& base,
                             const GridField& f, double amplitude);

// Exact traveling wave at time t on a sphere target.
SimulationState traveling_wave(const Grid& grid, const ManifoldSpec& m,
                               const InitialData& d, double t);

// Random tangent state, as drawn by the random_bandlimited family.
SimulationState random_tangent_state(const Grid& grid, const ManifoldSpec& m,
                                     int kmax, double amplitude, double velocity,
                                     std::mt19937_64& rng);

// Deterministic in cfg.seed. Output satisfies the constraints to 1e-10.
SimulationState make_initial(const RunConfig& cfg);

}  // namespace bwm
