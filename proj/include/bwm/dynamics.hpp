#pragma once

// Right-hand side of u_tt + Lap^2 u = F(u, u_t) for maps into N, in the
// generic projector form and the sphere multiplier form.

#include <vector>

#include "bwm/geometry.hpp"
#include "bwm/grid.hpp"
#include "bwm/kernels.hpp"

namespace bwm {

struct SimulationState {
  GridField u;
  GridField ut;
  double time = 0.0;
};

enum class RhsForm { Auto, Projector, Sphere };

inline constexpr double kDefaultDealias = 2.0 / 3.0;

// F = dP(u_t, u_t) + Lap(sum_i dP(d_i u, d_i u)) + 2 div(dP(grad u, Lap u))
//     - (Lap P_u) Lap u,
// where (Lap P_u) = sum_i d2P(d_i u, d_i u) + dP(Lap u) is the Laplacian of
// x -> P_{u(x)}. Outer Lap/div act spectrally on dealiased products.
GridField rhs_projector(const ManifoldSpec& m, const SimulationState& s,
                        double dealias_fraction = kDefaultDealias,
                        Exec exec = Exec::Parallel);

// Sphere case: F = lambda u with
//   lambda = -|u_t|^2 - Lap(|grad u|^2) - 2 div<Lap u, grad u> + |Lap u|^2,
// obtained from <u_tt, u> = -|u_t|^2 and
//   <Lap^2 u, u> = Lap<Lap u, u> - 2<grad Lap u, grad u> - |Lap u|^2
// together with <Lap u, u> = -|grad u|^2 on |u| = 1.
GridField rhs_sphere(const SimulationState& s,
                     double dealias_fraction = kDefaultDealias,
                     Exec exec = Exec::Parallel);

// Uses the sphere form for spheres under Auto.
GridField rhs(const ManifoldSpec& m, const SimulationState& s, RhsForm form,
              double dealias_fraction = kDefaultDealias,
              Exec exec = Exec::Parallel);

// F split as Q(u; u_t) + G(u) with Q quadratic in u_t and pointwise.
struct NonlinearSplit {
  bool sphere = false;
  GridField velocity_free;  // G(u)
  std::vector<double> dP;   // projector form only
};

NonlinearSplit split_rhs(const ManifoldSpec& m, const GridField& u, RhsForm form,
                         double dealias_fraction, Exec exec = Exec::Parallel);

// Advances u_t along v' = Q(u; v) + G(u) for time h with u frozen.
GridField velocity_kick(const NonlinearSplit& split, const GridField& u,
                        const GridField& ut, double h,
                        Exec exec = Exec::Parallel);

// max_x |P_u (utt + Lap^2 u)|.
double orthogonality_residual(const ManifoldSpec& m, const SimulationState& s,
                              const GridField& utt, Exec exec = Exec::Parallel);

// u <- Pi(u), then u_t <- P_u u_t at the retracted base point.
SimulationState tangent_enforce(const ManifoldSpec& m, const SimulationState& s,
                                Exec exec = Exec::Parallel);

struct StateHealth {
  double constraint_max = 0.0;
  double tangent_max = 0.0;  // max |(I - P_u) u_t|
};
StateHealth state_health(const ManifoldSpec& m, const SimulationState& s,
                         Exec exec = Exec::Parallel);

}  // namespace bwm
