#pragma once

#include <functional>
#include <string>
#include <vector>

#include "bwm/dynamics.hpp"

namespace bwm {

enum class Scheme { StrangSplit, RK4Proj };

struct SchemeConfig {
  Scheme scheme = Scheme::StrangSplit;
  double dt = 1e-3;
  int reproject_every = 1;  // 0 disables re-enforcement of the constraints
  double dealias_fraction = kDefaultDealias;
  RhsForm rhs_form = RhsForm::Auto;
  double c_cfl = 0.25;      // RK4Proj: dt <= c_cfl * (length / M)^2
};

// Accuracy/stability advisories for the step size on this grid. Empty when
// dt is within the recommended range. These are not errors.
std::vector<std::string> step_size_advisories(const SchemeConfig& c,
                                              const Grid& grid);

// Exact flow of u_tt + Lap^2 u = 0 over time tau, mode by mode.
SimulationState free_propagator(const SimulationState& s, double tau);

// One step of size c.dt (or `dt` when given). `step_index` is the zero-based
// index of this step within a run; constraints are re-enforced after steps
// whose index + 1 is a multiple of c.reproject_every.
// Throws DiscreteBlowup if the state leaves the tube or becomes non-finite.
SimulationState step(const ManifoldSpec& m, const SimulationState& s,
                     const SchemeConfig& c, std::size_t step_index = 0);
SimulationState step(const ManifoldSpec& m, const SimulationState& s,
                     const SchemeConfig& c, std::size_t step_index, double dt);

using Observer = std::function<void(const SimulationState&)>;

// Steps from s0.time to t_end, shortening steps to land exactly on every
// output time s0.time + j * output_every and on t_end. The observer sees the
// initial state, each output time, and the final state (once).
// output_every <= 0 means initial and final only.
SimulationState evolve(const ManifoldSpec& m, const SimulationState& s0,
                       const SchemeConfig& c, double t_end, double output_every,
                       const Observer& observer);

}  // namespace bwm
