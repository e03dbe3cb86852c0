#pragma once

// Monitored quantities along a run: conserved energy, growth bounds, the
// higher-order functional cal_E, interpolation-inequality ratios, the
// Brezis-Gallouet-Wainger ratio, the Gronwall envelope and the two-trajectory
// difference energy.

#include <string>
#include <utility>
#include <vector>

#include "bwm/dynamics.hpp"
#include "bwm/integrator.hpp"

namespace bwm {

// 1/2 (||u_t||^2 + ||Lap u||^2).
double energy(const SimulationState& s);

// d/dt ||grad u||^2 = -2 <Lap u, u_t>.
double grad_growth_rate(const SimulationState& s);

double grad_l2_squared(const SimulationState& s);

// n = 2: ||Lap u_t|| + ||Lap^2 u||;  n = 1: ||grad u_t|| + ||grad Lap u||.
double cal_E(const SimulationState& s);

// ||grad u||_inf.
double grad_sup(const SimulationState& s);

// u_lambda(x) = u(lambda x) on the same box; exact on grid samples.
GridField resample(const GridField& f, int lambda);
SimulationState rescale_state(const SimulationState& s, int lambda);

struct ScalingReport {
  double energy_original = 0.0;
  double energy_scaled = 0.0;
  double measured_ratio = 0.0;         // E_scaled / E_original
  double predicted_fixed_box = 0.0;    // lambda^4 (periodic box held fixed)
  double predicted_whole_space = 0.0;  // lambda^(4 - n)
  double measure_adjusted_ratio = 0.0; // measured_ratio / lambda^n
};
ScalingReport scaling_energy_check(const SimulationState& s, int lambda);

struct GnReport {
  std::vector<std::pair<std::string, double>> ratios;  // fixed order per dim
  bool degenerate = false;  // at least one denominator vanished
  double get(const std::string& name) const;
};

// Names in column order for a spatial dimension.
const std::vector<std::string>& gn_names(int dim);

GnReport gn_check(const SimulationState& s);

// h / [ ||grad u||_H1 (1 + log^{1/2}(1 + ||grad u||_H2^2 / ||grad u||_H1^2)) ].
// Requires dim == 2; throws Degenerate for constant u.
double bgw_check(const SimulationState& s);

struct DiagnosticsRecord {
  double time = 0.0;
  double energy = 0.0;
  double energy_rel_drift = 0.0;
  double grad_l2_sq = 0.0;
  double cal_E = 0.0;
  double h = 0.0;
  double constraint_max = 0.0;
  double tangent_max = 0.0;
  double ortho_residual = 0.0;
  GnReport gn;
  double bgw_ratio = 0.0;
  double gronwall_envelope = 0.0;
  bool gronwall_violated = false;
};

// Monitored value compared against the envelope: log(e + cal_E^2) for n = 2,
// 1 + cal_E for n = 1.
double gronwall_monitored(double cal_E, int dim);

struct GronwallResult {
  std::vector<double> envelope;
  std::vector<bool> violated;
  bool any_violation = false;
};

// n = 2: log(e + cal_E^2(t)) <= exp(C t) log(e + cal_E^2(0));
// n = 1: 1 + cal_E(t) <= exp(C t) (1 + cal_E(0)); t measured from history[0].
GronwallResult gronwall_envelope(const std::vector<DiagnosticsRecord>& history,
                                 double C, int dim);

// Smallest C for which the envelope contains the history.
double gronwall_required_constant(const std::vector<DiagnosticsRecord>& history,
                                  int dim);

// (||w_t||^2 + ||w||_H2^2)^(1/2) with w = u_a - u_b.
double uniqueness_energy(const SimulationState& a, const SimulationState& b);

// Builds records along a run; the first recorded state fixes E(0) and cal_E(0).
class DiagnosticsRecorder {
 public:
  DiagnosticsRecorder(ManifoldSpec manifold, SchemeConfig scheme, double gronwall_C);

  const DiagnosticsRecord& record(const SimulationState& s);
  const std::vector<DiagnosticsRecord>& history() const { return history_; }

 private:
  ManifoldSpec manifold_;
  SchemeConfig scheme_;
  double gronwall_C_;
  std::vector<DiagnosticsRecord> history_;
};

}  // namespace bwm
