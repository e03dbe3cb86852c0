#include "bwm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bwm/error.hpp"

namespace bwm {

namespace {

using LE = LebesgueExponent;

double l2(const GridField& f) { return lebesgue_norm(f, LE::Two); }
double l4(const GridField& f) { return lebesgue_norm(f, LE::Four); }
double sup(const GridField& f) { return lebesgue_norm(f, LE::Infinity); }

GridField stacked(const Spectrum& s, SpectralOp op) {
  const int n = s.grid.dim;
  const int L = s.ncomp;
  GridField out(s.grid, n * L);
  for (int a = 0; a < n; ++a) {
    const GridField d = apply(s, op, a);
    for (std::size_t p = 0; p < out.num_points(); ++p) {
      for (int c = 0; c < L; ++c) out.at(p, a * L + c) = d.at(p, c);
    }
  }
  return out;
}

void require_finite_state(const SimulationState& s, const char* where) {
  s.u.require_finite(where);
  s.ut.require_finite(where);
}

// Scale below which a denominator counts as vanishing.
double degeneracy_floor(const SimulationState& s) {
  return 1e-10 * std::max({1.0, l2(s.u), l2(s.ut)});
}

}  // namespace

double energy(const SimulationState& s) {
  require_finite_state(s, "energy");
  const double lap = l2(apply(forward(s.u), SpectralOp::Laplacian));
  const double vel = l2(s.ut);
  return 0.5 * (vel * vel + lap * lap);
}

double grad_growth_rate(const SimulationState& s) {
  return -2.0 * inner_product(laplacian(s.u), s.ut);
}

double grad_l2_squared(const SimulationState& s) {
  const double g = l2(gradient(s.u));
  return g * g;
}

double cal_E(const SimulationState& s) {
  require_finite_state(s, "cal_E");
  const Spectrum uh = forward(s.u);
  const Spectrum vh = forward(s.ut);
  if (s.u.grid().dim == 2) {
    return l2(apply(vh, SpectralOp::Laplacian)) + l2(apply(uh, SpectralOp::Bilaplacian));
  }
  return l2(gradient(vh)) + l2(stacked(uh, SpectralOp::GradLaplacian));
}

double grad_sup(const SimulationState& s) { return sup(gradient(s.u)); }

GridField resample(const GridField& f, int lambda) {
  if (lambda < 1) throw Error("scaling factor must be a positive integer");
  const Grid& g = f.grid();
  const std::size_t M = g.points_per_axis;
  GridField out(g, f.ncomp());
  for (std::size_t p = 0; p < f.num_points(); ++p) {
    std::size_t src;
    if (g.dim == 1) {
      src = (lambda * p) % M;
    } else {
      const std::size_t i = p / M, j = p % M;
      src = ((lambda * i) % M) * M + (lambda * j) % M;
    }
    for (int c = 0; c < f.ncomp(); ++c) out.at(p, c) = f.at(src, c);
  }
  return out;
}

SimulationState rescale_state(const SimulationState& s, int lambda) {
  SimulationState out{resample(s.u, lambda), resample(s.ut, lambda), 0.0};
  out.ut *= double(lambda) * lambda;
  out.time = s.time / (double(lambda) * lambda);
  return out;
}

ScalingReport scaling_energy_check(const SimulationState& s, int lambda) {
  ScalingReport r;
  const int n = s.u.grid().dim;
  r.energy_original = energy(s);
  r.energy_scaled = energy(rescale_state(s, lambda));
  r.measured_ratio = r.energy_original > 0.0 ? r.energy_scaled / r.energy_original : 1.0;
  r.predicted_fixed_box = std::pow(double(lambda), 4);
  r.predicted_whole_space = std::pow(double(lambda), 4 - n);
  r.measure_adjusted_ratio = r.measured_ratio / std::pow(double(lambda), n);
  return r;
}

double GnReport::get(const std::string& name) const {
  for (const auto& [k, v] : ratios) {
    if (k == name) return v;
  }
  throw Error("no interpolation ratio named " + name);
}

const std::vector<std::string>& gn_names(int dim) {
  static const std::vector<std::string> one{"grad_sup", "hess_sup", "vel_sup"};
  static const std::vector<std::string> two{"lap_sup", "vel_sup", "grad_sup",
                                            "grad_l4", "grad_vel_l4"};
  return dim == 1 ? one : two;
}

GnReport gn_check(const SimulationState& s) {
  require_finite_state(s, "gn_check");
  const int n = s.u.grid().dim;
  const Spectrum uh = forward(s.u);
  const Spectrum vh = forward(s.ut);
  const double floor = degeneracy_floor(s);
  GnReport rep;
  const auto add = [&](const std::string& name, double num, double den) {
    if (den <= floor) {
      rep.degenerate = true;
      rep.ratios.emplace_back(name, 0.0);
    } else {
      rep.ratios.emplace_back(name, num / den);
    }
  };
  const GridField grad = gradient(uh);
  const GridField lap = apply(uh, SpectralOp::Laplacian);
  const GridField bilap = apply(uh, SpectralOp::Bilaplacian);
  const double grad2 = l2(grad), lap2 = l2(lap), bilap2 = l2(bilap);
  const double vel2 = l2(s.ut), velsup = sup(s.ut);
  if (n == 2) {
    const GridField gradlap = stacked(uh, SpectralOp::GradLaplacian);
    const double lapvel2 = l2(apply(vh, SpectralOp::Laplacian));
    add("lap_sup", sup(lap) + l2(gradlap), std::sqrt(bilap2 * lap2));
    add("vel_sup", velsup, std::sqrt(lapvel2 * vel2));
    add("grad_sup", sup(grad), std::cbrt(bilap2) * std::pow(grad2, 2.0 / 3.0));
    add("grad_l4", l4(grad), std::pow(bilap2, 1.0 / 6.0) * std::pow(grad2, 5.0 / 6.0));
    add("grad_vel_l4", l4(gradient(vh)),
        std::pow(lapvel2, 0.75) * std::pow(vel2, 0.25));
  } else {
    const double gradvel2 = l2(gradient(vh));
    add("grad_sup", sup(grad), std::sqrt(lap2 * grad2));
    add("hess_sup", sup(lap), std::pow(bilap2, 0.25) * std::pow(lap2, 0.75));
    add("vel_sup", velsup, std::sqrt(gradvel2 * vel2));
  }
  return rep;
}

double bgw_check(const SimulationState& s) {
  require_finite_state(s, "bgw_check");
  if (s.u.grid().dim != 2) throw Error("BGW ratio is defined for dim = 2");
  const Spectrum gh = forward(gradient(s.u));
  const double h1 = sobolev_norm(gh, 1);
  if (h1 <= degeneracy_floor(s)) throw Degenerate("grad u vanishes identically");
  const double h2 = sobolev_norm(gh, 2);
  const double h = grad_sup(s);
  return h / (h1 * (1.0 + std::sqrt(std::log1p(h2 * h2 / (h1 * h1)))));
}

double gronwall_monitored(double cal_E, int dim) {
  return dim == 2 ? std::log(std::numbers::e + cal_E * cal_E) : 1.0 + cal_E;
}

GronwallResult gronwall_envelope(const std::vector<DiagnosticsRecord>& history,
                                 double C, int dim) {
  GronwallResult r;
  if (history.empty()) return r;
  const double t0 = history.front().time;
  const double base = gronwall_monitored(history.front().cal_E, dim);
  for (const auto& rec : history) {
    const double env = std::exp(C * (rec.time - t0)) * base;
    const bool bad = gronwall_monitored(rec.cal_E, dim) > env * (1.0 + 1e-12);
    r.envelope.push_back(env);
    r.violated.push_back(bad);
    r.any_violation = r.any_violation || bad;
  }
  return r;
}

double gronwall_required_constant(const std::vector<DiagnosticsRecord>& history,
                                  int dim) {
  if (history.empty()) return 0.0;
  const double t0 = history.front().time;
  const double base = gronwall_monitored(history.front().cal_E, dim);
  double c = 0.0;
  for (const auto& rec : history) {
    const double dt = rec.time - t0;
    if (dt <= 0.0) continue;
    c = std::max(c, std::log(gronwall_monitored(rec.cal_E, dim) / base) / dt);
  }
  return c;
}

double uniqueness_energy(const SimulationState& a, const SimulationState& b) {
  if (!(a.u.grid() == b.u.grid()) || a.u.ncomp() != b.u.ncomp()) {
    throw GridMismatch("uniqueness energy needs states on the same grid");
  }
  const GridField w = a.u - b.u;
  const GridField wt = a.ut - b.ut;
  const double vt = l2(wt);
  const double h2 = sobolev_norm(w, 2);
  return std::sqrt(vt * vt + h2 * h2);
}

DiagnosticsRecorder::DiagnosticsRecorder(ManifoldSpec manifold, SchemeConfig scheme,
                                         double gronwall_C)
    : manifold_(manifold), scheme_(scheme), gronwall_C_(gronwall_C) {}

const DiagnosticsRecord& DiagnosticsRecorder::record(const SimulationState& s) {
  DiagnosticsRecord r;
  const int n = s.u.grid().dim;
  r.time = s.time;
  r.energy = energy(s);
  const double e0 = history_.empty() ? r.energy : history_.front().energy;
  r.energy_rel_drift = std::abs(r.energy - e0) / std::max(e0, 1e-14);
  r.grad_l2_sq = grad_l2_squared(s);
  r.cal_E = cal_E(s);
  r.h = grad_sup(s);
  const StateHealth health = state_health(manifold_, s);
  r.constraint_max = health.constraint_max;
  r.tangent_max = health.tangent_max;
  // Projector form even on spheres: the multiplier form is normal by
  // construction, so its residual would say nothing.
  const GridField f = rhs_projector(manifold_, s, scheme_.dealias_fraction);
  r.ortho_residual = max_tangent_part(manifold_, s.u, f);
  r.gn = gn_check(s);
  if (n == 2) {
    try {
      r.bgw_ratio = bgw_check(s);
    } catch (const Degenerate&) {
      r.bgw_ratio = 0.0;
    }
  }
  const double t0 = history_.empty() ? r.time : history_.front().time;
  const double base =
      gronwall_monitored(history_.empty() ? r.cal_E : history_.front().cal_E, n);
  r.gronwall_envelope = std::exp(gronwall_C_ * (r.time - t0)) * base;
  r.gronwall_violated =
      gronwall_monitored(r.cal_E, n) > r.gronwall_envelope * (1.0 + 1e-12);
  history_.push_back(std::move(r));
  return history_.back();
}

}  // namespace bwm
