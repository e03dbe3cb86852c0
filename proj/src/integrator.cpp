#include "bwm/integrator.hpp"

#include <cmath>
#include <sstream>

#include "bwm/error.hpp"

namespace bwm {

namespace {

SimulationState strang_step(const ManifoldSpec& m, const SimulationState& s,
                            const SchemeConfig& c, double dt) {
  const NonlinearSplit before = split_rhs(m, s.u, c.rhs_form, c.dealias_fraction);
  SimulationState mid = s;
  mid.ut = velocity_kick(before, s.u, s.ut, 0.5 * dt);
  mid = free_propagator(mid, dt);
  const NonlinearSplit after = split_rhs(m, mid.u, c.rhs_form, c.dealias_fraction);
  mid.ut = velocity_kick(after, mid.u, mid.ut, 0.5 * dt);
  return mid;
}

struct Rate {
  GridField du;
  GridField dut;
};

Rate rate(const ManifoldSpec& m, const SimulationState& s, const SchemeConfig& c) {
  GridField acc = rhs(m, s, c.rhs_form, c.dealias_fraction);
  acc -= bilaplacian(s.u);
  return {s.ut, std::move(acc)};
}

SimulationState advance(const SimulationState& s, const Rate& r, double h) {
  SimulationState out = s;
  out.u += h * r.du;
  out.ut += h * r.dut;
  return out;
}

SimulationState rk4_step(const ManifoldSpec& m, const SimulationState& s,
                         const SchemeConfig& c, double dt) {
  const Rate k1 = rate(m, s, c);
  const Rate k2 = rate(m, advance(s, k1, 0.5 * dt), c);
  const Rate k3 = rate(m, advance(s, k2, 0.5 * dt), c);
  const Rate k4 = rate(m, advance(s, k3, dt), c);
  SimulationState out = s;
  out.u += (dt / 6.0) * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
  out.ut += (dt / 6.0) * (k1.dut + 2.0 * k2.dut + 2.0 * k3.dut + k4.dut);
  return out;
}

}  // namespace

std::vector<std::string> step_size_advisories(const SchemeConfig& c,
                                              const Grid& grid) {
  std::vector<std::string> out;
  const double kmax = grid.max_wavenumber();
  if (c.scheme == Scheme::StrangSplit) {
    if (c.dt * kmax * kmax > std::numbers::pi) {
      std::ostringstream os;
      os << "dt * k_max^2 = " << c.dt * kmax * kmax
         << " exceeds pi; highest modes rotate more than half a turn per step";
      out.push_back(os.str());
    }
  } else {
    const double h = grid.spacing();
    if (c.dt > c.c_cfl * h * h) {
      std::ostringstream os;
      os << "dt = " << c.dt << " exceeds the explicit limit " << c.c_cfl * h * h
         << " (c_cfl * h^2)";
      out.push_back(os.str());
    }
  }
  return out;
}

SimulationState free_propagator(const SimulationState& s, double tau) {
  s.u.require_finite("free_propagator");
  s.ut.require_finite("free_propagator");
  Spectrum uh = forward(s.u);
  Spectrum vh = forward(s.ut);
  const int L = uh.ncomp;
  for (std::size_t m = 0; m < uh.num_modes(); ++m) {
    const double k2 = mode_info(uh.grid, m).k2;
    double c = 1.0, sinc_term = tau, damp = 0.0;
    if (k2 > 0.0) {
      const double phase = k2 * tau;
      c = std::cos(phase);
      const double sn = std::sin(phase);
      sinc_term = sn / k2;
      damp = -k2 * sn;
    }
    for (int comp = 0; comp < L; ++comp) {
      const auto a = uh.coeffs[m * L + comp];
      const auto b = vh.coeffs[m * L + comp];
      uh.coeffs[m * L + comp] = c * a + sinc_term * b;
      vh.coeffs[m * L + comp] = damp * a + c * b;
    }
  }
  return {inverse(uh), inverse(vh), s.time + tau};
}

SimulationState step(const ManifoldSpec& m, const SimulationState& s,
                     const SchemeConfig& c, std::size_t step_index) {
  return step(m, s, c, step_index, c.dt);
}

SimulationState step(const ManifoldSpec& m, const SimulationState& s,
                     const SchemeConfig& c, std::size_t step_index, double dt) {
  const double t_new = s.time + dt;
  try {
    SimulationState out = c.scheme == Scheme::StrangSplit ? strang_step(m, s, c, dt)
                                                          : rk4_step(m, s, c, dt);
    out.time = t_new;
    if (c.reproject_every > 0 &&
        (step_index + 1) % std::size_t(c.reproject_every) == 0) {
      out = tangent_enforce(m, out);
    }
    out.u.require_finite("step");
    out.ut.require_finite("step");
    return out;
  } catch (const TubeExceeded& e) {
    throw DiscreteBlowup(t_new, e.what());
  } catch (const NonFinite& e) {
    throw DiscreteBlowup(t_new, e.what());
  }
}

SimulationState evolve(const ManifoldSpec& m, const SimulationState& s0,
                       const SchemeConfig& c, double t_end, double output_every,
                       const Observer& observer) {
  if (t_end < s0.time) throw Error("t_end precedes the initial time");
  if (!(c.dt > 0.0)) throw Error("dt must be positive");
  const double t0 = s0.time;
  const double merge = 1e-6 * c.dt;
  SimulationState s = s0;
  if (observer) observer(s);
  bool observed_current = true;
  std::size_t j = 1;
  double next_out = output_every > 0.0 ? t0 + output_every : t_end + 1.0;
  std::size_t index = 0;
  while (t_end - s.time > merge) {
    double target = s.time + c.dt;
    bool hits_output = false;
    if (target >= next_out - merge) {
      target = next_out;
      hits_output = true;
    }
    if (target >= t_end - merge) {
      target = t_end;
      hits_output = hits_output || std::abs(next_out - t_end) <= merge;
    }
    s = step(m, s, c, index++, target - s.time);
    s.time = target;
    observed_current = false;
    if (hits_output) {
      if (observer) observer(s);
      observed_current = true;
      ++j;
      next_out = t0 + double(j) * output_every;
    }
  }
  if (!observed_current && observer) observer(s);
  return s;
}

}  // namespace bwm
