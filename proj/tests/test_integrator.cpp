#include <doctest.h>

#include <cmath>
#include <random>

#include "bwm/diagnostics.hpp"
#include "bwm/error.hpp"
#include "bwm/initial.hpp"
#include "bwm/integrator.hpp"

using namespace bwm;

namespace {

const ManifoldSpec kS2 = ManifoldSpec::sphere(2);
const ManifoldSpec kS3 = ManifoldSpec::sphere(3);

InitialData wave_data(int k, double omega) {
  InitialData d;
  d.k = k;
  d.omega = omega;
  return d;
}

double wave_error(const SchemeConfig& c, int M, double omega, double T) {
  const Grid g = Grid::make(1, M);
  const InitialData d = wave_data(1, omega);
  double err = 0;
  evolve(kS2, traveling_wave(g, kS2, d, 0), c, T, 0.05, [&](const SimulationState& s) {
    err = std::max(err, max_abs_diff(s.u, traveling_wave(g, kS2, d, s.time).u));
  });
  return err;
}

SimulationState random_state(int dim, int M, double amp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_tangent_state(Grid::make(dim, M), kS3, 3, amp, amp, rng);
}

}  // namespace

TEST_CASE("free propagator") {
  const SimulationState s = random_state(2, 16, 0.7, 1);
  const SimulationState same = free_propagator(s, 0.0);
  CHECK(max_abs_diff(same.u, s.u) <= 1e-14);
  CHECK(max_abs_diff(same.ut, s.ut) <= 1e-14);

  // Single mode cos(2x) e: u(tau) = cos(4 tau) cos(2x) e.
  const Grid g = Grid::make(1, 16);
  SimulationState m;
  m.u = GridField::sample(g, 2, [](double x, double) { Vec v(2); v << std::cos(2 * x), 0; return v; });
  m.ut = GridField(g, 2);
  for (double tau : {0.1, 0.77, 3.0}) {
    const SimulationState out = free_propagator(m, tau);
    CHECK(max_abs_diff(out.u, std::cos(4 * tau) * m.u) <= 1e-13);
    CHECK(out.time == doctest::Approx(tau));
  }

  // Mean mode drifts linearly.
  SimulationState c;
  c.u = GridField(g, 2);
  c.ut = GridField::sample(g, 2, [](double, double) { Vec v(2); v << 0.5, -1; return v; });
  const SimulationState moved = free_propagator(c, 2.0);
  CHECK(moved.u.at(3, 0) == doctest::Approx(1.0));
  CHECK(moved.u.at(3, 1) == doctest::Approx(-2.0));

  const double e0 = energy(s);
  for (double tau : {1e-3, 0.5, 10.0}) {
    CHECK(std::abs(energy(free_propagator(s, tau)) - e0) <= 1e-12 * e0);
  }
}

TEST_CASE("constant map is an equilibrium") {
  const Grid g = Grid::make(2, 16);
  Vec p(3);
  p << 0, 0.6, 0.8;
  SimulationState s{GridField::sample(g, 3, [&](double, double) { return p; }), GridField(g, 3), 0.0};
  for (Scheme sch : {Scheme::StrangSplit, Scheme::RK4Proj}) {
    SchemeConfig c;
    c.scheme = sch;
    c.dt = 1e-3;
    const SimulationState out = step(kS3, s, c);
    CHECK(max_abs_diff(out.u, s.u) <= 1e-15);
    CHECK(out.ut.max_pointwise_norm() <= 1e-15);
    CHECK(out.time == doctest::Approx(1e-3));
  }
}

TEST_CASE("traveling wave reproduction") {
  SchemeConfig c;
  c.dt = 1e-3;
  CHECK(wave_error(c, 32, 1.0, 1.0) <= 1e-4);
  CHECK(wave_error(c, 32, 2.0, 1.0) <= 1e-4);
}

TEST_CASE("temporal order") {
  for (Scheme sch : {Scheme::StrangSplit, Scheme::RK4Proj}) {
    SchemeConfig c;
    c.scheme = sch;
    c.reproject_every = 0;
    std::vector<double> errs;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      c.dt = dt;
      errs.push_back(wave_error(c, 16, 2.0, 1.0));
    }
    const double order = std::log2(errs[0] / errs[2]) / 2;
    CHECK(order >= (sch == Scheme::StrangSplit ? 1.9 : 3.5));
  }
}

TEST_CASE("evolve cadence") {
  const Grid g = Grid::make(1, 16);
  const SimulationState s0 = traveling_wave(g, kS2, wave_data(1, 1), 0);
  SchemeConfig c;
  c.dt = 1e-2;
  int calls = 0;
  const SimulationState same = evolve(kS2, s0, c, 0.0, 0.1, [&](const SimulationState&) { ++calls; });
  CHECK(calls == 1);
  CHECK(max_abs_diff(same.u, s0.u) == 0.0);

  std::vector<double> times;
  const SimulationState end =
      evolve(kS2, s0, c, 2.0, 0.1, [&](const SimulationState& s) { times.push_back(s.time); });
  CHECK(times.size() == 21);
  CHECK(end.time == 2.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    CHECK(times[i] == doctest::Approx(0.1 * i).epsilon(1e-12));
  }

  // Step not dividing the horizon: last step shortened, final state seen once.
  c.dt = 0.03;
  times.clear();
  const SimulationState e2 =
      evolve(kS2, s0, c, 0.1, 0.0, [&](const SimulationState& s) { times.push_back(s.time); });
  CHECK(times.size() == 2);
  CHECK(e2.time == 0.1);
  CHECK_THROWS_AS(evolve(kS2, e2, c, 0.05, 0.0, nullptr), Error);
}

TEST_CASE("huge steps on large data blow up with a finite time") {
  const SimulationState s = random_state(1, 32, 2.0, 3);
  SchemeConfig c;
  c.scheme = Scheme::RK4Proj;
  c.dt = 0.05;
  try {
    evolve(kS3, s, c, 10.0, 0.0, nullptr);
    FAIL("expected DiscreteBlowup");
  } catch (const DiscreteBlowup& e) {
    CHECK(std::isfinite(e.time()));
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= 10.0);
  }
}

TEST_CASE("Strang step is time-reversible") {
  const SimulationState s = random_state(2, 16, 0.5, 4);
  SchemeConfig c;
  c.dt = 1e-3;
  c.reproject_every = 0;
  const SimulationState f = step(kS3, s, c, 0);
  const SimulationState b = step(kS3, f, c, 0, -c.dt);
  CHECK(max_abs_diff(b.u, s.u) <= 1e-11);
  CHECK(max_abs_diff(b.ut, s.ut) <= 1e-11);
  CHECK(std::abs(b.time - s.time) <= 1e-15);
}

TEST_CASE("constraint drift") {
  const SimulationState s = random_state(1, 32, 0.8, 5);
  SchemeConfig c;
  c.dt = 1e-3;
  std::vector<double> drift;
  for (int every : {1, 0}) {
    c.reproject_every = every;
    SimulationState x = s;
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
      x = step(kS3, x, c, i);
      worst = std::max(worst, state_health(kS3, x).constraint_max);
    }
    drift.push_back(worst);
  }
  CHECK(drift[0] <= 1e-10);
  CHECK(drift[1] > drift[0]);

  // Without reprojection the time-discretisation drift over a fixed horizon
  // is O(dt^2). Dealiasing adds a dt-independent floor (the truncated
  // nonlinearity is not exactly normal), so the order is read off with the
  // full spectrum on resolved data.
  const auto drift_at = [&](const SimulationState& x0, double dt, double dealias) {
    SchemeConfig d;
    d.reproject_every = 0;
    d.dt = dt;
    d.dealias_fraction = dealias;
    double worst = 0;
    evolve(kS3, x0, d, 0.2, 0.01, [&](const SimulationState& y) {
      worst = std::max(worst, state_health(kS3, y).constraint_max);
    });
    return worst;
  };
  const SimulationState smooth = random_state(1, 32, 0.3, 5);
  CHECK(std::log2(drift_at(smooth, 2e-3, 1.0) / drift_at(smooth, 1e-3, 1.0)) >= 1.8);
  const double floor_a = drift_at(smooth, 2e-3, kDefaultDealias);
  const double floor_b = drift_at(smooth, 1e-3, kDefaultDealias);
  CHECK(std::abs(floor_a / floor_b - 1) <= 0.05);
}

TEST_CASE("energy drift of the traveling wave") {
  const Grid g = Grid::make(1, 64);
  const InitialData d = wave_data(1, 1);
  SchemeConfig c;
  c.dt = 1e-3;
  const SimulationState s0 = traveling_wave(g, kS2, d, 0);
  const double e0 = energy(s0);
  double drift = 0;
  evolve(kS2, s0, c, 1.0, 0.05, [&](const SimulationState& s) {
    drift = std::max(drift, std::abs(energy(s) - e0) / e0);
  });
  CHECK(drift <= 1e-6);
}

TEST_CASE("step size advisories") {
  const Grid g = Grid::make(1, 32);
  SchemeConfig c;
  c.dt = 1e-3;
  CHECK(step_size_advisories(c, g).empty());
  c.dt = 1.0;
  CHECK(step_size_advisories(c, g).size() == 1);
  c.scheme = Scheme::RK4Proj;
  c.dt = 1e-3;
  CHECK(step_size_advisories(c, g).empty());
  c.dt = 0.3 * g.spacing() * g.spacing();
  CHECK(step_size_advisories(c, g).size() == 1);
}
