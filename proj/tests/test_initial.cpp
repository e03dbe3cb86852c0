#include <doctest.h>

#include <cmath>

#include "bwm/config.hpp"
#include "bwm/diagnostics.hpp"
#include "bwm/error.hpp"
#include "bwm/initial.hpp"

using namespace bwm;

namespace {

RunConfig base_config(InitialKind kind, int dim = 1, const ManifoldSpec& m = ManifoldSpec::sphere(3)) {
  RunConfig c;
  c.dim = dim;
  c.grid_size = 32;
  c.manifold = m;
  c.initial.kind = kind;
  return c;
}

void check_constraints(const RunConfig& c, const SimulationState& s) {
  const StateHealth h = state_health(c.manifold, s);
  CHECK(h.constraint_max <= 1e-10);
  CHECK(h.tangent_max <= 1e-10);
}

}  // namespace

TEST_CASE("traveling wave data") {
  RunConfig c = base_config(InitialKind::TravelingWave);
  c.manifold = ManifoldSpec::sphere(2);
  const SimulationState s = make_initial(c);
  const Grid g = c.grid();
  for (std::size_t p = 0; p < g.num_points(); ++p) {
    const double x = g.coordinate(p)[0];
    CHECK(std::abs(s.u.at(p, 0) - std::cos(x)) <= 1e-15);
    CHECK(std::abs(s.u.at(p, 1) - std::sin(x)) <= 1e-15);
    CHECK(std::abs(s.ut.at(p, 0) + std::sin(x)) <= 1e-15);
    CHECK(std::abs(s.ut.at(p, 1) - std::cos(x)) <= 1e-15);
  }
  CHECK(s.time == 0.0);
  check_constraints(c, s);

  RunConfig t = base_config(InitialKind::TravelingWave, 1, ManifoldSpec::torus(2, 0.5));
  CHECK_THROWS_AS(make_initial(t), ValidationError);
}

TEST_CASE("two-dimensional traveling wave on an equator") {
  RunConfig c = base_config(InitialKind::TravelingWave, 2);
  c.initial.ky = 2;
  c.initial.axis_a = 1;
  c.initial.axis_b = 2;
  const SimulationState s = make_initial(c);
  check_constraints(c, s);
  CHECK(lebesgue_norm(s.u, LebesgueExponent::Infinity) == doctest::Approx(1.0));
}

TEST_CASE("bump data") {
  for (const ManifoldSpec& m : {ManifoldSpec::sphere(3), ManifoldSpec::torus(2, 0.5)}) {
    for (int dim : {1, 2}) {
      RunConfig c = base_config(InitialKind::Bump, dim, m);
      c.initial.amplitude = 0.0;
      const SimulationState flat = make_initial(c);
      CHECK(energy(flat) <= 1e-28);
      CHECK(max_abs_diff(flat.u, GridField::sample(c.grid(), 3, [&](double, double) {
              return default_base(m);
            })) <= 1e-15);

      c.initial.amplitude = m.kind == ManifoldKind::Sphere ? 0.5 : 0.3;
      c.initial.velocity = 0.4;
      const SimulationState s = make_initial(c);
      check_constraints(c, s);
      CHECK(energy(s) > 0);
    }
  }
  RunConfig big = base_config(InitialKind::Bump);
  big.initial.amplitude = 1.5;  // |p + A e| - 1 = 0.80 > tube 0.5
  CHECK_THROWS_AS(make_initial(big), TubeExceeded);
}

TEST_CASE("random band-limited data") {
  for (const ManifoldSpec& m : {ManifoldSpec::sphere(3), ManifoldSpec::sphere(4), ManifoldSpec::torus(2, 0.5)}) {
    for (int dim : {1, 2}) {
      RunConfig c = base_config(InitialKind::RandomBandlimited, dim, m);
      c.initial.amplitude = 2.0;
      c.initial.kmax = 4;
      c.seed = 99;
      const SimulationState a = make_initial(c);
      const SimulationState b = make_initial(c);
      CHECK(a.u.values() == b.u.values());
      CHECK(a.ut.values() == b.ut.values());
      check_constraints(c, a);
      c.seed = 100;
      CHECK(make_initial(c).u.values() != a.u.values());
    }
  }
}

TEST_CASE("random field normalisation") {
  std::mt19937_64 rng(1);
  const GridField f = random_bandlimited_field(Grid::make(2, 16), 3, 3, rng);
  CHECK(f.max_pointwise_norm() == doctest::Approx(1.0));
  // No mean mode.
  const Spectrum s = forward(f);
  for (int c = 0; c < 3; ++c) CHECK(std::abs(s.coeffs[c]) <= 1e-13);
}

TEST_CASE("constant data") {
  RunConfig c = base_config(InitialKind::Constant, 2);
  c.initial.base = {0, 0.72, 0.96};  // 0.2 off the sphere, retracted
  const SimulationState s = make_initial(c);
  CHECK(s.u.at(0, 1) == doctest::Approx(0.6));
  CHECK(s.u.at(5, 2) == doctest::Approx(0.8));
  CHECK(s.ut.max_pointwise_norm() == 0.0);
  c.initial.base = {0, 3, 4};
  CHECK_THROWS_AS(make_initial(c), TubeExceeded);
}

TEST_CASE("bump profile") {
  const Grid g = Grid::make(2, 16);
  CHECK(bump_profile(g, 0.5, g.length / 2, g.length / 2) == doctest::Approx(1.0));
  CHECK(bump_profile(g, 0.5, 0, 0) < 1e-6);
}
