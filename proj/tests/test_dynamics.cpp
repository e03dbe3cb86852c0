#include <doctest.h>

#include <Eigen/QR>
#include <cmath>
#include <random>

#include "bwm/dynamics.hpp"
#include "bwm/error.hpp"
#include "bwm/initial.hpp"

using namespace bwm;

namespace {

SimulationState constant_state(const Grid& g, const Vec& p) {
  SimulationState s;
  s.u = GridField::sample(g, int(p.size()), [&](double, double) { return p; });
  s.ut = GridField(g, int(p.size()));
  return s;
}

GridField rotate(const GridField& f, const Mat& Q) {
  GridField out(f.grid(), f.ncomp());
  for (std::size_t p = 0; p < f.num_points(); ++p) out.set_point(p, Q * f.point(p));
  return out;
}

SimulationState wave(int M, int k, double omega, int L = 2, int dim = 1) {
  InitialData d;
  d.k = k;
  d.omega = omega;
  return traveling_wave(Grid::make(dim, M), ManifoldSpec::sphere(L), d, 0.0);
}

SimulationState bump(int dim, int M, const ManifoldSpec& m) {
  RunConfig c;
  c.dim = dim;
  c.grid_size = M;
  c.manifold = m;
  c.initial.kind = InitialKind::Bump;
  c.initial.amplitude = 0.5;
  c.initial.velocity = 0.5;
  return make_initial(c);
}

}  // namespace

TEST_CASE("constant maps have zero nonlinearity") {
  for (int dim : {1, 2}) {
    const Grid g = Grid::make(dim, 16);
    const ManifoldSpec s3 = ManifoldSpec::sphere(3);
    Vec p(3);
    p << 0.6, 0.0, 0.8;
    const SimulationState s = constant_state(g, p);
    CHECK(rhs_projector(s3, s).max_pointwise_norm() <= 1e-14);
    CHECK(rhs_sphere(s).max_pointwise_norm() <= 1e-14);
    Vec q(3);
    q << 2.5, 0.0, 0.0;
    CHECK(rhs_projector(ManifoldSpec::torus(2, 0.5), constant_state(g, q))
              .max_pointwise_norm() <= 1e-13);
    const GridField utt = (-1.0) * bilaplacian(s.u);
    CHECK(orthogonality_residual(s3, s, utt) <= 1e-14);
  }
}

TEST_CASE("traveling wave solves the equation exactly") {
  // u = (cos(wt + kx), sin(wt + kx)): u_tt = -w^2 u, Lap^2 u = k^4 u, and the
  // nonlinearity is (k^4 - w^2) u, so u_tt + Lap^2 u - F = 0.
  for (int k : {1, 2}) {
    for (double w : {0.0, 1.0, 2.5}) {
      const SimulationState s = wave(32, k, w);
      const GridField lhs = (-w * w) * s.u + bilaplacian(s.u);
      const double scale = std::max(1.0, std::pow(k, 4));
      CHECK((lhs - rhs_projector(ManifoldSpec::sphere(2), s)).max_pointwise_norm() <=
            1e-10 * scale);
      CHECK((lhs - rhs_sphere(s)).max_pointwise_norm() <= 1e-10 * scale);
    }
  }
}

TEST_CASE("sphere multiplier on the equator wave is k^4 - w^2") {
  const SimulationState s = wave(32, 2, 1.5, 3);
  const GridField f = rhs_sphere(s);
  const double lambda = 16 - 2.25;
  CHECK(max_abs_diff(f, lambda * s.u) <= 1e-10 * lambda);
}

TEST_CASE("sphere form agrees with projector form on random tangent states") {
  const ManifoldSpec s3 = ManifoldSpec::sphere(3);
  std::mt19937_64 rng(21);
  for (int dim : {1, 2}) {
    for (int i = 0; i < 5; ++i) {
      const SimulationState s = random_tangent_state(Grid::make(dim, 64), s3, 2, 0.3, 0.3, rng);
      CHECK(max_abs_diff(rhs_sphere(s, 1.0), rhs_projector(s3, s, 1.0)) <= 1e-8);
    }
  }
}

TEST_CASE("orthogonality residual") {
  const ManifoldSpec s2 = ManifoldSpec::sphere(2);
  const SimulationState s = wave(64, 1, 1.0);
  GridField utt = rhs_projector(s2, s) - bilaplacian(s.u);
  CHECK(orthogonality_residual(s2, s, utt) <= 1e-9);

  // Projector form on smooth bump data: spectral decrease under refinement.
  for (const ManifoldSpec& m : {ManifoldSpec::sphere(3), ManifoldSpec::torus(2, 0.5)}) {
    double res[2];
    for (int i = 0; i < 2; ++i) {
      const SimulationState b = bump(2, 32 << i, m);
      const GridField a = rhs_projector(m, b) - bilaplacian(b.u);
      res[i] = orthogonality_residual(m, b, a);
    }
    CHECK(res[1] * 100 <= res[0]);
  }
}

TEST_CASE("rotation equivariance") {
  const ManifoldSpec s3 = ManifoldSpec::sphere(3);
  std::mt19937_64 rng(8);
  const SimulationState s = random_tangent_state(Grid::make(2, 32), s3, 2, 0.8, 0.8, rng);
  const Mat Q = Eigen::HouseholderQR<Mat>(Mat(Mat::Random(3, 3))).householderQ();
  const SimulationState r{rotate(s.u, Q), rotate(s.ut, Q), 0.0};
  for (RhsForm form : {RhsForm::Projector, RhsForm::Sphere}) {
    const GridField f = rhs(s3, s, form);
    CHECK(max_abs_diff(rhs(s3, r, form), rotate(f, Q)) <= 1e-10 * f.max_pointwise_norm());
  }
}

TEST_CASE("sphere form needs a sphere") {
  const SimulationState s = bump(1, 16, ManifoldSpec::torus(2, 0.5));
  CHECK_THROWS_AS(rhs(ManifoldSpec::torus(2, 0.5), s, RhsForm::Sphere), Error);
  CHECK_NOTHROW(rhs(ManifoldSpec::torus(2, 0.5), s, RhsForm::Auto));
}

TEST_CASE("tangent_enforce") {
  const ManifoldSpec s2 = ManifoldSpec::sphere(2);
  const SimulationState on = wave(16, 1, 1.0);
  const SimulationState same = tangent_enforce(s2, on);
  CHECK(max_abs_diff(same.u, on.u) <= 1e-14);
  CHECK(max_abs_diff(same.ut, on.ut) <= 1e-14);

  const Grid g = Grid::make(1, 8);
  SimulationState s;
  s.u = GridField::sample(g, 2, [](double, double) { Vec v(2); v << 1.1, 0; return v; });
  s.ut = GridField::sample(g, 2, [](double, double) { Vec v(2); v << 1, 1; return v; });
  const SimulationState e = tangent_enforce(s2, s);
  CHECK(e.u.at(3, 0) == doctest::Approx(1.0));
  CHECK(e.u.at(3, 1) == 0.0);
  CHECK(std::abs(e.ut.at(3, 0)) <= 1e-15);
  CHECK(e.ut.at(3, 1) == doctest::Approx(1.0));
  const SimulationState twice = tangent_enforce(s2, e);
  CHECK(max_abs_diff(twice.u, e.u) <= 1e-15);
  CHECK(max_abs_diff(twice.ut, e.ut) <= 1e-15);

  SimulationState far = s;
  far.u.at(5, 0) = 1.6;
  CHECK_THROWS_AS(tangent_enforce(s2, far), TubeExceeded);

  const StateHealth h = state_health(s2, e);
  CHECK(h.constraint_max <= 1e-15);
  CHECK(h.tangent_max <= 1e-15);
}
