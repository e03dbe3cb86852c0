#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bwm/diagnostics.hpp"
#include "bwm/error.hpp"
#include "bwm/initial.hpp"

using namespace bwm;

namespace {

constexpr double kPi = std::numbers::pi;
const ManifoldSpec kS2 = ManifoldSpec::sphere(2);
const ManifoldSpec kS3 = ManifoldSpec::sphere(3);

SimulationState wave(int dim, int M, int k, double omega, double length = 2 * kPi) {
  InitialData d;
  d.k = k;
  d.omega = omega;
  return traveling_wave(Grid::make(dim, M, length), kS2, d, 0.0);
}

// u = sin(k x) e_0 (not on a manifold; the inequalities concern functions).
SimulationState pure_mode(int k, int M, double length) {
  const Grid g = Grid::make(1, M, length);
  SimulationState s;
  s.u = GridField::sample(g, 2, [&](double x, double) { Vec v(2); v << std::sin(k * x), 0; return v; });
  s.ut = s.u;
  return s;
}

SimulationState random_state(int dim, int M, double amp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_tangent_state(Grid::make(dim, M), kS3, 3, amp, amp, rng);
}

std::vector<DiagnosticsRecord> history_of(const std::vector<std::pair<double, double>>& tE) {
  std::vector<DiagnosticsRecord> h;
  for (auto [t, e] : tE) {
    DiagnosticsRecord r;
    r.time = t;
    r.cal_E = e;
    h.push_back(r);
  }
  return h;
}

}  // namespace

TEST_CASE("energy examples") {
  const Grid g = Grid::make(1, 16);
  SimulationState c{GridField::sample(g, 2, [](double, double) { Vec v(2); v << 1, 0; return v; }),
                    GridField(g, 2), 0.0};
  CHECK(energy(c) == 0.0);
  CHECK(energy(wave(1, 32, 1, 0.0)) == doctest::Approx(kPi).epsilon(1e-13));
  CHECK(energy(wave(1, 32, 1, 1.0)) == doctest::Approx(2 * kPi).epsilon(1e-13));
}

TEST_CASE("gradient growth bound") {
  // |d/dt ||grad u||^2| = 2|<Lap u, u_t>| <= ||Lap u||^2 + ||u_t||^2 = 2E.
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const SimulationState s = random_state(2, 32, 1.0, seed);
    CHECK(std::abs(grad_growth_rate(s)) <= 2 * energy(s));
  }
  CHECK(grad_l2_squared(wave(1, 32, 1, 1.0)) == doctest::Approx(2 * kPi));
}

TEST_CASE("scaling energy check") {
  const SimulationState s = wave(1, 32, 1, 0.0);
  const ScalingReport one = scaling_energy_check(s, 1);
  CHECK(one.measured_ratio == 1.0);
  const ScalingReport two = scaling_energy_check(s, 2);
  CHECK(two.measured_ratio == doctest::Approx(16.0).epsilon(1e-12));
  CHECK(two.predicted_fixed_box == 16.0);
  CHECK(two.predicted_whole_space == 8.0);
  CHECK(two.measure_adjusted_ratio == doctest::Approx(8.0).epsilon(1e-12));

  // Exact only when the spectrum sits below M / (2 lambda); resampling would
  // alias anything above.
  std::mt19937_64 rng(9);
  const Grid g2 = Grid::make(2, 32);
  const SimulationState r{random_bandlimited_field(g2, 3, 3, rng),
                          random_bandlimited_field(g2, 3, 3, rng), 0.0};
  const ScalingReport rr = scaling_energy_check(r, 2);
  CHECK(std::abs(rr.measured_ratio / rr.predicted_fixed_box - 1) <= 1e-10);
  CHECK(rr.predicted_whole_space == 4.0);

  // Resampling is exact on the grid: the scaled wave is the k = 2 wave.
  const SimulationState scaled = rescale_state(wave(1, 32, 1, 1.0), 2);
  const SimulationState direct = wave(1, 32, 2, 4.0);
  CHECK(max_abs_diff(scaled.u, direct.u) <= 1e-14);
  CHECK(max_abs_diff(scaled.ut, direct.ut) <= 1e-13);
}

TEST_CASE("interpolation ratios") {
  const Grid g = Grid::make(2, 16);
  Vec p(3);
  p << 0, 0, 1;
  SimulationState c{GridField::sample(g, 3, [&](double, double) { return p; }), GridField(g, 3), 0.0};
  const GnReport rc = gn_check(c);
  CHECK(rc.degenerate);
  for (const auto& [name, v] : rc.ratios) CHECK(v == 0.0);
  CHECK(rc.ratios.size() == gn_names(2).size());

  // Pure modes under dilation (box 2 pi / k): ratio 1/sqrt(pi) for every k.
  for (int k : {1, 2, 3, 5}) {
    const GnReport r = gn_check(pure_mode(k, 32, 2 * kPi / k));
    CHECK(std::abs(r.get("grad_sup") - 1 / std::sqrt(kPi)) <= 1e-10);
    const GnReport r1 = gn_check(pure_mode(1, 32, 2 * kPi));
    for (std::size_t i = 0; i < r.ratios.size(); ++i) {
      CHECK(std::abs(r.ratios[i].second - r1.ratios[i].second) <= 1e-10);
    }
  }
  CHECK_THROWS_AS(GnReport{}.get("nope"), Error);

  // Refinement stability for resolved random data.
  for (int dim : {1, 2}) {
    std::mt19937_64 a(3), b(3);
    const SimulationState lo = random_tangent_state(Grid::make(dim, 32), kS3, 2, 0.3, 0.3, a);
    const SimulationState hi = random_tangent_state(Grid::make(dim, 64), kS3, 2, 0.3, 0.3, b);
    const GnReport rl = gn_check(lo), rh = gn_check(hi);
    for (std::size_t i = 0; i < rl.ratios.size(); ++i) {
      CHECK(std::abs(rl.ratios[i].second / rh.ratios[i].second - 1) <= 0.01);
    }
  }
}

TEST_CASE("BGW ratio") {
  const Grid g = Grid::make(2, 16);
  Vec p(3);
  p << 0, 0, 1;
  SimulationState c{GridField::sample(g, 3, [&](double, double) { return p; }), GridField(g, 3), 0.0};
  CHECK_THROWS_AS(bgw_check(c), Degenerate);
  CHECK_THROWS_AS(bgw_check(wave(1, 16, 1, 1.0)), Error);

  double prev = 0;
  for (int M : {16, 32}) {
    const Grid gm = Grid::make(2, M);
    SimulationState s;
    s.u = GridField::sample(gm, 3, [](double x, double y) { Vec v(3); v << std::sin(x) * std::sin(y), 0, 0; return v; });
    s.ut = GridField(gm, 3);
    const double r = bgw_check(s);
    CHECK(r > 0);
    if (prev > 0) CHECK(std::abs(r / prev - 1) <= 0.01);
    prev = r;
  }
}

TEST_CASE("Gronwall envelope") {
  auto flat = history_of({{0, 5}, {1, 5}, {2, 5}});
  for (int dim : {1, 2}) {
    const GronwallResult r = gronwall_envelope(flat, 0.1, dim);
    CHECK_FALSE(r.any_violation);
    CHECK(gronwall_required_constant(flat, dim) == 0.0);
  }
  // cal_E^2 = exp(exp(2 C t)) outruns exp(C t) log(e + cal_E^2(0)).
  const double C = 0.5;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i <= 20; ++i) {
    const double t = 0.25 * i;
    pts.push_back({t, std::sqrt(std::exp(std::exp(2 * C * t)))});
  }
  const GronwallResult bad = gronwall_envelope(history_of(pts), C, 2);
  CHECK(bad.any_violation);
  CHECK_FALSE(bad.violated.front());
  CHECK(bad.violated.back());

  // The required constant is tight.
  auto grow = history_of({{0, 1}, {1, 3}, {2, 4}});
  const double need = gronwall_required_constant(grow, 1);
  CHECK(need == doctest::Approx(std::log(2.0)));
  CHECK_FALSE(gronwall_envelope(grow, need * (1 + 1e-9), 1).any_violation);
  CHECK(gronwall_envelope(grow, need * 0.99, 1).any_violation);
  CHECK(gronwall_envelope({}, 1.0, 1).envelope.empty());
}

TEST_CASE("uniqueness energy") {
  const SimulationState a = random_state(1, 32, 0.5, 2);
  CHECK(uniqueness_energy(a, a) == 0.0);
  CHECK_THROWS_AS(uniqueness_energy(a, random_state(1, 16, 0.5, 2)), GridMismatch);

  GridField bumpdir = GridField::sample(a.u.grid(), 3, [&](double x, double y) {
    return Vec(bump_profile(a.u.grid(), 0.5, x, y) * Vec::Ones(3));
  });
  bumpdir = project_tangent(kS3, a.u, bumpdir);
  auto at = [&](double delta) {
    SimulationState b = a;
    b.u = retract_field(kS3, a.u + delta * bumpdir);
    return uniqueness_energy(a, b);
  };
  CHECK(at(1e-3) / at(5e-4) == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("recorder") {
  const SimulationState s = wave(1, 32, 1, 1.0);
  DiagnosticsRecorder rec(kS2, SchemeConfig{}, 1.0);
  const DiagnosticsRecord& r = rec.record(s);
  CHECK(r.energy_rel_drift == 0.0);
  CHECK(r.energy == doctest::Approx(2 * kPi));
  CHECK(r.constraint_max <= 1e-15);
  CHECK(r.ortho_residual <= 1e-9);
  CHECK(r.gn.ratios.size() == 3);
  CHECK(r.bgw_ratio == 0.0);
  CHECK_FALSE(r.gronwall_violated);
  SimulationState later = s;
  later.time = 1.0;
  const DiagnosticsRecord& r2 = rec.record(later);
  CHECK(r2.gronwall_envelope == doctest::Approx(std::exp(1.0) * (1 + r.cal_E)));
  CHECK(rec.history().size() == 2);
}
