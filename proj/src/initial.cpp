#include "bwm/initial.hpp"

#include <cmath>
#include <numbers>

#include "bwm/error.hpp"
#include "bwm/kernels.hpp"

namespace bwm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Vec from_vector(const std::vector<double>& v) {
  Vec out(int(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(int(i)) = v[i];
  return out;
}

// Largest tangent increment per retraction step, as a fraction of the tube.
constexpr double kPushFraction = 0.25;

}  // namespace

double bump_profile(const Grid& grid, double width, double x, double y) {
  const double l = grid.length;
  const double c = 0.5 * l;
  const double s = l / (kTwoPi * width);
  double e = (std::cos(kTwoPi * (x - c) / l) - 1.0) * s * s;
  if (grid.dim == 2) e += (std::cos(kTwoPi * (y - c) / l) - 1.0) * s * s;
  return std::exp(e);
}

Vec default_base(const ManifoldSpec& m) {
  Vec p = Vec::Zero(m.ambient_dim);
  if (m.kind == ManifoldKind::Sphere) {
    p(m.ambient_dim - 1) = 1.0;
  } else {
    p(0) = m.major_radius + m.minor_radius;
  }
  return p;
}

Vec default_direction(const ManifoldSpec& m, const Vec& base) {
  const Mat P = tangent_projector(m, base);
  Vec e = P.col(0);
  if (e.norm() <= 0.5) e = P.col(1);
  return e / e.norm();
}

GridField random_bandlimited_field(const Grid& grid, int ncomp, int kmax,
                                   std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  struct Term {
    int jx, jy;
    Vec a, b;
  };
  std::vector<Term> terms;
  const int ky_max = grid.dim == 2 ? kmax : 0;
  // Half-plane of wavevectors; the conjugates are covered by cos/sin pairs.
  for (int jx = 0; jx <= kmax; ++jx) {
    for (int jy = -ky_max; jy <= ky_max; ++jy) {
      if (jx == 0 && jy <= 0) continue;
      Term t{jx, jy, Vec(ncomp), Vec(ncomp)};
      for (int c = 0; c < ncomp; ++c) t.a(c) = normal(rng);
      for (int c = 0; c < ncomp; ++c) t.b(c) = normal(rng);
      terms.push_back(std::move(t));
    }
  }
  const double w = kTwoPi / grid.length;
  GridField f = GridField::sample(grid, ncomp, [&](double x, double y) {
    Vec v = Vec::Zero(ncomp);
    for (const Term& t : terms) {
      const double phase = w * (t.jx * x + t.jy * y);
      v += std::cos(phase) * t.a + std::sin(phase) * t.b;
    }
    return v;
  });
  const double peak = f.max_pointwise_norm();
  if (peak > 0.0) f *= 1.0 / peak;
  return f;
}

GridField push_onto_manifold(const ManifoldSpec& m, const Vec& base,
                             const GridField& f, double amplitude) {
  const double fmax = f.max_pointwise_norm();
  const int steps = std::max(
      1, int(std::ceil(amplitude * fmax / (kPushFraction * m.tube_radius))));
  const double h = amplitude / steps;
  GridField q(f.grid(), m.ambient_dim);
  for (std::size_t p = 0; p < q.num_points(); ++p) q.set_point(p, base);
  for (int s = 0; s < steps; ++s) {
    GridField moved = q + h * project_tangent(m, q, f);
    q = retract_field(m, moved);
  }
  return q;
}

SimulationState traveling_wave(const Grid& grid, const ManifoldSpec& m,
                               const InitialData& d, double t) {
  if (m.kind != ManifoldKind::Sphere) {
    throw ValidationError("initial", "traveling waves need a sphere target");
  }
  const int L = m.ambient_dim;
  auto theta = [&](double x, double y) { return d.omega * t + d.k * x + d.ky * y; };
  SimulationState s;
  s.u = GridField::sample(grid, L, [&](double x, double y) {
    Vec v = Vec::Zero(L);
    v(d.axis_a) = std::cos(theta(x, y));
    v(d.axis_b) = std::sin(theta(x, y));
    return v;
  });
  s.ut = GridField::sample(grid, L, [&](double x, double y) {
    Vec v = Vec::Zero(L);
    v(d.axis_a) = -d.omega * std::sin(theta(x, y));
    v(d.axis_b) = d.omega * std::cos(theta(x, y));
    return v;
  });
  s.time = t;
  return s;
}

SimulationState random_tangent_state(const Grid& grid, const ManifoldSpec& m,
                                     int kmax, double amplitude, double velocity,
                                     std::mt19937_64& rng) {
  const int L = m.ambient_dim;
  const GridField f = random_bandlimited_field(grid, L, kmax, rng);
  const GridField g = random_bandlimited_field(grid, L, kmax, rng);
  SimulationState s;
  s.u = push_onto_manifold(m, default_base(m), f, amplitude);
  s.ut = project_tangent(m, s.u, velocity * g);
  return tangent_enforce(m, s);
}

SimulationState make_initial(const RunConfig& cfg) {
  const Grid grid = cfg.grid();
  const ManifoldSpec& m = cfg.manifold;
  const InitialData& d = cfg.initial;
  const int L = m.ambient_dim;
  const Vec base =
      d.base.empty() ? default_base(m) : retract(m, from_vector(d.base));
  SimulationState s;
  switch (d.kind) {
    case InitialKind::TravelingWave:
      s = traveling_wave(grid, m, d, 0.0);
      break;
    case InitialKind::Constant:
      s.u = GridField::sample(grid, L, [&](double, double) { return base; });
      s.ut = GridField(grid, L);
      break;
    case InitialKind::Bump: {
      Vec e = d.direction.empty() ? default_direction(m, base)
                                  : from_vector(d.direction);
      const double V = d.velocity < 0.0 ? 0.0 : d.velocity;
      GridField phi = GridField::sample(grid, 1, [&](double x, double y) {
        Vec v(1);
        v(0) = bump_profile(grid, d.width, x, y);
        return v;
      });
      GridField raw(grid, L), dir(grid, L);
      for (std::size_t p = 0; p < grid.num_points(); ++p) {
        raw.set_point(p, base + d.amplitude * phi.at(p, 0) * e);
        dir.set_point(p, V * phi.at(p, 0) * e);
      }
      s.u = retract_field(m, raw);
      s.ut = project_tangent(m, s.u, dir);
      break;
    }
    case InitialKind::RandomBandlimited: {
      std::mt19937_64 rng(cfg.seed);
      const double V = d.velocity < 0.0 ? d.amplitude : d.velocity;
      s = random_tangent_state(grid, m, d.kmax, d.amplitude, V, rng);
      break;
    }
  }
  s.time = 0.0;
  return tangent_enforce(m, s);
}

}  // namespace bwm
