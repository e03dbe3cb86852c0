#include "bwm/invariants.hpp"

#include <Eigen/QR>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "bwm/diagnostics.hpp"
#include "bwm/initial.hpp"
#include "bwm/integrator.hpp"

namespace bwm {

namespace {

using Rng = std::mt19937_64;

Vec random_vec(Rng& rng, int L) {
  std::normal_distribution<double> nd;
  Vec v(L);
  for (int i = 0; i < L; ++i) v(i) = nd(rng);
  return v;
}

Vec random_point(const ManifoldSpec& m, Rng& rng) {
  if (m.kind == ManifoldKind::Sphere) {
    const Vec v = random_vec(rng, m.ambient_dim);
    return v / v.norm();
  }
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
  const double a = ang(rng), b = ang(rng);
  const double rho = m.major_radius + m.minor_radius * std::cos(b);
  Vec p(3);
  p << rho * std::cos(a), rho * std::sin(a), m.minor_radius * std::sin(b);
  return p;
}

std::vector<ManifoldSpec> manifolds() {
  return {ManifoldSpec::sphere(2), ManifoldSpec::sphere(3), ManifoldSpec::sphere(4),
          ManifoldSpec::torus(2.0, 0.5)};
}

double rel(double err, double scale) { return err / std::max(1.0, scale); }

// Random trigonometric polynomial with modes |j| < M/2 together with its
// exact x-derivative, Laplacian and Laplacian-gradient.
struct TrigPoly {
  GridField f, fx, lap;
};

TrigPoly trig_poly(const Grid& g, Rng& rng, int kmax) {
  std::normal_distribution<double> nd;
  struct Term {
    int jx, jy;
    double a, b;
  };
  std::vector<Term> terms;
  const int ky = g.dim == 2 ? kmax : 0;
  for (int jx = 0; jx <= kmax; ++jx) {
    for (int jy = -ky; jy <= ky; ++jy) terms.push_back({jx, jy, nd(rng), nd(rng)});
  }
  const double w = 2.0 * std::numbers::pi / g.length;
  auto eval = [&](int which) {
    return GridField::sample(g, 1, [&, which](double x, double y) {
      double s = 0.0;
      for (const auto& t : terms) {
        const double kx = w * t.jx, kyy = w * t.jy;
        const double ph = kx * x + kyy * y;
        const double c = std::cos(ph), sn = std::sin(ph);
        if (which == 0) s += t.a * c + t.b * sn;
        if (which == 1) s += kx * (-t.a * sn + t.b * c);
        if (which == 2) s += -(kx * kx + kyy * kyy) * (t.a * c + t.b * sn);
      }
      Vec v(1);
      v(0) = s;
      return v;
    });
  };
  return {eval(0), eval(1), eval(2)};
}

GridField rotate(const GridField& f, const Mat& Q) {
  GridField out(f.grid(), f.ncomp());
  for (std::size_t p = 0; p < f.num_points(); ++p) out.set_point(p, Q * f.point(p));
  return out;
}

}  // namespace

std::vector<InvariantResult> run_invariants(std::uint64_t seed) {
  std::vector<InvariantResult> out;
  const auto add = [&](std::string name, double measured, double threshold) {
    out.push_back({std::move(name), measured, threshold, measured <= threshold});
  };
  Rng rng(seed);

  // geometry
  for (const auto& m : manifolds()) {
    double idem = 0, sym = 0, ann = 0, trace = 0, ret = 0, onN = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec p = random_point(m, rng);
      const Mat P = tangent_projector(m, p);
      idem = std::max(idem, (P * P - P).cwiseAbs().maxCoeff());
      sym = std::max(sym, (P - P.transpose()).cwiseAbs().maxCoeff());
      trace = std::max(trace, std::abs(P.trace() - m.manifold_dim()));
      const Vec v = P * random_vec(rng, m.ambient_dim);
      ann = std::max(ann, (v - P * v).norm());
      const Vec q = p + 0.5 * m.tube_radius * random_vec(rng, m.ambient_dim).normalized();
      const Vec r = retract(m, q);
      onN = std::max(onN, constraint_residual(m, r));
      ret = std::max(ret, (retract(m, r) - r).norm());
    }
    const std::string tag = " [" + m.describe() + "]";
    add("projector idempotent" + tag, idem, 1e-10);
    add("projector symmetric" + tag, sym, 1e-12);
    add("projector trace = dim N" + tag, trace, 1e-10);
    add("tangent vectors fixed by P" + tag, ann, 1e-10);
    add("retraction lands on N" + tag, onN, 1e-12);
    add("retraction idempotent" + tag, ret, 1e-12);
  }
  for (int L : {2, 3, 4}) {
    const ManifoldSpec m = ManifoldSpec::sphere(L);
    double worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const Vec p = random_point(m, rng);
      const ProjectorJet a = projector_jet(m, p, 1);
      const ProjectorJet b = fd_projector_jet(m, p, 1);
      const Vec w = tangent_projector(m, p) * random_vec(rng, L);
      worst = std::max(worst, (a.dP_along(w) - b.dP_along(w)).cwiseAbs().maxCoeff() /
                                  std::max(1.0, w.norm()));
    }
    add("closed-form dP matches differences [" + m.describe() + "]", worst, 1e-7);
  }

  // grid
  for (int dim : {1, 2}) {
    const Grid g = Grid::make(dim, 16);
    double exact = 0, parseval = 0, commute = 0, bilap = 0, mono = 0;
    for (int i = 0; i < 20; ++i) {
      const TrigPoly tp = trig_poly(g, rng, 7);
      const GridField grad = gradient(tp.f);
      GridField dx(g, 1);
      for (std::size_t p = 0; p < g.num_points(); ++p) dx.at(p, 0) = grad.at(p, 0);
      exact = std::max(exact, rel(max_abs_diff(dx, tp.fx), tp.fx.max_pointwise_norm()));
      exact = std::max(exact, rel(max_abs_diff(laplacian(tp.f), tp.lap),
                                  tp.lap.max_pointwise_norm()));
      const double l2n = lebesgue_norm(tp.f, LebesgueExponent::Two);
      parseval = std::max(parseval, std::abs(sobolev_norm(tp.f, 0) - l2n) / l2n);
      const GridField a = laplacian(gradient(tp.f));
      const GridField b = gradient(laplacian(tp.f));
      commute = std::max(commute, rel(max_abs_diff(a, b), a.max_pointwise_norm()));
      const GridField bl = bilaplacian(tp.f);
      bilap = std::max(bilap, rel(max_abs_diff(bl, laplacian(laplacian(tp.f))),
                                  bl.max_pointwise_norm()));
      for (int s = 0; s < 4; ++s) {
        mono = std::max(mono, sobolev_norm(tp.f, s) - sobolev_norm(tp.f, s + 1));
      }
    }
    const std::string tag = " [n=" + std::to_string(dim) + "]";
    add("spectral derivatives exact on trig polynomials" + tag, exact, 1e-12);
    add("Parseval" + tag, parseval, 1e-12);
    add("laplacian commutes with gradient" + tag, commute, 1e-10);
    add("bilaplacian = laplacian^2" + tag, bilap, 1e-10);
    add("Sobolev norms increase with s" + tag, std::max(mono, 0.0), 0.0);
  }

  // dynamics
  const ManifoldSpec s3 = ManifoldSpec::sphere(3);
  {
    const Grid g = Grid::make(1, 32);
    InitialData d;
    const SimulationState s = traveling_wave(g, ManifoldSpec::sphere(2), d, 0.0);
    // d = (k, omega) = (1, 1): exact acceleration is -omega^2 u.
    GridField utt = (-1.0) * s.u;
    const GridField res =
        utt + bilaplacian(s.u) - rhs_projector(ManifoldSpec::sphere(2), s);
    add("traveling wave solves the equation (projector form)", res.max_pointwise_norm(), 1e-10);
  }
  for (int dim : {1, 2}) {
    const Grid g = Grid::make(dim, 64);
    double agree = 0, normal = 0, equi = 0;
    for (int i = 0; i < 5; ++i) {
      const SimulationState s = random_tangent_state(g, s3, 2, 0.3, 0.3, rng);
      const GridField fp = rhs_projector(s3, s, 1.0);
      agree = std::max(agree, max_abs_diff(rhs_sphere(s, 1.0), fp));
      // Dealiasing truncates the normal field; keep the data's tail below the cut.
      const SimulationState smooth = random_tangent_state(g, s3, 2, 0.2, 0.2, rng);
      normal = std::max(normal, max_tangent_part(s3, smooth.u, rhs_projector(s3, smooth)));
      const Mat Q = Eigen::HouseholderQR<Mat>(Mat(Mat::Random(3, 3))).householderQ();
      const SimulationState r{rotate(s.u, Q), rotate(s.ut, Q), 0.0};
      equi = std::max(equi, rel(max_abs_diff(rhs_projector(s3, r, 1.0), rotate(fp, Q)),
                                fp.max_pointwise_norm()));
    }
    const std::string tag = " [n=" + std::to_string(dim) + "]";
    add("sphere form agrees with projector form" + tag, agree, 1e-8);
    add("nonlinearity is normal" + tag, normal, 1e-8);
    add("rotation equivariance" + tag, equi, 1e-10);
  }

  // integrator
  {
    const Grid g = Grid::make(1, 32);
    const SimulationState s = random_tangent_state(g, s3, 2, 0.3, 0.3, rng);
    SchemeConfig c;
    c.dt = 1e-3;
    c.reproject_every = 0;
    SimulationState fwd = s;
    for (int i = 0; i < 10; ++i) fwd = step(s3, fwd, c, i);
    SimulationState back = fwd;
    for (int i = 0; i < 10; ++i) back = step(s3, back, c, i, -c.dt);
    add("Strang step is time-reversible (per step)",
        std::max(max_abs_diff(back.u, s.u), max_abs_diff(back.ut, s.ut)) / 10.0, 1e-11);
    const double e0 = energy(s);
    double drift = 0;
    for (double tau : {0.01, 0.3, 2.0}) {
      drift = std::max(drift, std::abs(energy(free_propagator(s, tau)) - e0) / e0);
    }
    add("free propagator conserves energy", drift, 1e-12);
    c.reproject_every = 1;
    SimulationState p = s;
    double con = 0;
    for (int i = 0; i < 50; ++i) {
      p = step(s3, p, c, i);
      con = std::max(con, state_health(s3, p).constraint_max);
    }
    add("constraint held by reprojection", con, 1e-10);
  }

  // diagnostics
  for (int dim : {1, 2}) {
    const Grid g = Grid::make(dim, 32);
    const SimulationState s = random_tangent_state(g, s3, 3, 0.8, 0.8, rng);
    const Mat Q = Eigen::HouseholderQR<Mat>(Mat(Mat::Random(3, 3))).householderQ();
    const SimulationState r{rotate(s.u, Q), rotate(s.ut, Q), 0.0};
    const GnReport a = gn_check(s), b = gn_check(r);
    double worst = 0;
    for (std::size_t i = 0; i < a.ratios.size(); ++i) {
      worst = std::max(worst, std::abs(a.ratios[i].second - b.ratios[i].second));
    }
    add("interpolation ratios rotation invariant [n=" + std::to_string(dim) + "]", worst,
        1e-10);
  }
  return out;
}

void print_invariants(std::ostream& os, const std::vector<InvariantResult>& rows) {
  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  char buf[64];
  for (const auto& r : rows) {
    os << (r.passed ? "PASS  " : "FAIL  ") << r.name
       << std::string(width - r.name.size() + 2, ' ');
    std::snprintf(buf, sizeof buf, "%.3e <= %.1e", r.measured, r.threshold);
    os << buf << '\n';
  }
}

}  // namespace bwm
