#include "bwm/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "bwm/error.hpp"

namespace bwm {

namespace {

Vec field_point(const GridField& f, std::size_t p, int offset, int L) {
  Vec v(L);
  for (int c = 0; c < L; ++c) v(c) = f.at(p, offset + c);
  return v;
}

void store_point(GridField& f, std::size_t p, int offset, const Vec& v) {
  for (Eigen::Index c = 0; c < v.size(); ++c) f.at(p, offset + int(c)) = v(c);
}

Mat stored_dP_along(const std::vector<double>& dP, std::size_t p, const Vec& w) {
  const auto L = w.size();
  Mat out = Mat::Zero(L, L);
  const double* base = dP.data() + p * L * L * L;
  for (Eigen::Index k = 0; k < L; ++k) {
    for (Eigen::Index i = 0; i < L; ++i) {
      for (Eigen::Index j = 0; j < L; ++j) {
        out(i, j) += w(k) * base[(k * L + i) * L + j];
      }
    }
  }
  return out;
}

template <class Rate>
Vec rk4_point(const Vec& v0, double h, Rate&& rate) {
  const Vec k1 = rate(v0);
  const Vec k2 = rate(v0 + 0.5 * h * k1);
  const Vec k3 = rate(v0 + 0.5 * h * k2);
  const Vec k4 = rate(v0 + h * k3);
  return v0 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

double max_over_points(Exec exec, std::size_t n,
                       const std::function<double(std::size_t)>& f) {
  std::vector<double> vals(n);
  for_points(exec, n, [&](std::size_t p) { vals[p] = f(p); });
  double m = 0.0;
  for (double v : vals) m = std::max(m, v);
  return m;
}

}  // namespace

void configure_threads_from_env() {
  if (const char* s = std::getenv("BWM_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) omp_set_num_threads(n);
  }
}

GridField retract_field(const ManifoldSpec& m, const GridField& u, Exec exec) {
  u.require_finite("retract_field");
  GridField out(u.grid(), u.ncomp());
  for_points(exec, u.num_points(),
             [&](std::size_t p) { out.set_point(p, retract(m, u.point(p))); });
  return out;
}

GridField project_tangent(const ManifoldSpec& m, const GridField& u,
                          const GridField& v, Exec exec) {
  GridField out(v.grid(), v.ncomp());
  for_points(exec, u.num_points(), [&](std::size_t p) {
    out.set_point(p, tangent_projector(m, u.point(p)) * v.point(p));
  });
  return out;
}

double max_constraint_residual(const ManifoldSpec& m, const GridField& u,
                               Exec exec) {
  return max_over_points(exec, u.num_points(), [&](std::size_t p) {
    return constraint_residual(m, u.point(p));
  });
}

double max_normal_part(const ManifoldSpec& m, const GridField& u,
                       const GridField& v, Exec exec) {
  return max_over_points(exec, u.num_points(), [&](std::size_t p) {
    const Mat P = extended_projector(m, retract(m, u.point(p)));
    const Vec w = v.point(p);
    return (w - P * w).norm();
  });
}

double max_tangent_part(const ManifoldSpec& m, const GridField& u,
                        const GridField& v, Exec exec) {
  return max_over_points(exec, u.num_points(), [&](std::size_t p) {
    const Mat P = extended_projector(m, retract(m, u.point(p)));
    return (P * v.point(p)).norm();
  });
}

ProjectorProducts projector_products(const ManifoldSpec& m, const GridField& u,
                                     const GridField& grad, const GridField& lap,
                                     Exec exec) {
  const Grid& g = u.grid();
  const int n = g.dim;
  const int L = u.ncomp();
  ProjectorProducts out{GridField(g, L), GridField(g, n * L), GridField(g, L),
                        std::vector<double>(u.num_points() * L * L * L)};
  for_points(exec, u.num_points(), [&](std::size_t p) {
    const Vec q = retract(m, u.point(p));
    const ProjectorJet jet = projector_jet(m, q, 2);
    const Vec lapv = field_point(lap, p, 0, L);
    Vec trace = Vec::Zero(L);
    Mat lapP = jet.dP_along(lapv);
    for (int i = 0; i < n; ++i) {
      const Vec gi = field_point(grad, p, i * L, L);
      const Mat dPi = jet.dP_along(gi);
      trace += dPi * gi;
      store_point(out.flux_term, p, i * L, dPi * lapv);
      lapP += jet.d2P_along(gi, gi);
    }
    store_point(out.trace_term, p, 0, trace);
    store_point(out.curvature, p, 0, lapP * lapv);
    double* base = out.dP.data() + p * L * L * L;
    for (int k = 0; k < L; ++k) {
      for (int i = 0; i < L; ++i) {
        for (int j = 0; j < L; ++j) base[(k * L + i) * L + j] = jet.dP[k](i, j);
      }
    }
  });
  return out;
}

GridField velocity_quadratic(const std::vector<double>& dP, const GridField& v,
                             Exec exec) {
  GridField out(v.grid(), v.ncomp());
  for_points(exec, v.num_points(), [&](std::size_t p) {
    const Vec w = v.point(p);
    out.set_point(p, stored_dP_along(dP, p, w) * w);
  });
  return out;
}

SphereProducts sphere_products(const GridField& grad, const GridField& lap,
                               Exec exec) {
  const Grid& g = lap.grid();
  const int n = g.dim;
  const int L = lap.ncomp();
  SphereProducts out{GridField(g, 1), GridField(g, n), GridField(g, 1)};
  for_points(exec, lap.num_points(), [&](std::size_t p) {
    double gsq = 0.0;
    double lsq = 0.0;
    for (int c = 0; c < L; ++c) lsq += lap.at(p, c) * lap.at(p, c);
    for (int i = 0; i < n; ++i) {
      double fl = 0.0;
      for (int c = 0; c < L; ++c) {
        const double gi = grad.at(p, i * L + c);
        gsq += gi * gi;
        fl += lap.at(p, c) * gi;
      }
      out.flux.at(p, i) = fl;
    }
    out.grad_sq.at(p, 0) = gsq;
    out.lap_sq.at(p, 0) = lsq;
  });
  return out;
}

GridField kick_projector(const std::vector<double>& dP, const GridField& v,
                         const GridField& g, double h, Exec exec) {
  GridField out(v.grid(), v.ncomp());
  for_points(exec, v.num_points(), [&](std::size_t p) {
    const Vec gp = g.point(p);
    const auto rate = [&](const Vec& w) -> Vec {
      return stored_dP_along(dP, p, w) * w + gp;
    };
    out.set_point(p, rk4_point(v.point(p), h, rate));
  });
  return out;
}

GridField kick_sphere(const GridField& u, const GridField& v, const GridField& g,
                      double h, Exec exec) {
  GridField out(v.grid(), v.ncomp());
  for_points(exec, v.num_points(), [&](std::size_t p) {
    const Vec up = u.point(p);
    const Vec gp = g.point(p);
    const auto rate = [&](const Vec& w) -> Vec {
      return -w.squaredNorm() * up + gp;
    };
    out.set_point(p, rk4_point(v.point(p), h, rate));
  });
  return out;
}

}  // namespace bwm
