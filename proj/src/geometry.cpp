#include "bwm/geometry.hpp"

#include <cmath>
#include <sstream>

#include "bwm/error.hpp"

namespace bwm {

namespace {

constexpr double kOnManifoldTol = 1e-8;

struct TorusFrame {
  double rho;     // distance from the symmetry axis
  double d;       // distance from the core circle
  Vec normal;     // outward unit normal of the tube through p
};

TorusFrame torus_frame(const ManifoldSpec& m, const Vec& p) {
  TorusFrame f;
  f.rho = std::hypot(p(0), p(1));
  f.d = std::hypot(f.rho - m.major_radius, p(2));
  f.normal = Vec::Zero(3);
  if (f.rho > 0.0 && f.d > 0.0) {
    const double c = (f.rho - m.major_radius) / f.d;
    f.normal(0) = c * p(0) / f.rho;
    f.normal(1) = c * p(1) / f.rho;
    f.normal(2) = p(2) / f.d;
  }
  return f;
}

void check_dim(const ManifoldSpec& m, const Vec& p) {
  if (p.size() != m.ambient_dim) {
    throw Error("point has dimension " + std::to_string(p.size()) +
                ", manifold ambient dimension is " +
                std::to_string(m.ambient_dim));
  }
}

void require_on_manifold(const ManifoldSpec& m, const Vec& p) {
  const double r = constraint_residual(m, p);
  if (!(r <= kOnManifoldTol)) {
    throw OffManifold("constraint residual " + std::to_string(r) +
                      " exceeds 1e-8");
  }
}

Mat outer(const Vec& a, const Vec& b) { return a * b.transpose(); }

}  // namespace

ManifoldSpec ManifoldSpec::sphere(int ambient_dim) {
  return sphere(ambient_dim, 0.5);
}

ManifoldSpec ManifoldSpec::sphere(int ambient_dim, double tube_radius) {
  if (ambient_dim < 2 || ambient_dim > kMaxAmbient) {
    throw Error("sphere ambient dimension must be in [2, " +
                std::to_string(kMaxAmbient) + "]");
  }
  if (!(tube_radius > 0.0 && tube_radius < 1.0)) {
    throw Error("sphere tube radius must lie in (0, 1)");
  }
  ManifoldSpec m;
  m.kind = ManifoldKind::Sphere;
  m.ambient_dim = ambient_dim;
  m.tube_radius = tube_radius;
  return m;
}

ManifoldSpec ManifoldSpec::torus(double major_radius, double minor_radius) {
  return torus(major_radius, minor_radius, 0.4 * minor_radius);
}

ManifoldSpec ManifoldSpec::torus(double major_radius, double minor_radius,
                                 double tube_radius) {
  if (!(minor_radius > 0.0 && major_radius > minor_radius)) {
    throw Error("torus radii must satisfy 0 < r_minor < R_major");
  }
  if (!(tube_radius > 0.0 && tube_radius < minor_radius)) {
    throw Error("torus tube radius must lie in (0, r_minor)");
  }
  ManifoldSpec m;
  m.kind = ManifoldKind::Torus;
  m.ambient_dim = 3;
  m.major_radius = major_radius;
  m.minor_radius = minor_radius;
  m.tube_radius = tube_radius;
  return m;
}

int ManifoldSpec::manifold_dim() const {
  return kind == ManifoldKind::Sphere ? ambient_dim - 1 : 2;
}

std::string ManifoldSpec::describe() const {
  std::ostringstream os;
  if (kind == ManifoldKind::Sphere) {
    os << "sphere:" << ambient_dim;
  } else {
    os << "torus:" << major_radius << "," << minor_radius;
  }
  return os.str();
}

Mat ProjectorJet::dP_along(const Vec& w) const {
  const auto L = P.rows();
  Mat out = Mat::Zero(L, L);
  for (Eigen::Index k = 0; k < L; ++k) out += w(k) * dP[k];
  return out;
}

Mat ProjectorJet::d2P_along(const Vec& w, const Vec& v) const {
  const auto L = P.rows();
  Mat out = Mat::Zero(L, L);
  for (Eigen::Index k = 0; k < L; ++k) {
    for (Eigen::Index l = 0; l < L; ++l) out += w(k) * v(l) * d2P[k][l];
  }
  return out;
}

double constraint_residual(const ManifoldSpec& m, const Vec& p) {
  check_dim(m, p);
  if (m.kind == ManifoldKind::Sphere) return std::abs(p.norm() - 1.0);
  const TorusFrame f = torus_frame(m, p);
  return std::abs(f.d - m.minor_radius);
}

Vec retract(const ManifoldSpec& m, const Vec& p) {
  const double dist = constraint_residual(m, p);
  if (!(dist < m.tube_radius)) throw TubeExceeded(dist, m.tube_radius);
  if (m.kind == ManifoldKind::Sphere) return p / p.norm();
  const TorusFrame f = torus_frame(m, p);
  const double s = m.minor_radius / f.d;
  const double q_rho = m.major_radius + s * (f.rho - m.major_radius);
  Vec q(3);
  q << q_rho * p(0) / f.rho, q_rho * p(1) / f.rho, s * p(2);
  return q;
}

std::array<Vec, kMaxAmbient> normal_basis(const ManifoldSpec& m, const Vec& p,
                                          int* count) {
  std::array<Vec, kMaxAmbient> out;
  if (m.kind == ManifoldKind::Sphere) {
    out[0] = p / p.norm();
  } else {
    out[0] = torus_frame(m, p).normal;
  }
  *count = 1;
  return out;
}

Mat extended_projector(const ManifoldSpec& m, const Vec& p) {
  const auto L = m.ambient_dim;
  Mat P = Mat::Identity(L, L);
  if (m.kind == ManifoldKind::Sphere) {
    P -= outer(p, p) / p.squaredNorm();
  } else {
    const Vec n = torus_frame(m, p).normal;
    P -= outer(n, n);
  }
  return P;
}

Mat tangent_projector(const ManifoldSpec& m, const Vec& p) {
  require_on_manifold(m, p);
  return extended_projector(m, p);
}

ProjectorJet fd_projector_jet(const ManifoldSpec& m, const Vec& p, int order,
                              double h1, double h2) {
  require_on_manifold(m, p);
  const auto L = m.ambient_dim;
  ProjectorJet jet;
  jet.order = order;
  jet.P = extended_projector(m, p);
  const auto P_at = [&](const Vec& x) { return extended_projector(m, x); };
  const auto e = [&](Eigen::Index k) {
    Vec v = Vec::Zero(L);
    v(k) = 1.0;
    return v;
  };
  if (order >= 1) {
    for (Eigen::Index k = 0; k < L; ++k) {
      jet.dP[k] = (P_at(p + h1 * e(k)) - P_at(p - h1 * e(k))) / (2.0 * h1);
    }
  }
  if (order >= 2) {
    for (Eigen::Index k = 0; k < L; ++k) {
      for (Eigen::Index l = 0; l < L; ++l) {
        const Vec a = h2 * e(k);
        const Vec b = h2 * e(l);
        jet.d2P[k][l] = (P_at(p + a + b) - P_at(p + a - b) - P_at(p - a + b) +
                         P_at(p - a - b)) /
                        (4.0 * h2 * h2);
      }
    }
  }
  return jet;
}

ProjectorJet projector_jet(const ManifoldSpec& m, const Vec& p_in, int order) {
  if (m.kind != ManifoldKind::Sphere) return fd_projector_jet(m, p_in, order);
  require_on_manifold(m, p_in);
  const auto L = m.ambient_dim;
  const Vec p = p_in / p_in.norm();
  const Mat ppT = outer(p, p);
  ProjectorJet jet;
  jet.order = order;
  jet.P = Mat::Identity(L, L) - ppT;
  // P(x) = I - x x^T / |x|^2, differentiated at |p| = 1:
  //   dP(w)    = -(w p^T + p w^T) + 2 <p,w> p p^T
  //   d2P(w,v) = -(w v^T + v w^T) + 2 <p,w> (v p^T + p v^T)
  //              + 2 <p,v> (w p^T + p w^T) + (2 <v,w> - 8 <p,w><p,v>) p p^T
  if (order >= 1) {
    for (Eigen::Index k = 0; k < L; ++k) {
      Vec w = Vec::Zero(L);
      w(k) = 1.0;
      jet.dP[k] = -(outer(w, p) + outer(p, w)) + 2.0 * p(k) * ppT;
    }
  }
  if (order >= 2) {
    for (Eigen::Index k = 0; k < L; ++k) {
      for (Eigen::Index l = 0; l < L; ++l) {
        Vec w = Vec::Zero(L);
        Vec v = Vec::Zero(L);
        w(k) = 1.0;
        v(l) = 1.0;
        const double vw = (k == l) ? 1.0 : 0.0;
        jet.d2P[k][l] = -(outer(w, v) + outer(v, w)) +
                        2.0 * p(k) * (outer(v, p) + outer(p, v)) +
                        2.0 * p(l) * (outer(w, p) + outer(p, w)) +
                        (2.0 * vw - 8.0 * p(k) * p(l)) * ppT;
      }
    }
  }
  return jet;
}

}  // namespace bwm
