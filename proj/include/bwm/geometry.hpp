#pragma once

// Embedded-manifold calculus for targets N in R^L: nearest-point retraction,
// tangent projectors and their derivatives.
//
// Derivatives of the projector family are those of the extension P(Pi(p)),
// i.e. the projector is constant along normal lines near N. On N, and for
// tangent directions, this agrees with the intrinsic derivative of p -> P_p.

#include <Eigen/Core>
#include <array>
#include <string>

namespace bwm {

inline constexpr int kMaxAmbient = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxAmbient, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxAmbient,
                          kMaxAmbient>;

enum class ManifoldKind { Sphere, Torus };

struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::Sphere;
  int ambient_dim = 3;
  double major_radius = 0.0;  // torus only
  double minor_radius = 0.0;  // torus only
  double tube_radius = 0.5;

  // Unit sphere S^{L-1} in R^L.
  static ManifoldSpec sphere(int ambient_dim);
  static ManifoldSpec sphere(int ambient_dim, double tube_radius);
  // Torus of revolution around the z axis in R^3.
  static ManifoldSpec torus(double major_radius, double minor_radius);
  static ManifoldSpec torus(double major_radius, double minor_radius,
                            double tube_radius);

  int manifold_dim() const;
  std::string describe() const;

  bool operator==(const ManifoldSpec&) const = default;
};

// P, dP[k] = dP(e_k), d2P[k][l] = d2P(e_k, e_l). The directional derivative
// dP(w) = sum_k w_k dP[k] is linear in w.
struct ProjectorJet {
  int order = 0;
  Mat P;
  std::array<Mat, kMaxAmbient> dP;
  std::array<std::array<Mat, kMaxAmbient>, kMaxAmbient> d2P;

  Mat dP_along(const Vec& w) const;
  Mat d2P_along(const Vec& w, const Vec& v) const;
};

double constraint_residual(const ManifoldSpec& m, const Vec& p);

// Nearest point on N. Throws TubeExceeded if dist(p, N) >= tube_radius.
Vec retract(const ManifoldSpec& m, const Vec& p);

// Throws OffManifold if constraint_residual(p) > 1e-8.
Mat tangent_projector(const ManifoldSpec& m, const Vec& p);

// Closed form on the sphere; central finite differences of P(Pi(.)) elsewhere.
ProjectorJet projector_jet(const ManifoldSpec& m, const Vec& p, int order);

// Finite-difference jet of P(Pi(.)) at any point of N, regardless of kind.
// Steps: h1 for dP, h2 for the nested d2P differences.
ProjectorJet fd_projector_jet(const ManifoldSpec& m, const Vec& p, int order,
                              double h1 = 1e-5, double h2 = 1e-4);

// Analytic unit normals at p in N (one for each codimension).
std::array<Vec, kMaxAmbient> normal_basis(const ManifoldSpec& m, const Vec& p,
                                          int* count);

// Unchecked projector of the extension, P(Pi(p)); requires p in the tube.
Mat extended_projector(const ManifoldSpec& m, const Vec& p);

}  // namespace bwm
