#pragma once

// Pointwise stages of the solver. Every kernel runs either serially (the
// reference path used by the tests) or as an OpenMP parallel loop over grid
// points; both execute the same per-point body, so results are identical.

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

#include "bwm/geometry.hpp"
#include "bwm/grid.hpp"

namespace bwm {

enum class Exec { Serial, Parallel };

// Caps OpenMP worker count from BWM_THREADS if set. Idempotent.
void configure_threads_from_env();

template <class Body>
void for_points(Exec exec, std::size_t n, Body&& body) {
  if (exec == Exec::Serial) {
    for (std::size_t p = 0; p < n; ++p) body(p);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(n); ++i) {
    try {
      body(std::size_t(i));
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

// Pointwise nearest-point retraction; throws TubeExceeded at the first
// offending point.
GridField retract_field(const ManifoldSpec& m, const GridField& u,
                        Exec exec = Exec::Parallel);

// P_{u(x)} v(x) with u already on N.
GridField project_tangent(const ManifoldSpec& m, const GridField& u,
                          const GridField& v, Exec exec = Exec::Parallel);

// max_x dist(u(x), N).
double max_constraint_residual(const ManifoldSpec& m, const GridField& u,
                               Exec exec = Exec::Parallel);

// max_x |(I - P) v(x)| and max_x |P v(x)|, with P evaluated at Pi(u(x)).
double max_normal_part(const ManifoldSpec& m, const GridField& u,
                       const GridField& v, Exec exec = Exec::Parallel);
double max_tangent_part(const ManifoldSpec& m, const GridField& u,
                        const GridField& v, Exec exec = Exec::Parallel);

// Pointwise products entering the projector form of the nonlinearity. With
// q = Pi(u(x)) and the jet of P at q:
//   trace_term  = sum_i dP(d_i u) d_i u
//   flux_term_i = dP(d_i u) Lap u                        (stacked [axis][comp])
//   curvature   = (sum_i d2P(d_i u, d_i u) + dP(Lap u)) Lap u  = (Lap P) Lap u
//   dP          = dP[k] matrices per point, reused by the velocity kick
struct ProjectorProducts {
  GridField trace_term;
  GridField flux_term;
  GridField curvature;
  std::vector<double> dP;  // per point L*L*L, dP[k](i,j) at ((p*L + k)*L + i)*L + j
};

ProjectorProducts projector_products(const ManifoldSpec& m, const GridField& u,
                                     const GridField& grad, const GridField& lap,
                                     Exec exec = Exec::Parallel);

// Pointwise quadratic velocity term dP_q(v) v using stored dP matrices.
GridField velocity_quadratic(const std::vector<double>& dP, const GridField& v,
                             Exec exec = Exec::Parallel);

// Scalar fields for the sphere multiplier form.
struct SphereProducts {
  GridField grad_sq;     // |grad u|^2                       (1 comp)
  GridField flux;        // <Lap u, d_i u>                    (dim comps)
  GridField lap_sq;      // |Lap u|^2                         (1 comp)
};
SphereProducts sphere_products(const GridField& grad, const GridField& lap,
                               Exec exec = Exec::Parallel);

// Solves v' = Q(v) + g pointwise over [0, h] with one classical RK4 step,
// where Q(v) = dP(v) v (projector form) or -|v|^2 u (sphere form).
GridField kick_projector(const std::vector<double>& dP, const GridField& v,
                         const GridField& g, double h, Exec exec = Exec::Parallel);
GridField kick_sphere(const GridField& u, const GridField& v, const GridField& g,
                      double h, Exec exec = Exec::Parallel);

}  // namespace bwm
