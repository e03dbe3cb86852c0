#include "bwm/dynamics.hpp"

#include "bwm/error.hpp"

namespace bwm {

namespace {

struct UDerivatives {
  GridField grad;
  GridField lap;
};

UDerivatives derivatives_of(const GridField& u) {
  const Spectrum uh = forward(u);
  return {gradient(uh), apply(uh, SpectralOp::Laplacian)};
}

bool use_sphere(const ManifoldSpec& m, RhsForm form) {
  if (form == RhsForm::Sphere) {
    if (m.kind != ManifoldKind::Sphere) {
      throw Error("sphere right-hand side requested for a non-sphere target");
    }
    return true;
  }
  return form == RhsForm::Auto && m.kind == ManifoldKind::Sphere;
}

GridField scale_rows(const GridField& u, const GridField& scalar) {
  GridField out(u.grid(), u.ncomp());
  for (std::size_t p = 0; p < u.num_points(); ++p) {
    for (int c = 0; c < u.ncomp(); ++c) out.at(p, c) = scalar.at(p, 0) * u.at(p, c);
  }
  return out;
}

// lambda + |u_t|^2, i.e. the velocity-independent part of the multiplier.
GridField sphere_multiplier_free(const GridField& u, double dealias_fraction,
                                 Exec exec) {
  const UDerivatives d = derivatives_of(u);
  const SphereProducts sp = sphere_products(d.grad, d.lap, exec);
  GridField lambda = sp.lap_sq;
  lambda -= apply(forward(sp.grad_sq), SpectralOp::Laplacian, 0, dealias_fraction);
  lambda -= 2.0 * divergence(sp.flux, dealias_fraction);
  return lambda;
}

}  // namespace

NonlinearSplit split_rhs(const ManifoldSpec& m, const GridField& u, RhsForm form,
                         double dealias_fraction, Exec exec) {
  u.require_finite("right-hand side");
  NonlinearSplit out;
  if (use_sphere(m, form)) {
    out.sphere = true;
    out.velocity_free = scale_rows(u, sphere_multiplier_free(u, dealias_fraction, exec));
    return out;
  }
  const UDerivatives d = derivatives_of(u);
  ProjectorProducts pp = projector_products(m, u, d.grad, d.lap, exec);
  GridField g = apply(forward(pp.trace_term), SpectralOp::Laplacian, 0,
                      dealias_fraction);
  g += 2.0 * divergence(pp.flux_term, dealias_fraction);
  g -= pp.curvature;
  out.velocity_free = std::move(g);
  out.dP = std::move(pp.dP);
  return out;
}

GridField rhs_projector(const ManifoldSpec& m, const SimulationState& s,
                        double dealias_fraction, Exec exec) {
  s.ut.require_finite("right-hand side");
  NonlinearSplit split = split_rhs(m, s.u, RhsForm::Projector, dealias_fraction, exec);
  GridField f = velocity_quadratic(split.dP, s.ut, exec);
  f += split.velocity_free;
  return f;
}

GridField rhs_sphere(const SimulationState& s, double dealias_fraction, Exec exec) {
  s.u.require_finite("right-hand side");
  s.ut.require_finite("right-hand side");
  GridField lambda = sphere_multiplier_free(s.u, dealias_fraction, exec);
  for (std::size_t p = 0; p < s.ut.num_points(); ++p) {
    double vsq = 0.0;
    for (int c = 0; c < s.ut.ncomp(); ++c) vsq += s.ut.at(p, c) * s.ut.at(p, c);
    lambda.at(p, 0) -= vsq;
  }
  return scale_rows(s.u, lambda);
}

GridField rhs(const ManifoldSpec& m, const SimulationState& s, RhsForm form,
              double dealias_fraction, Exec exec) {
  return use_sphere(m, form) ? rhs_sphere(s, dealias_fraction, exec)
                             : rhs_projector(m, s, dealias_fraction, exec);
}

GridField velocity_kick(const NonlinearSplit& split, const GridField& u,
                        const GridField& ut, double h, Exec exec) {
  if (split.sphere) return kick_sphere(u, ut, split.velocity_free, h, exec);
  return kick_projector(split.dP, ut, split.velocity_free, h, exec);
}

double orthogonality_residual(const ManifoldSpec& m, const SimulationState& s,
                              const GridField& utt, Exec exec) {
  const GridField total = utt + bilaplacian(s.u);
  return max_tangent_part(m, s.u, total, exec);
}

SimulationState tangent_enforce(const ManifoldSpec& m, const SimulationState& s,
                                Exec exec) {
  SimulationState out;
  out.u = retract_field(m, s.u, exec);
  out.ut = project_tangent(m, out.u, s.ut, exec);
  out.time = s.time;
  return out;
}

StateHealth state_health(const ManifoldSpec& m, const SimulationState& s,
                         Exec exec) {
  return {max_constraint_residual(m, s.u, exec),
          max_normal_part(m, s.u, s.ut, exec)};
}

}  // namespace bwm
