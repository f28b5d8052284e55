#include "burgers/control.hpp"

#include <cmath>

#include "burgers/error.hpp"

namespace burgers {

void ControlParams::validate() const {
  if (!(nu > 0.0)) throw InvalidParameter("viscosity must be positive");
  if (!(c0 > 0.0)) throw InvalidParameter("control gain c0 must be positive");
}

namespace {

void require_active_edges(const Mesh& mesh, TagSet active) {
  for (const auto& e : mesh.boundary_edges()) {
    if (active.contains(e.tag)) return;
  }
  throw InvalidConfiguration("feedback control has no active boundary edge");
}

}  // namespace

EdgeValues abs_steady_trace(const FeSpace& space, const SteadyCoefficient& u_inf) {
  EdgeValues out = u_inf.analytic ? boundary_values(space, [&](Vec2 p, Vec2) { return u_inf.analytic(p); })
                                  : trace_values(space, u_inf.field);
  for (auto& e : out) {
    for (double& x : e) x = std::abs(x);
  }
  return out;
}

EdgeValues control_trace(const FeSpace& space, const FeField& w, const SteadyCoefficient& u_inf,
                         const ControlParams& p) {
  p.validate();
  require_active_edges(*space.mesh(), p.active);
  const EdgeValues wt = trace_values(space, w);
  const EdgeValues ut = abs_steady_trace(space, u_inf);
  const auto& edges = space.mesh()->boundary_edges();
  EdgeValues out(edges.size(), {0.0, 0.0, 0.0});
  const double cubic = 2.0 / (9.0 * p.c0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!p.active.contains(edges[e].tag)) continue;
    for (int q = 0; q < 3; ++q) {
      const double x = wt[e][q];
      out[e][q] = -((p.c0 + p.nu + 2.0 * ut[e][q]) * x + cubic * x * x * x) / p.nu;
    }
  }
  return out;
}

SparseMatrix control_linear_matrix(const FeSpace& space, const SteadyCoefficient& u_inf, const ControlParams& p) {
  p.validate();
  require_active_edges(*space.mesh(), p.active);
  EdgeValues g = abs_steady_trace(space, u_inf);
  for (auto& e : g) {
    for (double& x : e) x = p.c0 + p.nu + 2.0 * x;
  }
  return assemble_boundary_mass(space, g, p.active);
}

ControlTerms control_weak_terms(const FeSpace& space, const SteadyCoefficient& u_inf, const ControlParams& p,
                                const FeField& w) {
  ControlTerms t;
  t.linear_matrix = control_linear_matrix(space, u_inf, p);
  const double cubic = 2.0 / (9.0 * p.c0);
  t.cubic_vector = boundary_cubic_residual(space, w, p.active);
  for (double& x : t.cubic_vector) x *= cubic;
  t.cubic_jacobian = boundary_cubic_jacobian(space, w, p.active).scaled(cubic);
  return t;
}

double control_boundary_l2(const FeSpace& space, const FeField& w, const SteadyCoefficient& u_inf,
                           const ControlParams& p) {
  EdgeValues v = control_trace(space, w, u_inf, p);
  for (auto& e : v) {
    for (double& x : e) x *= x;
  }
  return std::sqrt(boundary_integral(space, v, p.active));
}

}  // namespace burgers
