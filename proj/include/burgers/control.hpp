#pragma once

#include "burgers/analytic.hpp"
#include "burgers/fem.hpp"

namespace burgers {

struct ControlParams {
  double nu = 0.1;
  double c0 = 1.0;
  TagSet active = TagSet::control();

  /// Throws InvalidParameter unless nu > 0 and c0 > 0.
  void validate() const;
};

/// Where |u_inf| in the feedback coefficient comes from: the discrete
/// steady field, or a closed form sampled at the boundary quadrature nodes.
/// The interior convection terms always use `field`.
struct SteadyCoefficient {
  FeField field;
  ScalarFunction analytic;

  static SteadyCoefficient discrete(FeField f) { return {std::move(f), {}}; }
  static SteadyCoefficient from_closed_form(const ScalarFunction& u, const MeshPtr& mesh) {
    return {interpolate(u, mesh), u};
  }
};

/// |u_inf| at every boundary quadrature node.
EdgeValues abs_steady_trace(const FeSpace& space, const SteadyCoefficient& u_inf);

/// Feedback law  v2 = -(1/nu) ((c0 + nu + 2|u_inf|) w + 2/(9 c0) w^3)  at
/// the quadrature nodes of active edges; zero elsewhere.
EdgeValues control_trace(const FeSpace& space, const FeField& w, const SteadyCoefficient& u_inf,
                         const ControlParams& p);

struct ControlTerms {
  /// Boundary mass weighted by c0 + nu + 2|u_inf|.
  SparseMatrix linear_matrix;
  /// 2/(9 c0) times the cubic boundary residual.
  Vector cubic_vector;
  /// Derivative of cubic_vector with respect to the nodal values of w.
  SparseMatrix cubic_jacobian;
};

ControlTerms control_weak_terms(const FeSpace& space, const SteadyCoefficient& u_inf, const ControlParams& p,
                                const FeField& w);

/// Boundary linear matrix alone; depends only on the steady state.
SparseMatrix control_linear_matrix(const FeSpace& space, const SteadyCoefficient& u_inf, const ControlParams& p);

/// L2 norm of control_trace over the active edges.
double control_boundary_l2(const FeSpace& space, const FeField& w, const SteadyCoefficient& u_inf,
                           const ControlParams& p);

}  // namespace burgers
