#pragma once

#include <array>
#include <span>
#include <vector>

#include "burgers/analytic.hpp"
#include "burgers/mesh.hpp"
#include "burgers/sparse.hpp"

namespace burgers {

/// Nodal coefficients of a continuous piecewise-linear function.
struct FeField {
  MeshPtr mesh;
  Vector values;

  FeField() = default;
  FeField(MeshPtr mesh, Vector values);
  static FeField zeros(MeshPtr mesh);
  std::size_t size() const { return values.size(); }
};

namespace quadrature {

/// Degree-4 exact 6-point rule on the reference triangle, barycentric
/// points; weights sum to 1 (multiply by the element area).
struct TriangleRule {
  std::array<std::array<double, 3>, 6> points;
  std::array<double, 6> weights;
};
const TriangleRule& triangle();

/// 3-point Gauss rule on [0, 1], exact to degree 5; weights sum to 1.
struct EdgeRule {
  std::array<double, 3> points;
  std::array<double, 3> weights;
};
const EdgeRule& edge();

}  // namespace quadrature

/// Which boundary edges an operation integrates over.
struct TagSet {
  bool neumann = true;
  bool dirichlet = true;

  static TagSet all() { return {true, true}; }
  static TagSet control() { return {true, false}; }
  static TagSet none() { return {false, false}; }
  bool contains(BoundaryTag tag) const {
    return tag == BoundaryTag::NeumannControl ? neumann : dirichlet;
  }
};

/// Values at the three edge quadrature nodes of every boundary edge,
/// indexed like Mesh::boundary_edges().
using EdgeValues = std::vector<std::array<double, 3>>;

/// Mesh plus the cached element geometry and the shared CSR pattern every
/// assembled operator lives on.
class FeSpace {
 public:
  explicit FeSpace(MeshPtr mesh);

  const MeshPtr& mesh() const { return mesh_; }
  std::size_t size() const { return mesh_->num_vertices(); }

  /// All-zero matrix on the vertex-adjacency pattern.
  SparseMatrix zero_matrix() const { return pattern_; }

  double area(std::size_t t) const { return area_[t]; }
  /// Barycentric gradients of triangle t.
  const std::array<Vec2, 3>& gradients(std::size_t t) const { return grad_[t]; }
  /// Slot of local entry (a, b) of triangle t in the pattern's value array.
  int element_slot(std::size_t t, int a, int b) const { return element_slots_[t][3 * a + b]; }
  int edge_slot(std::size_t e, int a, int b) const { return edge_slots_[e][2 * a + b]; }

  /// Boundary quadrature node positions.
  Vec2 edge_point(std::size_t e, int q) const;

  void require_same_mesh(const FeField& f) const;

 private:
  MeshPtr mesh_;
  SparseMatrix pattern_;
  std::vector<double> area_;
  std::vector<std::array<Vec2, 3>> grad_;
  std::vector<std::array<int, 9>> element_slots_;
  std::vector<std::array<int, 4>> edge_slots_;
};

SparseMatrix assemble_mass(const FeSpace& space);
SparseMatrix assemble_stiffness(const FeSpace& space);
/// (i, j) -> integral of v (grad phi_j . 1) phi_i
SparseMatrix assemble_convection_by_transport(const FeSpace& space, const FeField& v);
/// (i, j) -> integral of (grad v . 1) phi_j phi_i
SparseMatrix assemble_convection_by_gradient(const FeSpace& space, const FeField& v);
/// Vector of B(v; w, phi_i).
Vector convection_residual(const FeSpace& space, const FeField& v, const FeField& w);
/// integral of v (grad w . 1) z
double trilinear_B(const FeSpace& space, const FeField& v, const FeField& w, const FeField& z);

/// (i, j) -> boundary integral over tagged edges of g phi_j phi_i.
SparseMatrix assemble_boundary_mass(const FeSpace& space, const EdgeValues& g, TagSet tags);
/// Entries: boundary integral of w^3 phi_i over tagged edges.
Vector boundary_cubic_residual(const FeSpace& space, const FeField& w, TagSet tags);
/// (i, j) -> boundary integral of 3 w^2 phi_j phi_i.
SparseMatrix boundary_cubic_jacobian(const FeSpace& space, const FeField& w, TagSet tags);

/// Trace of w at the boundary quadrature nodes.
EdgeValues trace_values(const FeSpace& space, const FeField& w);
EdgeValues boundary_values(const FeSpace& space, const BoundaryFunction& f);
EdgeValues constant_edge_values(const FeSpace& space, double c);
/// Integral of g over tagged edges.
double boundary_integral(const FeSpace& space, const EdgeValues& g, TagSet tags);
/// Entries: boundary integral of g phi_i over tagged edges.
Vector boundary_load(const FeSpace& space, const EdgeValues& g, TagSet tags);
/// Entries: integral of f phi_i by the 6-point rule.
Vector domain_load(const FeSpace& space, const ScalarFunction& f);

/// Solves M d = -(K w - flux load); d is the nodal vector of Delta_h w.
FeField discrete_laplacian(const FeSpace& space, const FeField& w, const BoundaryFunction& flux);

struct Norms {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double boundary_l2 = 0.0;
  double boundary_l4 = 0.0;
};
Norms norms(const FeSpace& space, const FeField& w, TagSet tags = TagSet::all());

/// ||w - f||_{L2} with f sampled by the 6-point rule.
double l2_error(const FeSpace& space, const FeField& w, const ScalarFunction& f);

FeField interpolate(const ScalarFunction& f, const MeshPtr& mesh);

/// Exact embedding of a P1 function into a nested refinement descendant.
FeField prolong(const FeField& coarse, const MeshPtr& fine);

/// Nodal mass-weighted mean row c_i = integral of phi_i.
Vector mass_row_sums(const FeSpace& space);

}  // namespace burgers
