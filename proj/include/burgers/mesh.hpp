#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace burgers {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }

enum class BoundaryTag { NeumannControl, DirichletZero };

struct BoundaryEdge {
  // Ordered so that the parent triangle lies to the left of v0 -> v1.
  std::array<int, 2> vertices;
  int triangle = -1;
  Vec2 normal;
  BoundaryTag tag = BoundaryTag::NeumannControl;
};

/// Fine vertex provenance after red refinement: a copy of a coarse vertex
/// (first == second) or the midpoint of a coarse edge.
using VertexParent = std::array<int, 2>;

class Mesh;
using MeshPtr = std::shared_ptr<const Mesh>;

/// Conforming triangulation with tagged boundary edges. Immutable once built.
class Mesh {
 public:
  Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles, double h,
       MeshPtr parent = nullptr, std::vector<VertexParent> parent_map = {});

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  double h() const { return h_; }

  /// Coarser mesh this one was refined from, if any.
  const MeshPtr& parent() const { return parent_; }
  const std::vector<VertexParent>& parent_map() const { return parent_map_; }

  /// Shared by retagged copies; identifies the vertex/triangle geometry.
  std::uint64_t geometry_id() const { return geometry_id_; }

  double triangle_area(std::size_t t) const;
  double edge_length(std::size_t e) const;
  double total_area() const;

  /// Vertices touching at least one DirichletZero edge, ascending.
  std::vector<int> dirichlet_vertices() const;
  std::size_t count_edges(BoundaryTag tag) const;

  /// Copy with new tags (same geometry, same parent chain).
  MeshPtr with_tags(const std::vector<BoundaryTag>& tags) const;

 private:
  void build_boundary();

  std::vector<Vec2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundaryEdge> boundary_edges_;
  double h_;
  MeshPtr parent_;
  std::vector<VertexParent> parent_map_;
  std::uint64_t geometry_id_;
};

/// Uniform n x n grid on [origin, origin + side]^2, each cell split along
/// its lower-left to upper-right diagonal; vertices row-major.
MeshPtr build_square_mesh(int n, Vec2 origin = {0.0, 0.0}, double side = 1.0);
inline MeshPtr build_unit_square_mesh(int n) { return build_square_mesh(n); }

/// Red refinement: each triangle split into four through edge midpoints.
/// Coarse vertices keep their indices; midpoints follow in first-seen order.
MeshPtr refine_uniform(const MeshPtr& mesh);

/// Axis-aligned boundary segment: points with coordinate `axis` equal to
/// `value` and the other coordinate in [lo, hi].
struct BoundarySegment {
  int axis = 0;
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// Edges lying inside any of the segments become DirichletZero, the rest
/// NeumannControl. An empty list means full-boundary control.
MeshPtr tag_boundary(const MeshPtr& mesh, const std::vector<BoundarySegment>& dirichlet_region);

/// max over boundary vertices of max(|x|^2, |x|).
double friedrichs_constant(const Mesh& mesh);

/// True when `fine` is `coarse` or a refinement descendant of it.
bool is_descendant(const Mesh& fine, const Mesh& coarse);

void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace burgers
