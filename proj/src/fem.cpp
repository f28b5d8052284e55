#include "burgers/fem.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "burgers/error.hpp"

namespace burgers {

FeField::FeField(MeshPtr m, Vector v) : mesh(std::move(m)), values(std::move(v)) {
  if (!mesh) throw InvalidParameter("field needs a mesh");
  if (values.size() != mesh->num_vertices()) throw DimensionMismatch("one coefficient per vertex required");
  for (double x : values) {
    if (!std::isfinite(x)) throw InvalidParameter("field coefficient is not finite");
  }
}

FeField FeField::zeros(MeshPtr mesh) {
  const std::size_t n = mesh->num_vertices();
  return FeField(std::move(mesh), Vector(n, 0.0));
}

namespace quadrature {

const TriangleRule& triangle() {
  static const TriangleRule rule = [] {
    const double s = std::sqrt(38.0 - 44.0 * std::sqrt(0.4));
    const double a1 = (8.0 - std::sqrt(10.0) + s) / 18.0;
    const double a2 = (8.0 - std::sqrt(10.0) - s) / 18.0;
    const double r = std::sqrt(213125.0 - 53320.0 * std::sqrt(10.0));
    const double w1 = (620.0 + r) / 3720.0;
    const double w2 = (620.0 - r) / 3720.0;
    const double b1 = 1.0 - 2.0 * a1;
    const double b2 = 1.0 - 2.0 * a2;
    return TriangleRule{{{{a1, a1, b1}, {a1, b1, a1}, {b1, a1, a1}, {a2, a2, b2}, {a2, b2, a2}, {b2, a2, a2}}},
                        {w1, w1, w1, w2, w2, w2}};
  }();
  return rule;
}

const EdgeRule& edge() {
  static const EdgeRule rule = [] {
    const double d = std::sqrt(15.0) / 10.0;
    return EdgeRule{{0.5 - d, 0.5, 0.5 + d}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
  }();
  return rule;
}

}  // namespace quadrature

namespace {

inline double sum1(Vec2 g) { return g.x + g.y; }

// Local P1 mass matrix entry divided by the area.
inline double mass_ref(int a, int b) { return a == b ? 1.0 / 6.0 : 1.0 / 12.0; }

}  // namespace

FeSpace::FeSpace(MeshPtr mesh) : mesh_(std::move(mesh)) {
  if (!mesh_) throw InvalidParameter("space needs a mesh");
  const auto& verts = mesh_->vertices();
  const auto& tris = mesh_->triangles();
  const std::size_t n = verts.size();

  std::vector<Triplet> t;
  t.reserve(9 * tris.size());
  for (const auto& tri : tris) {
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) t.push_back({tri[a], tri[b], 0.0});
    }
  }
  pattern_ = csr_from_triplets(t, n, n);

  area_.resize(tris.size());
  grad_.resize(tris.size());
  element_slots_.resize(tris.size());
  for (std::size_t k = 0; k < tris.size(); ++k) {
    const auto& tri = tris[k];
    const Vec2 p0 = verts[tri[0]], p1 = verts[tri[1]], p2 = verts[tri[2]];
    const double a = mesh_->triangle_area(k);
    area_[k] = a;
    const double inv = 1.0 / (2.0 * a);
    grad_[k] = {Vec2{(p1.y - p2.y) * inv, (p2.x - p1.x) * inv}, Vec2{(p2.y - p0.y) * inv, (p0.x - p2.x) * inv},
                Vec2{(p0.y - p1.y) * inv, (p1.x - p0.x) * inv}};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) element_slots_[k][3 * i + j] = pattern_.find(tri[i], tri[j]);
    }
  }
  const auto& edges = mesh_->boundary_edges();
  edge_slots_.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) edge_slots_[e][2 * i + j] = pattern_.find(edges[e].vertices[i], edges[e].vertices[j]);
    }
  }
}

Vec2 FeSpace::edge_point(std::size_t e, int q) const {
  const auto& ed = mesh_->boundary_edges()[e];
  const Vec2 a = mesh_->vertices()[ed.vertices[0]];
  const Vec2 b = mesh_->vertices()[ed.vertices[1]];
  const double s = quadrature::edge().points[q];
  return (1.0 - s) * a + s * b;
}

void FeSpace::require_same_mesh(const FeField& f) const {
  if (!f.mesh || f.mesh->geometry_id() != mesh_->geometry_id() || f.size() != size()) {
    throw MeshMismatch("field lives on a different mesh");
  }
}

SparseMatrix assemble_mass(const FeSpace& space) {
  SparseMatrix m = space.zero_matrix();
  auto& vals = m.values();
  for (std::size_t t = 0; t < space.mesh()->num_triangles(); ++t) {
    const double a = space.area(t);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) vals[space.element_slot(t, i, j)] += a * mass_ref(i, j);
    }
  }
  return m;
}

SparseMatrix assemble_stiffness(const FeSpace& space) {
  SparseMatrix k = space.zero_matrix();
  auto& vals = k.values();
  for (std::size_t t = 0; t < space.mesh()->num_triangles(); ++t) {
    const double a = space.area(t);
    const auto& g = space.gradients(t);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) vals[space.element_slot(t, i, j)] += a * dot(g[i], g[j]);
    }
  }
  return k;
}

SparseMatrix assemble_convection_by_transport(const FeSpace& space, const FeField& v) {
  space.require_same_mesh(v);
  SparseMatrix m = space.zero_matrix();
  auto& vals = m.values();
  const auto& tris = space.mesh()->triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const double a = space.area(t);
    const auto& g = space.gradients(t);
    for (int i = 0; i < 3; ++i) {
      // integral of v phi_i over the element
      double mv = 0.0;
      for (int k = 0; k < 3; ++k) mv += mass_ref(i, k) * v.values[tris[t][k]];
      mv *= a;
      for (int j = 0; j < 3; ++j) vals[space.element_slot(t, i, j)] += mv * sum1(g[j]);
    }
  }
  return m;
}

SparseMatrix assemble_convection_by_gradient(const FeSpace& space, const FeField& v) {
  space.require_same_mesh(v);
  SparseMatrix m = space.zero_matrix();
  auto& vals = m.values();
  const auto& tris = space.mesh()->triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const double a = space.area(t);
    const auto& g = space.gradients(t);
    double dv = 0.0;
    for (int k = 0; k < 3; ++k) dv += v.values[tris[t][k]] * sum1(g[k]);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) vals[space.element_slot(t, i, j)] += a * dv * mass_ref(i, j);
    }
  }
  return m;
}

Vector convection_residual(const FeSpace& space, const FeField& v, const FeField& w) {
  space.require_same_mesh(v);
  space.require_same_mesh(w);
  Vector r(space.size(), 0.0);
  const auto& tris = space.mesh()->triangles();
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    const auto& g = space.gradients(t);
    double dw = 0.0;
    for (int k = 0; k < 3; ++k) dw += w.values[tri[k]] * sum1(g[k]);
    const double s = space.area(t) * dw;
    for (int i = 0; i < 3; ++i) {
      double mv = 0.0;
      for (int k = 0; k < 3; ++k) mv += mass_ref(i, k) * v.values[tri[k]];
      r[tri[i]] += s * mv;
    }
  }
  return r;
}

double trilinear_B(const FeSpace& space, const FeField& v, const FeField& w, const FeField& z) {
  space.require_same_mesh(z);
  const Vector r = convection_residual(space, v, w);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * z.values[i];
  return s;
}

namespace {

template <class Weight>
SparseMatrix edge_weighted_mass(const FeSpace& space, TagSet tags, Weight weight) {
  SparseMatrix m = space.zero_matrix();
  auto& vals = m.values();
  const auto& rule = quadrature::edge();
  const auto& edges = space.mesh()->boundary_edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!tags.contains(edges[e].tag)) continue;
    const double len = space.mesh()->edge_length(e);
    for (int q = 0; q < 3; ++q) {
      const double s = rule.points[q];
      const double phi[2] = {1.0 - s, s};
      const double c = len * rule.weights[q] * weight(e, q);
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) vals[space.edge_slot(e, i, j)] += c * phi[i] * phi[j];
      }
    }
  }
  return m;
}

}  // namespace

SparseMatrix assemble_boundary_mass(const FeSpace& space, const EdgeValues& g, TagSet tags) {
  if (g.size() != space.mesh()->boundary_edges().size()) throw DimensionMismatch("one value triple per boundary edge");
  return edge_weighted_mass(space, tags, [&](std::size_t e, int q) { return g[e][q]; });
}

EdgeValues trace_values(const FeSpace& space, const FeField& w) {
  space.require_same_mesh(w);
  const auto& rule = quadrature::edge();
  const auto& edges = space.mesh()->boundary_edges();
  EdgeValues out(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const double w0 = w.values[edges[e].vertices[0]];
    const double w1 = w.values[edges[e].vertices[1]];
    for (int q = 0; q < 3; ++q) out[e][q] = (1.0 - rule.points[q]) * w0 + rule.points[q] * w1;
  }
  return out;
}

EdgeValues boundary_values(const FeSpace& space, const BoundaryFunction& f) {
  const auto& edges = space.mesh()->boundary_edges();
  EdgeValues out(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    for (int q = 0; q < 3; ++q) out[e][q] = f(space.edge_point(e, q), edges[e].normal);
  }
  return out;
}

EdgeValues constant_edge_values(const FeSpace& space, double c) {
  return EdgeValues(space.mesh()->boundary_edges().size(), {c, c, c});
}

double boundary_integral(const FeSpace& space, const EdgeValues& g, TagSet tags) {
  const auto& rule = quadrature::edge();
  const auto& edges = space.mesh()->boundary_edges();
  double s = 0.0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!tags.contains(edges[e].tag)) continue;
    double q_sum = 0.0;
    for (int q = 0; q < 3; ++q) q_sum += rule.weights[q] * g[e][q];
    s += space.mesh()->edge_length(e) * q_sum;
  }
  return s;
}

Vector boundary_load(const FeSpace& space, const EdgeValues& g, TagSet tags) {
  const auto& rule = quadrature::edge();
  const auto& edges = space.mesh()->boundary_edges();
  Vector r(space.size(), 0.0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!tags.contains(edges[e].tag)) continue;
    const double len = space.mesh()->edge_length(e);
    for (int q = 0; q < 3; ++q) {
      const double s = rule.points[q];
      const double c = len * rule.weights[q] * g[e][q];
      r[edges[e].vertices[0]] += c * (1.0 - s);
      r[edges[e].vertices[1]] += c * s;
    }
  }
  return r;
}

Vector boundary_cubic_residual(const FeSpace& space, const FeField& w, TagSet tags) {
  EdgeValues cube = trace_values(space, w);
  for (auto& tr : cube) {
    for (double& x : tr) x = x * x * x;
  }
  return boundary_load(space, cube, tags);
}

SparseMatrix boundary_cubic_jacobian(const FeSpace& space, const FeField& w, TagSet tags) {
  const EdgeValues tr = trace_values(space, w);
  return edge_weighted_mass(space, tags, [&](std::size_t e, int q) { return 3.0 * tr[e][q] * tr[e][q]; });
}

Vector domain_load(const FeSpace& space, const ScalarFunction& f) {
  const auto& rule = quadrature::triangle();
  const auto& verts = space.mesh()->vertices();
  const auto& tris = space.mesh()->triangles();
  Vector r(space.size(), 0.0);
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    for (int q = 0; q < 6; ++q) {
      const auto& lam = rule.points[q];
      const Vec2 p = lam[0] * verts[tri[0]] + lam[1] * verts[tri[1]] + lam[2] * verts[tri[2]];
      const double c = space.area(t) * rule.weights[q] * f(p);
      for (int i = 0; i < 3; ++i) r[tri[i]] += c * lam[i];
    }
  }
  return r;
}

FeField discrete_laplacian(const FeSpace& space, const FeField& w, const BoundaryFunction& flux) {
  space.require_same_mesh(w);
  const SparseMatrix m = assemble_mass(space);
  const SparseMatrix k = assemble_stiffness(space);
  Vector rhs = spmv(k, w.values);
  for (double& x : rhs) x = -x;
  if (flux) kernels::axpy(1.0, boundary_load(space, boundary_values(space, flux), TagSet::all()), rhs);
  return FeField(space.mesh(), solve_spd(m, rhs, 1e-12).x);
}

Norms norms(const FeSpace& space, const FeField& w, TagSet tags) {
  space.require_same_mesh(w);
  Norms out;
  const Vector mw = spmv(assemble_mass(space), w.values);
  const Vector kw = spmv(assemble_stiffness(space), w.values);
  out.l2 = std::sqrt(std::max(0.0, kernels::dot(w.values, mw)));
  out.h1_semi = std::sqrt(std::max(0.0, kernels::dot(w.values, kw)));
  EdgeValues sq = trace_values(space, w);
  EdgeValues quart = sq;
  for (std::size_t e = 0; e < sq.size(); ++e) {
    for (int q = 0; q < 3; ++q) {
      sq[e][q] *= sq[e][q];
      quart[e][q] = sq[e][q] * sq[e][q];
    }
  }
  out.boundary_l2 = std::sqrt(boundary_integral(space, sq, tags));
  out.boundary_l4 = std::pow(boundary_integral(space, quart, tags), 0.25);
  return out;
}

double l2_error(const FeSpace& space, const FeField& w, const ScalarFunction& f) {
  space.require_same_mesh(w);
  const auto& rule = quadrature::triangle();
  const auto& verts = space.mesh()->vertices();
  const auto& tris = space.mesh()->triangles();
  double s = 0.0;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const auto& tri = tris[t];
    for (int q = 0; q < 6; ++q) {
      const auto& lam = rule.points[q];
      const Vec2 p = lam[0] * verts[tri[0]] + lam[1] * verts[tri[1]] + lam[2] * verts[tri[2]];
      const double wh = lam[0] * w.values[tri[0]] + lam[1] * w.values[tri[1]] + lam[2] * w.values[tri[2]];
      const double d = wh - f(p);
      s += space.area(t) * rule.weights[q] * d * d;
    }
  }
  return std::sqrt(s);
}

FeField interpolate(const ScalarFunction& f, const MeshPtr& mesh) {
  Vector v;
  v.reserve(mesh->num_vertices());
  for (const auto& p : mesh->vertices()) {
    const double x = f(p);
    if (!std::isfinite(x)) throw InvalidParameter("interpolated function is not finite at a vertex");
    v.push_back(x);
  }
  return FeField(mesh, std::move(v));
}

FeField prolong(const FeField& coarse, const MeshPtr& fine) {
  if (!coarse.mesh || !fine) throw InvalidParameter("null mesh");
  if (!is_descendant(*fine, *coarse.mesh)) throw MeshMismatch("target mesh is not a refinement of the source mesh");
  std::vector<const Mesh*> chain;
  for (const Mesh* m = fine.get(); m->geometry_id() != coarse.mesh->geometry_id(); m = m->parent().get()) {
    chain.push_back(m);
  }
  Vector values = coarse.values;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    const auto& pm = (*it)->parent_map();
    Vector next(pm.size());
    for (std::size_t v = 0; v < pm.size(); ++v) {
      next[v] = pm[v][0] == pm[v][1] ? values[pm[v][0]] : 0.5 * (values[pm[v][0]] + values[pm[v][1]]);
    }
    values = std::move(next);
  }
  return FeField(fine, std::move(values));
}

Vector mass_row_sums(const FeSpace& space) {
  const SparseMatrix m = assemble_mass(space);
  return spmv(m, Vector(space.size(), 1.0));
}

}  // namespace burgers
