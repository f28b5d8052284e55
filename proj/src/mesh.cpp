#include "burgers/mesh.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <utility>

#include "burgers/error.hpp"

namespace burgers {
namespace {

std::uint64_t next_geometry_id() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

double signed_area(Vec2 a, Vec2 b, Vec2 c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

Mesh::Mesh(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles, double h,
           MeshPtr parent, std::vector<VertexParent> parent_map)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      h_(h),
      parent_(std::move(parent)),
      parent_map_(std::move(parent_map)),
      geometry_id_(next_geometry_id()) {
  const int nv = static_cast<int>(vertices_.size());
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int v : triangles_[t]) {
      if (v < 0 || v >= nv) throw InvalidParameter("triangle references a missing vertex");
    }
    if (!(triangle_area(t) > 0.0)) throw InvalidParameter("triangle with nonpositive signed area");
  }
  if (parent_ && parent_map_.size() != vertices_.size()) {
    throw InvalidParameter("parent map must cover every vertex");
  }
  build_boundary();
}

void Mesh::build_boundary() {
  // Each interior edge is seen twice (once per side), boundary edges once.
  std::map<std::pair<int, int>, std::pair<int, int>> owners;  // key -> (triangle, count)
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      auto [it, inserted] = owners.try_emplace(edge_key(tri[k], tri[(k + 1) % 3]),
                                               static_cast<int>(t), 0);
      if (++it->second.second > 2) throw InvalidParameter("edge shared by more than two triangles");
    }
  }
  // Walk triangles in order so boundary edge numbering is deterministic.
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      if (owners.at(edge_key(a, b)).second != 1) continue;
      const Vec2 d = vertices_[b] - vertices_[a];
      const double len = std::hypot(d.x, d.y);
      // Counterclockwise triangle: interior on the left, outward normal on the right.
      boundary_edges_.push_back({{a, b}, static_cast<int>(t), {d.y / len, -d.x / len},
                                 BoundaryTag::NeumannControl});
    }
  }
}

double Mesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Mesh::edge_length(std::size_t e) const {
  const auto& ed = boundary_edges_[e];
  const Vec2 d = vertices_[ed.vertices[1]] - vertices_[ed.vertices[0]];
  return std::hypot(d.x, d.y);
}

double Mesh::total_area() const {
  double a = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) a += triangle_area(t);
  return a;
}

std::vector<int> Mesh::dirichlet_vertices() const {
  std::vector<int> out;
  for (const auto& e : boundary_edges_) {
    if (e.tag == BoundaryTag::DirichletZero) {
      out.push_back(e.vertices[0]);
      out.push_back(e.vertices[1]);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::size_t Mesh::count_edges(BoundaryTag tag) const {
  return static_cast<std::size_t>(std::count_if(boundary_edges_.begin(), boundary_edges_.end(),
                                                [tag](const BoundaryEdge& e) { return e.tag == tag; }));
}

MeshPtr Mesh::with_tags(const std::vector<BoundaryTag>& tags) const {
  if (tags.size() != boundary_edges_.size()) throw InvalidParameter("one tag per boundary edge required");
  auto copy = std::make_shared<Mesh>(*this);
  for (std::size_t e = 0; e < tags.size(); ++e) copy->boundary_edges_[e].tag = tags[e];
  return copy;
}

MeshPtr build_square_mesh(int n, Vec2 origin, double side) {
  if (n < 1) throw InvalidParameter("mesh needs at least one subdivision per side");
  if (!(side > 0.0)) throw InvalidParameter("square side must be positive");
  const int m = n + 1;
  std::vector<Vec2> verts;
  verts.reserve(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      verts.push_back({origin.x + side * i / n, origin.y + side * j / n});
    }
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = j * m + i;
      const int v10 = v00 + 1;
      const int v01 = v00 + m;
      const int v11 = v01 + 1;
      tris.push_back({v00, v10, v11});
      tris.push_back({v00, v11, v01});
    }
  }
  return std::make_shared<Mesh>(std::move(verts), std::move(tris), side / n);
}

MeshPtr refine_uniform(const MeshPtr& mesh) {
  if (!mesh) throw InvalidParameter("null mesh");
  std::vector<Vec2> verts = mesh->vertices();
  std::vector<VertexParent> parents;
  parents.reserve(verts.size());
  for (int v = 0; v < static_cast<int>(verts.size()); ++v) parents.push_back({v, v});

  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), static_cast<int>(verts.size()));
    if (inserted) {
      verts.push_back(0.5 * (mesh->vertices()[a] + mesh->vertices()[b]));
      parents.push_back({std::min(a, b), std::max(a, b)});
    }
    return it->second;
  };

  std::vector<std::array<int, 3>> tris;
  tris.reserve(4 * mesh->num_triangles());
  for (const auto& t : mesh->triangles()) {
    const int a = t[0], b = t[1], c = t[2];
    const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    tris.push_back({a, ab, ca});
    tris.push_back({ab, b, bc});
    tris.push_back({ca, bc, c});
    tris.push_back({ab, bc, ca});
  }
  auto fine = std::make_shared<Mesh>(std::move(verts), std::move(tris), 0.5 * mesh->h(), mesh,
                                     std::move(parents));
  // Children inherit the tag of the coarse edge they subdivide.
  std::map<std::pair<int, int>, BoundaryTag> coarse_tags;
  for (const auto& e : mesh->boundary_edges()) {
    const int m = midpoint.at(edge_key(e.vertices[0], e.vertices[1]));
    coarse_tags[edge_key(e.vertices[0], m)] = e.tag;
    coarse_tags[edge_key(m, e.vertices[1])] = e.tag;
  }
  std::vector<BoundaryTag> tags;
  bool any_dirichlet = false;
  for (const auto& e : fine->boundary_edges()) {
    tags.push_back(coarse_tags.at(edge_key(e.vertices[0], e.vertices[1])));
    any_dirichlet = any_dirichlet || tags.back() == BoundaryTag::DirichletZero;
  }
  if (!any_dirichlet) return fine;
  return fine->with_tags(tags);
}

MeshPtr tag_boundary(const MeshPtr& mesh, const std::vector<BoundarySegment>& dirichlet_region) {
  if (!mesh) throw InvalidParameter("null mesh");
  const double tol = 1e-12;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& e : mesh->boundary_edges()) {
    for (int v : e.vertices) {
      const Vec2 p = mesh->vertices()[v];
      xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
    }
  }
  for (const auto& s : dirichlet_region) {
    if (s.axis != 0 && s.axis != 1) throw InvalidRegion("segment axis must be 0 or 1");
    if (s.lo > s.hi) throw InvalidRegion("segment bounds reversed");
    // The segment must lie on some boundary edge line.
    bool on_boundary = false;
    for (const auto& e : mesh->boundary_edges()) {
      const Vec2 a = mesh->vertices()[e.vertices[0]];
      const Vec2 b = mesh->vertices()[e.vertices[1]];
      const double ca = s.axis == 0 ? a.x : a.y;
      const double cb = s.axis == 0 ? b.x : b.y;
      const double oa = s.axis == 0 ? a.y : a.x;
      const double ob = s.axis == 0 ? b.y : b.x;
      if (std::abs(ca - s.value) < tol && std::abs(cb - s.value) < tol &&
          std::max(oa, ob) > s.lo - tol && std::min(oa, ob) < s.hi + tol) {
        on_boundary = true;
        break;
      }
    }
    if (!on_boundary) throw InvalidRegion("dirichlet segment does not lie on the boundary");
  }

  std::vector<BoundaryTag> tags;
  tags.reserve(mesh->boundary_edges().size());
  for (const auto& e : mesh->boundary_edges()) {
    const Vec2 a = mesh->vertices()[e.vertices[0]];
    const Vec2 b = mesh->vertices()[e.vertices[1]];
    bool inside = false;
    for (const auto& s : dirichlet_region) {
      const double ca = s.axis == 0 ? a.x : a.y;
      const double cb = s.axis == 0 ? b.x : b.y;
      const double oa = s.axis == 0 ? a.y : a.x;
      const double ob = s.axis == 0 ? b.y : b.x;
      inside = inside || (std::abs(ca - s.value) < tol && std::abs(cb - s.value) < tol &&
                          std::min(oa, ob) > s.lo - tol && std::max(oa, ob) < s.hi + tol);
    }
    tags.push_back(inside ? BoundaryTag::DirichletZero : BoundaryTag::NeumannControl);
  }
  return mesh->with_tags(tags);
}

double friedrichs_constant(const Mesh& mesh) {
  double c = 0.0;
  for (const auto& e : mesh.boundary_edges()) {
    for (int v : e.vertices) {
      const Vec2 p = mesh.vertices()[v];
      const double r2 = dot(p, p);
      c = std::max(c, std::max(r2, std::sqrt(r2)));
    }
  }
  return c;
}

bool is_descendant(const Mesh& fine, const Mesh& coarse) {
  for (const Mesh* m = &fine; m != nullptr; m = m->parent().get()) {
    if (m->geometry_id() == coarse.geometry_id()) return true;
  }
  return false;
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  const auto old = os.precision(17);
  os << "vertices " << mesh.num_vertices() << '\n';
  for (const auto& v : mesh.vertices()) os << v.x << ' ' << v.y << '\n';
  os << "triangles " << mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "boundary_edges " << mesh.boundary_edges().size() << '\n';
  for (const auto& e : mesh.boundary_edges()) {
    os << e.vertices[0] << ' ' << e.vertices[1] << ' ' << e.triangle << ' ' << e.normal.x << ' '
       << e.normal.y << ' ' << (e.tag == BoundaryTag::DirichletZero ? "dirichlet" : "neumann")
       << '\n';
  }
  os.precision(old);
}

}  // namespace burgers
