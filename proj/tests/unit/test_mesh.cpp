#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"

#include "burgers/error.hpp"
#include "burgers/mesh.hpp"

using namespace burgers;

namespace {

std::set<std::pair<double, double>> vertex_set(const Mesh& m) {
  std::set<std::pair<double, double>> s;
  for (const auto& v : m.vertices()) s.insert({v.x, v.y});
  return s;
}

// Triangles as sorted coordinate triples, independent of vertex numbering.
std::set<std::vector<std::pair<double, double>>> triangle_set(const Mesh& m) {
  std::set<std::vector<std::pair<double, double>>> s;
  for (const auto& t : m.triangles()) {
    std::vector<std::pair<double, double>> c;
    for (int v : t) c.push_back({m.vertices()[v].x, m.vertices()[v].y});
    std::sort(c.begin(), c.end());
    s.insert(c);
  }
  return s;
}

void check_invariants(const Mesh& m, double area) {
  for (std::size_t t = 0; t < m.num_triangles(); ++t) CHECK(m.triangle_area(t) > 0.0);
  CHECK(m.total_area() == doctest::Approx(area).epsilon(1e-12));
  for (std::size_t e = 0; e < m.boundary_edges().size(); ++e) {
    const auto& ed = m.boundary_edges()[e];
    CHECK(std::abs(std::hypot(ed.normal.x, ed.normal.y) - 1.0) <= 1e-14);
    const Vec2 a = m.vertices()[ed.vertices[0]];
    const Vec2 b = m.vertices()[ed.vertices[1]];
    CHECK(std::abs(dot(ed.normal, b - a)) <= 1e-14);
    const auto& tri = m.triangles()[ed.triangle];
    const Vec2 centroid = (1.0 / 3.0) * (m.vertices()[tri[0]] + m.vertices()[tri[1]] + m.vertices()[tri[2]]);
    CHECK(dot(ed.normal, centroid - a) < 0.0);
  }
}

}  // namespace

TEST_CASE("unit square mesh sizes") {
  auto m1 = build_unit_square_mesh(1);
  CHECK(m1->num_vertices() == 4);
  CHECK(m1->num_triangles() == 2);
  CHECK(m1->total_area() == doctest::Approx(1.0));

  auto m4 = build_unit_square_mesh(4);
  CHECK(m4->h() == 0.25);
  CHECK(m4->num_vertices() == 25);
  CHECK(m4->num_triangles() == 32);

  CHECK_THROWS_AS(build_unit_square_mesh(0), InvalidParameter);
}

TEST_CASE("n = 2 boundary has 8 axis-aligned edges") {
  auto m = build_unit_square_mesh(2);
  REQUIRE(m->boundary_edges().size() == 8);
  int counts[4] = {0, 0, 0, 0};
  for (const auto& e : m->boundary_edges()) {
    if (e.normal.x == 1.0 && e.normal.y == 0.0) ++counts[0];
    else if (e.normal.x == -1.0 && e.normal.y == 0.0) ++counts[1];
    else if (e.normal.x == 0.0 && e.normal.y == 1.0) ++counts[2];
    else if (e.normal.x == 0.0 && e.normal.y == -1.0) ++counts[3];
  }
  for (int c : counts) CHECK(c == 2);
}

TEST_CASE("invariants hold for every mesh in the suite") {
  for (int n : {1, 2, 3, 4, 7, 16}) {
    CAPTURE(n);
    check_invariants(*build_unit_square_mesh(n), 1.0);
  }
  check_invariants(*refine_uniform(refine_uniform(build_unit_square_mesh(3))), 1.0);
  check_invariants(*build_square_mesh(5, {1.0, 2.0}, 0.5), 0.25);
}

TEST_CASE("interior edges are shared by exactly two triangles") {
  auto m = build_unit_square_mesh(5);
  std::map<std::pair<int, int>, int> count;
  for (const auto& t : m->triangles()) {
    for (int k = 0; k < 3; ++k) count[{std::min(t[k], t[(k + 1) % 3]), std::max(t[k], t[(k + 1) % 3])}]++;
  }
  int boundary = 0;
  for (const auto& [e, c] : count) {
    CHECK((c == 1 || c == 2));
    boundary += c == 1;
  }
  CHECK(boundary == static_cast<int>(m->boundary_edges().size()));
}

TEST_CASE("refinement nests and matches the structured mesh") {
  auto m1 = build_unit_square_mesh(1);
  auto r1 = refine_uniform(m1);
  auto m2 = build_unit_square_mesh(2);
  CHECK(vertex_set(*r1) == vertex_set(*m2));
  CHECK(triangle_set(*r1) == triangle_set(*m2));

  auto m4 = build_unit_square_mesh(4);
  auto r16 = refine_uniform(refine_uniform(m4));
  CHECK(r16->h() == doctest::Approx(1.0 / 16));
  CHECK(r16->num_triangles() == 16 * m4->num_triangles());
  CHECK(vertex_set(*r16) == vertex_set(*build_unit_square_mesh(16)));
  CHECK(triangle_set(*r16) == triangle_set(*build_unit_square_mesh(16)));
  CHECK(r16->total_area() == doctest::Approx(m4->total_area()).epsilon(1e-12));

  // Coarse vertices keep their positions and indices.
  for (std::size_t v = 0; v < m4->num_vertices(); ++v) {
    CHECK(r16->vertices()[v].x == m4->vertices()[v].x);
    CHECK(r16->vertices()[v].y == m4->vertices()[v].y);
  }
  CHECK(is_descendant(*r16, *m4));
  CHECK_FALSE(is_descendant(*m4, *r16));
  CHECK_FALSE(is_descendant(*build_unit_square_mesh(16), *m4));
}

TEST_CASE("refinement of a general triangle mesh quadruples the triangle count") {
  auto m = std::make_shared<Mesh>(std::vector<Vec2>{{0, 0}, {2, 0}, {0.5, 1.5}, {2.5, 2}},
                                  std::vector<std::array<int, 3>>{{0, 1, 2}, {1, 3, 2}}, 1.0);
  auto r = refine_uniform(m);
  CHECK(r->num_triangles() == 8);
  check_invariants(*r, m->total_area());
}

TEST_CASE("boundary tagging") {
  auto m = build_unit_square_mesh(4);
  auto all_neumann = tag_boundary(m, {});
  CHECK(all_neumann->count_edges(BoundaryTag::NeumannControl) == 16);

  auto right = tag_boundary(m, {BoundarySegment{0, 1.0, 0.0, 1.0}});
  CHECK(right->count_edges(BoundaryTag::DirichletZero) == 4);
  CHECK(right->count_edges(BoundaryTag::NeumannControl) == 12);
  CHECK(right->dirichlet_vertices().size() == 5);
  CHECK(right->geometry_id() == m->geometry_id());

  auto everything = tag_boundary(m, {BoundarySegment{0, 0.0, 0.0, 1.0}, BoundarySegment{0, 1.0, 0.0, 1.0},
                                     BoundarySegment{1, 0.0, 0.0, 1.0}, BoundarySegment{1, 1.0, 0.0, 1.0}});
  CHECK(everything->count_edges(BoundaryTag::NeumannControl) == 0);

  CHECK_THROWS_AS(tag_boundary(m, {BoundarySegment{0, 0.5, 0.0, 1.0}}), InvalidRegion);

  // Tags survive refinement.
  auto fine = refine_uniform(right);
  CHECK(fine->count_edges(BoundaryTag::DirichletZero) == 8);
  CHECK(fine->count_edges(BoundaryTag::NeumannControl) == 24);
}

TEST_CASE("Friedrichs constant") {
  CHECK(friedrichs_constant(*build_unit_square_mesh(3)) == doctest::Approx(2.0));
  CHECK(friedrichs_constant(*build_square_mesh(2, {0, 0}, 0.5)) == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK(friedrichs_constant(*build_square_mesh(2, {1, 1}, 1.0)) == doctest::Approx(8.0));
}

TEST_CASE("mesh dump header lines") {
  std::ostringstream os;
  write_mesh(os, *build_unit_square_mesh(2));
  const std::string s = os.str();
  CHECK(s.find("vertices 9\n") == 0);
  CHECK(s.find("triangles 8\n") != std::string::npos);
  CHECK(s.find("boundary_edges 8\n") != std::string::npos);
}
