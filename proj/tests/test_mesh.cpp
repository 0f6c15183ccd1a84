#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "minres/mesh.hpp"
#include "minres/mesh_io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

using namespace minres;

namespace {

const Rectangle unit{0.0, 0.0, 1.0, 1.0};

// Interior angles of element t computed from the coordinates.
std::array<double, 3> angles(const Triangulation& m, Index t) {
  std::array<double, 3> a{};
  for (int i = 0; i < 3; ++i) {
    const Point p = m.vertex(m.element(t)[i]);
    const Vec2 u = m.vertex(m.element(t)[(i + 1) % 3]) - p;
    const Vec2 v = m.vertex(m.element(t)[(i + 2) % 3]) - p;
    a[i] = std::acos(u.dot(v) / (u.norm() * v.norm()));
  }
  std::sort(a.begin(), a.end());
  return a;
}

Point brute_force_patch_centroid(const Triangulation& m, Index z) {
  Point s = Point::Zero();
  double area = 0.0;
  for (Index t = 0; t < m.num_elements(); ++t) {
    const auto& el = m.element(t);
    if (std::find(el.begin(), el.end(), z) == el.end()) continue;
    const Point a = m.vertex(el[0]), b = m.vertex(el[1]), c = m.vertex(el[2]);
    const double at = 0.5 * std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
    s += at * (a + b + c) / 3.0;
    area += at;
  }
  return s / area;
}

}  // namespace

TEST_CASE("structured mesh counts") {
  const Triangulation d1 = make_structured_mesh(1, unit, MeshPattern::Diagonal);
  CHECK(d1.num_elements() == 2);
  CHECK(d1.num_vertices() == 4);
  const Triangulation d2 = make_structured_mesh(2, unit, MeshPattern::Diagonal);
  CHECK(d2.num_elements() == 8);
  CHECK(d2.num_vertices() == 9);
  const Triangulation c1 = make_structured_mesh(1, unit, MeshPattern::Crisscross);
  CHECK(c1.num_elements() == 4);
  CHECK(c1.num_vertices() == 5);
  bool has_center = false;
  for (const Point& p : c1.vertices()) has_center |= (p - Point(0.5, 0.5)).norm() < 1e-15;
  CHECK(has_center);
  for (Index e = 0; e < d2.num_edges(); ++e) {
    if (d2.edge_elements(e)[1] < 0) CHECK(d2.edge_tag(e) == BoundaryTag::Dirichlet);
  }
}

TEST_CASE("invalid construction") {
  CHECK_THROWS_AS(make_structured_mesh(0, unit, MeshPattern::Diagonal), InvalidArgument);
  CHECK_THROWS_AS(make_structured_mesh(2, Rectangle{0, 0, 0, 1}, MeshPattern::Diagonal),
                  InvalidArgument);
  std::vector<Point> v{{0, 0}, {1, 0}, {2, 0}};
  CHECK_THROWS_AS(Triangulation(v, {{0, 1, 2}}), InvalidArgument);
}

TEST_CASE("clockwise input is reoriented") {
  const Triangulation m({{0, 0}, {1, 0}, {0, 1}}, {{0, 2, 1}});
  CHECK(m.area(0) == doctest::Approx(0.5));
  const auto& el = m.element(0);
  const Point a = m.vertex(el[0]), b = m.vertex(el[1]), c = m.vertex(el[2]);
  CHECK((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x() > 0.0);
}

TEST_CASE("adjacency invariants and Euler relation") {
  for (MeshPattern p : {MeshPattern::Diagonal, MeshPattern::Crisscross}) {
    Triangulation m = make_structured_mesh(3, Rectangle{-1, -1, 1, 1}, p);
    for (int level = 0; level < 3; ++level) {
      CHECK(m.euler_characteristic() == 1);
      CHECK(std::abs(m.total_area() - 4.0) <= 1e-12 * 4.0);
      std::vector<int> count(m.num_edges(), 0);
      for (Index t = 0; t < m.num_elements(); ++t) {
        CHECK(m.area(t) > 0.0);
        for (int j = 0; j < 3; ++j) ++count[m.element_edges(t)[j]];
      }
      for (Index e = 0; e < m.num_edges(); ++e) {
        const bool boundary = m.edge_elements(e)[1] < 0;
        CHECK(count[e] == (boundary ? 1 : 2));
        if (!boundary) {
          // The two neighbours see the edge with opposite signs.
          double s = 0.0;
          for (Index t : m.edge_elements(e)) {
            for (int j = 0; j < 3; ++j) {
              if (m.element_edges(t)[j] == e) s += m.edge_sign(t, j);
            }
          }
          CHECK(s == 0.0);
        }
      }
      m = refine_uniform(m);
    }
  }
}

TEST_CASE("red refinement") {
  const Triangulation m = make_structured_mesh(1, unit, MeshPattern::Diagonal);
  const Triangulation r = refine_uniform(m);
  CHECK(r.num_elements() == 8);
  CHECK(r.h_max() == doctest::Approx(m.h_max() / 2).epsilon(1e-14));
  CHECK(r.shape_regularity() == doctest::Approx(m.shape_regularity()).epsilon(1e-14));
  REQUIRE(r.parents().size() == 8);
  for (Index c = 0; c < r.num_elements(); ++c) {
    const auto pa = angles(m, r.parents()[c]);
    const auto ca = angles(r, c);
    for (int i = 0; i < 3; ++i) CHECK(ca[i] == doctest::Approx(pa[i]).epsilon(1e-12));
  }
  Triangulation g = make_structured_mesh(2, unit, MeshPattern::Crisscross);
  for (int k = 0; k < 3; ++k) {
    const Index ne = g.num_elements();
    g = refine_uniform(g);
    CHECK(g.num_elements() == 4 * ne);
  }
  for (Index v = 0; v < m.num_vertices(); ++v) CHECK(r.vertex(v) == m.vertex(v));
}

TEST_CASE("boundary tags are inherited") {
  const auto tags = neumann_sides(unit, {RectangleSide::Right, RectangleSide::Top});
  Triangulation m = make_structured_mesh(2, unit, MeshPattern::Diagonal, tags);
  m = refine_uniform(refine_uniform(m));
  for (Index e = 0; e < m.num_edges(); ++e) {
    if (m.edge_elements(e)[1] >= 0) {
      CHECK(m.edge_tag(e) == BoundaryTag::Interior);
      continue;
    }
    const Point c = m.edge_midpoint(e);
    const bool neumann = std::abs(c.x() - 1.0) < 1e-12 || std::abs(c.y() - 1.0) < 1e-12;
    CHECK(m.edge_tag(e) == (neumann ? BoundaryTag::Neumann : BoundaryTag::Dirichlet));
  }
  // A vertex on a Neumann side is free unless it touches a Dirichlet edge.
  for (Index v = 0; v < m.num_vertices(); ++v) {
    const Point p = m.vertex(v);
    const bool on_dirichlet = std::abs(p.x()) < 1e-12 || std::abs(p.y()) < 1e-12;
    CHECK(m.is_dirichlet_vertex(v) == on_dirichlet);
  }
}

TEST_CASE("vertex patches") {
  const double h0 = 0.25;
  const Triangulation m = make_structured_mesh(4, unit, MeshPattern::Diagonal);
  for (Index z = 0; z < m.num_vertices(); ++z) {
    const VertexPatch p = vertex_patch(m, z);
    std::set<Index> expected;
    for (Index t = 0; t < m.num_elements(); ++t) {
      const auto& el = m.element(t);
      if (std::find(el.begin(), el.end(), z) != el.end()) expected.insert(t);
    }
    CHECK(std::set<Index>(p.elements.begin(), p.elements.end()) == expected);
    double area = 0.0;
    for (Index t : p.elements) area += m.area(t);
    CHECK(p.area == doctest::Approx(area).epsilon(1e-14));
    CHECK((p.centroid - brute_force_patch_centroid(m, z)).norm() < 1e-14);
    if (!m.is_boundary_vertex(z)) {
      CHECK(p.elements.size() == 6);
      CHECK(p.area == doctest::Approx(3.0 * h0 * h0).epsilon(1e-14));
    }
  }
  const Triangulation one = make_structured_mesh(1, unit, MeshPattern::Diagonal);
  for (Index z = 0; z < 4; ++z) {
    const std::size_t n = vertex_patch(one, z).elements.size();
    const Point p = one.vertex(z);
    const bool on_diagonal = std::abs(p.x() - p.y()) < 1e-15;
    CHECK(n == (on_diagonal ? 2u : 1u));
  }
}

TEST_CASE("mesh condition") {
  for (MeshPattern p : {MeshPattern::Diagonal, MeshPattern::Crisscross}) {
    for (Index n : {1, 2, 3, 8, 16}) {
      const MeshConditionReport r = check_mesh_condition(make_structured_mesh(n, unit, p));
      CHECK(r.pass);
    }
  }
  Triangulation d = make_structured_mesh(2, Rectangle{-1, -1, 1, 1}, MeshPattern::Diagonal);
  for (int k = 0; k < 4; ++k) {
    d = refine_uniform(d);
    CHECK(check_mesh_condition(d).pass);
  }
  // Red refinement of the crisscross pattern creates edge-midpoint vertices
  // whose patches are not centred.
  const Triangulation c = refine_uniform(make_structured_mesh(2, unit, MeshPattern::Crisscross));
  CHECK_FALSE(check_mesh_condition(c).pass);

  const Triangulation m = make_structured_mesh(8, unit, MeshPattern::Diagonal);
  Index z = -1;
  for (Index v = 0; v < m.num_vertices(); ++v) {
    if ((m.vertex(v) - Point(0.5, 0.5)).norm() < 1e-14) z = v;
  }
  REQUIRE(z >= 0);
  const double h = 1.0 / 8.0;
  const Triangulation moved = m.with_vertex_moved(z, m.vertex(z) + Point(0.1 * h, 0.0));
  const MeshConditionReport r = check_mesh_condition(moved);
  CHECK_FALSE(r.pass);
  const double expected = (brute_force_patch_centroid(moved, z) - moved.vertex(z)).norm();
  CHECK(r.max_deviation == doctest::Approx(expected).epsilon(1e-10));
  CHECK(r.max_deviation > 0.05 * h);
  CHECK(r.max_deviation < 0.1 * h);
}

TEST_CASE("point location") {
  const Triangulation m = make_structured_mesh(7, Rectangle{-1, -1, 1, 1}, MeshPattern::Crisscross);
  const PointLocator loc(m);
  for (const Point& x : {Point(0, 0), Point(-1, -1), Point(0.3, -0.77), Point(1, 0.2)}) {
    const Index t = loc.locate(x);
    REQUIRE(t >= 0);
    CHECK(m.barycentric(t, x).minCoeff() >= -1e-12);
  }
  CHECK(loc.locate(Point(1.5, 0.0)) == -1);
}

TEST_CASE("text round trip") {
  const auto tags = neumann_sides(unit, {RectangleSide::Left});
  const Triangulation m = make_structured_mesh(3, unit, MeshPattern::Crisscross, tags);
  const auto path = std::filesystem::temp_directory_path() / "minres_mesh_roundtrip.txt";
  write_mesh(m, path.string());
  const Triangulation r = read_mesh(path.string());
  CHECK(r.num_vertices() == m.num_vertices());
  CHECK(r.num_elements() == m.num_elements());
  for (Index v = 0; v < m.num_vertices(); ++v) CHECK(r.vertex(v) == m.vertex(v));
  for (Index e = 0; e < m.num_edges(); ++e) CHECK(r.edge_tag(e) == m.edge_tag(e));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_mesh("/nonexistent/mesh.txt"), IoError);
}
