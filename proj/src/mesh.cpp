#include "minres/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <tuple>

namespace minres {

namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace

double Rectangle::distance_to_boundary(const Point& p) const {
  return std::min({p.x() - x0, x1 - p.x(), p.y() - y0, y1 - p.y()});
}

Triangulation::Triangulation(std::vector<Point> vertices, std::vector<ElementVertices> elements,
                             const TagFunction& tags)
    : vertices_(std::move(vertices)), elements_(std::move(elements)) {
  build(tags);
}

void Triangulation::build(const TagFunction& tags) {
  const Index nv = num_vertices();
  const Index nt = num_elements();
  if (nt == 0) throw InvalidArgument("triangulation has no elements");

  areas_.resize(nt);
  diameters_.resize(nt);
  for (Index t = 0; t < nt; ++t) {
    auto& el = elements_[t];
    for (Index v : el) {
      if (v < 0 || v >= nv) {
        throw InvalidArgument("element " + std::to_string(t) + " references vertex " +
                              std::to_string(v) + " out of range");
      }
    }
    double twice =
        cross(vertices_[el[1]] - vertices_[el[0]], vertices_[el[2]] - vertices_[el[0]]);
    if (twice < 0.0) {
      std::swap(el[1], el[2]);
      twice = -twice;
    }
    const double diam = std::max({(vertices_[el[1]] - vertices_[el[0]]).norm(),
                                  (vertices_[el[2]] - vertices_[el[1]]).norm(),
                                  (vertices_[el[0]] - vertices_[el[2]]).norm()});
    if (!(twice > 1e-14 * diam * diam)) {
      throw InvalidArgument("element " + std::to_string(t) + " is degenerate");
    }
    areas_[t] = 0.5 * twice;
    diameters_[t] = diam;
  }

  // Edges: sort (low, high, element, local) tuples.
  std::vector<std::tuple<Index, Index, Index, int>> half_edges;
  half_edges.reserve(3 * nt);
  for (Index t = 0; t < nt; ++t) {
    const auto& el = elements_[t];
    for (int j = 0; j < 3; ++j) {
      Index a = el[(j + 1) % 3];
      Index b = el[(j + 2) % 3];
      half_edges.emplace_back(std::min(a, b), std::max(a, b), t, j);
    }
  }
  std::sort(half_edges.begin(), half_edges.end());

  edges_.clear();
  edge_elements_.clear();
  element_edges_.assign(nt, {-1, -1, -1});
  edge_signs_.assign(nt, {0.0, 0.0, 0.0});
  for (std::size_t k = 0; k < half_edges.size();) {
    const auto [a, b, t0, j0] = half_edges[k];
    std::size_t m = k + 1;
    while (m < half_edges.size() && std::get<0>(half_edges[m]) == a &&
           std::get<1>(half_edges[m]) == b) {
      ++m;
    }
    if (m - k > 2) {
      throw InvalidArgument("edge (" + std::to_string(a) + "," + std::to_string(b) +
                            ") shared by more than two elements");
    }
    const Index e = static_cast<Index>(edges_.size());
    edges_.push_back({a, b});
    std::array<Index, 2> adj{-1, -1};
    for (std::size_t q = k; q < m; ++q) {
      const auto [qa, qb, t, j] = half_edges[q];
      adj[q - k] = t;
      element_edges_[t][j] = e;
      // Outward direction coincides with the global normal iff the CCW
      // traversal of the element runs low -> high along this edge.
      edge_signs_[t][j] = (elements_[t][(j + 1) % 3] == a) ? 1.0 : -1.0;
    }
    edge_elements_.push_back(adj);
    k = m;
  }

  // Consistency: an interior edge must be traversed in opposite directions.
  for (Index e = 0; e < num_edges(); ++e) {
    const auto& adj = edge_elements_[e];
    if (adj[1] < 0) continue;
    double s0 = 0.0;
    double s1 = 0.0;
    for (int j = 0; j < 3; ++j) {
      if (element_edges_[adj[0]][j] == e) s0 = edge_signs_[adj[0]][j];
      if (element_edges_[adj[1]][j] == e) s1 = edge_signs_[adj[1]][j];
    }
    if (s0 * s1 >= 0.0) {
      throw InvalidArgument("inconsistent orientation across edge " + std::to_string(e));
    }
  }

  edge_tags_.assign(num_edges(), BoundaryTag::Interior);
  boundary_vertex_.assign(nv, 0);
  dirichlet_vertex_.assign(nv, 0);
  for (Index e = 0; e < num_edges(); ++e) {
    if (edge_elements_[e][1] >= 0) continue;
    BoundaryTag tag = tags ? tags(edge_midpoint(e)) : BoundaryTag::Dirichlet;
    if (tag == BoundaryTag::Interior) tag = BoundaryTag::Dirichlet;
    edge_tags_[e] = tag;
    for (Index v : edges_[e]) {
      boundary_vertex_[v] = 1;
      if (tag == BoundaryTag::Dirichlet) dirichlet_vertex_[v] = 1;
    }
  }

  vertex_elements_.assign(nv, {});
  for (Index t = 0; t < nt; ++t) {
    for (Index v : elements_[t]) vertex_elements_[v].push_back(t);
  }

  h_max_ = *std::max_element(diameters_.begin(), diameters_.end());
  h_min_ = *std::min_element(diameters_.begin(), diameters_.end());
  shape_regularity_ = 0.0;
  for (Index t = 0; t < nt; ++t) {
    shape_regularity_ = std::max(shape_regularity_, diameters_[t] * diameters_[t] / areas_[t]);
  }
}

double Triangulation::edge_length(Index e) const {
  return (vertices_[edges_[e][1]] - vertices_[edges_[e][0]]).norm();
}

Vec2 Triangulation::edge_normal(Index e) const {
  const Vec2 t = vertices_[edges_[e][1]] - vertices_[edges_[e][0]];
  return Vec2(t.y(), -t.x()) / t.norm();
}

Point Triangulation::edge_midpoint(Index e) const {
  return 0.5 * (vertices_[edges_[e][0]] + vertices_[edges_[e][1]]);
}

Point Triangulation::centroid(Index t) const {
  const auto& el = elements_[t];
  return (vertices_[el[0]] + vertices_[el[1]] + vertices_[el[2]]) / 3.0;
}

double Triangulation::total_area() const {
  double sum = 0.0;
  for (double a : areas_) sum += a;
  return sum;
}

Eigen::Matrix<double, 3, 2> Triangulation::barycentric_gradients(Index t) const {
  const auto& el = elements_[t];
  const double inv = 1.0 / (2.0 * areas_[t]);
  Eigen::Matrix<double, 3, 2> g;
  for (int i = 0; i < 3; ++i) {
    const Point& p = vertices_[el[(i + 1) % 3]];
    const Point& q = vertices_[el[(i + 2) % 3]];
    g(i, 0) = (p.y() - q.y()) * inv;
    g(i, 1) = (q.x() - p.x()) * inv;
  }
  return g;
}

Eigen::Vector3d Triangulation::barycentric(Index t, const Point& x) const {
  const auto& el = elements_[t];
  const double inv = 1.0 / (2.0 * areas_[t]);
  Eigen::Vector3d lambda;
  for (int i = 0; i < 3; ++i) {
    const Point& p = vertices_[el[(i + 1) % 3]];
    const Point& q = vertices_[el[(i + 2) % 3]];
    lambda[i] = cross(q - p, x - p) * inv;
  }
  return lambda;
}

Point Triangulation::map_from_barycentric(Index t, const Eigen::Vector3d& lambda) const {
  const auto& el = elements_[t];
  return lambda[0] * vertices_[el[0]] + lambda[1] * vertices_[el[1]] + lambda[2] * vertices_[el[2]];
}

Triangulation Triangulation::retagged(const TagFunction& tags) const {
  return Triangulation(vertices_, elements_, tags);
}

Triangulation Triangulation::with_vertex_moved(Index v, const Point& position) const {
  if (v < 0 || v >= num_vertices()) throw InvalidArgument("vertex index out of range");
  auto copy = vertices_;
  copy[v] = position;
  // Tags follow edges, so look them up by (old) edge identity.
  std::map<std::pair<Index, Index>, BoundaryTag> by_edge;
  for (Index e = 0; e < num_edges(); ++e) by_edge[{edges_[e][0], edges_[e][1]}] = edge_tags_[e];
  Triangulation out;
  out.vertices_ = std::move(copy);
  out.elements_ = elements_;
  out.parents_ = parents_;
  out.build({});
  for (Index e = 0; e < out.num_edges(); ++e) {
    if (out.edge_elements_[e][1] >= 0) continue;
    out.edge_tags_[e] = by_edge.at({out.edges_[e][0], out.edges_[e][1]});
  }
  out.dirichlet_vertex_.assign(out.num_vertices(), 0);
  for (Index e = 0; e < out.num_edges(); ++e) {
    if (out.edge_tags_[e] == BoundaryTag::Dirichlet) {
      for (Index w : out.edges_[e]) out.dirichlet_vertex_[w] = 1;
    }
  }
  return out;
}

Triangulation::TagFunction neumann_sides(const Rectangle& domain, std::vector<RectangleSide> sides) {
  return [domain, sides = std::move(sides)](const Point& m) {
    const double tol = 1e-12 * std::max(domain.x1 - domain.x0, domain.y1 - domain.y0);
    for (RectangleSide s : sides) {
      const bool on = (s == RectangleSide::Left && std::abs(m.x() - domain.x0) < tol) ||
                      (s == RectangleSide::Right && std::abs(m.x() - domain.x1) < tol) ||
                      (s == RectangleSide::Bottom && std::abs(m.y() - domain.y0) < tol) ||
                      (s == RectangleSide::Top && std::abs(m.y() - domain.y1) < tol);
      if (on) return BoundaryTag::Neumann;
    }
    return BoundaryTag::Dirichlet;
  };
}

Triangulation make_structured_mesh(Index n, const Rectangle& domain, MeshPattern pattern,
                                   const Triangulation::TagFunction& tags) {
  if (n < 1) throw InvalidArgument("structured mesh needs n >= 1");
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0)) {
    throw InvalidArgument("degenerate rectangle");
  }
  const double dx = (domain.x1 - domain.x0) / static_cast<double>(n);
  const double dy = (domain.y1 - domain.y0) / static_cast<double>(n);
  std::vector<Point> vertices;
  vertices.reserve((n + 1) * (n + 1) + (pattern == MeshPattern::Crisscross ? n * n : 0));
  for (Index j = 0; j <= n; ++j) {
    for (Index i = 0; i <= n; ++i) {
      const double x = i == n ? domain.x1 : domain.x0 + static_cast<double>(i) * dx;
      const double y = j == n ? domain.y1 : domain.y0 + static_cast<double>(j) * dy;
      vertices.emplace_back(x, y);
    }
  }
  auto id = [n](Index i, Index j) { return j * (n + 1) + i; };
  std::vector<Triangulation::ElementVertices> elements;
  if (pattern == MeshPattern::Diagonal) {
    elements.reserve(2 * n * n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
        elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      }
    }
  } else {
    const Index base = (n + 1) * (n + 1);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        vertices.push_back(0.25 * (vertices[id(i, j)] + vertices[id(i + 1, j)] +
                                   vertices[id(i, j + 1)] + vertices[id(i + 1, j + 1)]));
      }
    }
    elements.reserve(4 * n * n);
    for (Index j = 0; j < n; ++j) {
      for (Index i = 0; i < n; ++i) {
        const Index c = base + j * n + i;
        elements.push_back({id(i, j), id(i + 1, j), c});
        elements.push_back({id(i + 1, j), id(i + 1, j + 1), c});
        elements.push_back({id(i + 1, j + 1), id(i, j + 1), c});
        elements.push_back({id(i, j + 1), id(i, j), c});
      }
    }
  }
  return Triangulation(std::move(vertices), std::move(elements), tags);
}

Triangulation refine_uniform(const Triangulation& mesh) {
  const Index nv = mesh.num_vertices();
  const Index nt = mesh.num_elements();
  Triangulation out;
  out.vertices_ = mesh.vertices_;
  out.vertices_.reserve(nv + mesh.num_edges());
  for (Index e = 0; e < mesh.num_edges(); ++e) out.vertices_.push_back(mesh.edge_midpoint(e));

  out.elements_.reserve(4 * nt);
  out.parents_.reserve(4 * nt);
  for (Index t = 0; t < nt; ++t) {
    const auto& el = mesh.element(t);
    const auto& ed = mesh.element_edges(t);
    const Index m0 = nv + ed[0];
    const Index m1 = nv + ed[1];
    const Index m2 = nv + ed[2];
    out.elements_.push_back({el[0], m2, m1});
    out.elements_.push_back({m2, el[1], m0});
    out.elements_.push_back({m1, m0, el[2]});
    out.elements_.push_back({m0, m1, m2});
    for (int k = 0; k < 4; ++k) out.parents_.push_back(t);
  }
  out.build({});

  // A child boundary edge joins a parent vertex and the midpoint of a parent
  // boundary edge; it inherits that edge's tag.
  out.dirichlet_vertex_.assign(out.num_vertices(), 0);
  for (Index e = 0; e < out.num_edges(); ++e) {
    if (out.edge_elements_[e][1] >= 0) continue;
    const Index mid = out.edges_[e][1];  // midpoints have the larger index
    const BoundaryTag tag = mesh.edge_tag(mid - nv);
    out.edge_tags_[e] = tag;
    if (tag == BoundaryTag::Dirichlet) {
      for (Index w : out.edges_[e]) out.dirichlet_vertex_[w] = 1;
    }
  }
  return out;
}

VertexPatch vertex_patch(const Triangulation& mesh, Index z) {
  if (z < 0 || z >= mesh.num_vertices()) throw InvalidArgument("vertex index out of range");
  VertexPatch patch;
  patch.vertex = z;
  patch.elements = mesh.vertex_elements(z);
  const Point& pz = mesh.vertex(z);
  Vec2 offset = Vec2::Zero();
  for (Index t : patch.elements) {
    const auto& el = mesh.element(t);
    const Vec2 rel =
        ((mesh.vertex(el[0]) - pz) + (mesh.vertex(el[1]) - pz) + (mesh.vertex(el[2]) - pz)) / 3.0;
    patch.area += mesh.area(t);
    offset += mesh.area(t) * rel;
  }
  patch.centroid = pz + offset / patch.area;
  return patch;
}

MeshConditionReport check_mesh_condition(const Triangulation& mesh, double tol) {
  MeshConditionReport report;
  report.tolerance = tol * mesh.h_max();
  for (Index z = 0; z < mesh.num_vertices(); ++z) {
    if (mesh.is_boundary_vertex(z)) continue;
    const Point& pz = mesh.vertex(z);
    Vec2 offset = Vec2::Zero();
    double area = 0.0;
    for (Index t : mesh.vertex_elements(z)) {
      const auto& el = mesh.element(t);
      const Vec2 rel =
          ((mesh.vertex(el[0]) - pz) + (mesh.vertex(el[1]) - pz) + (mesh.vertex(el[2]) - pz)) / 3.0;
      area += mesh.area(t);
      offset += mesh.area(t) * rel;
    }
    const double dev = (offset / area).norm();
    report.deviations.emplace_back(z, dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.pass = report.max_deviation <= report.tolerance;
  return report;
}

PointLocator::PointLocator(const Triangulation& mesh) : mesh_(&mesh) {
  Eigen::Vector2d lo = mesh.vertex(0);
  Eigen::Vector2d hi = mesh.vertex(0);
  for (const Point& p : mesh.vertices()) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::Vector2d ext = (hi - lo).cwiseMax(1e-300);
  const double target = std::sqrt(ext.x() * ext.y() / static_cast<double>(mesh.num_elements()));
  cell_ = std::max(target, 1e-300);
  nx_ = std::max<Index>(1, static_cast<Index>(std::ceil(ext.x() / cell_)));
  ny_ = std::max<Index>(1, static_cast<Index>(std::ceil(ext.y() / cell_)));
  origin_ = lo;
  buckets_.assign(nx_ * ny_, {});
  auto clamp_x = [this](double v) {
    return std::clamp<Index>(static_cast<Index>(std::floor(v)), 0, nx_ - 1);
  };
  auto clamp_y = [this](double v) {
    return std::clamp<Index>(static_cast<Index>(std::floor(v)), 0, ny_ - 1);
  };
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const auto& el = mesh.element(t);
    Eigen::Vector2d blo = mesh.vertex(el[0]);
    Eigen::Vector2d bhi = blo;
    for (int k = 1; k < 3; ++k) {
      blo = blo.cwiseMin(mesh.vertex(el[k]));
      bhi = bhi.cwiseMax(mesh.vertex(el[k]));
    }
    const Index i0 = clamp_x((blo.x() - origin_.x()) / cell_);
    const Index i1 = clamp_x((bhi.x() - origin_.x()) / cell_);
    const Index j0 = clamp_y((blo.y() - origin_.y()) / cell_);
    const Index j1 = clamp_y((bhi.y() - origin_.y()) / cell_);
    for (Index j = j0; j <= j1; ++j) {
      for (Index i = i0; i <= i1; ++i) buckets_[j * nx_ + i].push_back(t);
    }
  }
}

Index PointLocator::locate(const Point& x) const {
  const double fx = (x.x() - origin_.x()) / cell_;
  const double fy = (x.y() - origin_.y()) / cell_;
  if (fx < -1e-9 || fy < -1e-9 || fx > static_cast<double>(nx_) + 1e-9 ||
      fy > static_cast<double>(ny_) + 1e-9) {
    return -1;
  }
  const Index i = std::clamp<Index>(static_cast<Index>(std::floor(fx)), 0, nx_ - 1);
  const Index j = std::clamp<Index>(static_cast<Index>(std::floor(fy)), 0, ny_ - 1);
  Index best = -1;
  double best_min = -std::numeric_limits<double>::infinity();
  for (Index t : buckets_[j * nx_ + i]) {
    const double m = mesh_->barycentric(t, x).minCoeff();
    if (m >= 0.0) return t;
    if (m > best_min) {
      best_min = m;
      best = t;
    }
  }
  return best_min > -1e-10 ? best : -1;
}

}  // namespace minres
