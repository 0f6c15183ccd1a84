#ifndef MINRES_MESH_HPP
#define MINRES_MESH_HPP

#include "minres/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace minres {

enum class BoundaryTag : std::uint8_t { Interior, Dirichlet, Neumann };

enum class MeshPattern { Diagonal, Crisscross };

/// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rectangle {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
  bool contains(const Point& p, double tol = 0.0) const {
    return p.x() >= x0 - tol && p.x() <= x1 + tol && p.y() >= y0 - tol && p.y() <= y1 + tol;
  }
  /// Distance from an interior point to the boundary (negative outside).
  double distance_to_boundary(const Point& p) const;
};

enum class RectangleSide { Left, Right, Bottom, Top };

/// Conforming triangulation of a polygonal domain.
///
/// Element vertices are stored counter-clockwise. Local edge j of an element
/// is the edge opposite its local vertex j. Edges are stored as (low, high)
/// vertex pairs, sorted lexicographically; the global edge normal is the
/// tangent (high - low) rotated clockwise. The object is immutable; every
/// modifying operation returns a new mesh.
class Triangulation {
 public:
  using ElementVertices = std::array<Index, 3>;
  using TagFunction = std::function<BoundaryTag(const Point& edge_midpoint)>;

  Triangulation() = default;

  /// Builds adjacency and validates the mesh. Clockwise elements are
  /// reoriented. Boundary edges are tagged by `tags` (Dirichlet if empty).
  Triangulation(std::vector<Point> vertices, std::vector<ElementVertices> elements,
                const TagFunction& tags = {});

  Index num_vertices() const { return static_cast<Index>(vertices_.size()); }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }
  Index num_edges() const { return static_cast<Index>(edges_.size()); }

  const Point& vertex(Index v) const { return vertices_[v]; }
  const std::vector<Point>& vertices() const { return vertices_; }
  const ElementVertices& element(Index t) const { return elements_[t]; }
  const std::vector<ElementVertices>& elements() const { return elements_; }

  /// Global edge indices of element t; entry j is opposite local vertex j.
  const std::array<Index, 3>& element_edges(Index t) const { return element_edges_[t]; }
  /// +1 if the global normal of local edge j points out of element t.
  double edge_sign(Index t, int j) const { return edge_signs_[t][j]; }

  const std::array<Index, 2>& edge(Index e) const { return edges_[e]; }
  /// Adjacent elements; the second entry is -1 on the boundary.
  const std::array<Index, 2>& edge_elements(Index e) const { return edge_elements_[e]; }
  BoundaryTag edge_tag(Index e) const { return edge_tags_[e]; }
  double edge_length(Index e) const;
  Vec2 edge_normal(Index e) const;
  Point edge_midpoint(Index e) const;

  bool is_boundary_vertex(Index v) const { return boundary_vertex_[v] != 0; }
  /// True if the vertex lies on a Dirichlet edge.
  bool is_dirichlet_vertex(Index v) const { return dirichlet_vertex_[v] != 0; }
  /// True if the vertex touches no Dirichlet edge (interior or pure Neumann).
  bool is_free_vertex(Index v) const { return !is_dirichlet_vertex(v); }

  const std::vector<Index>& vertex_elements(Index v) const { return vertex_elements_[v]; }

  double area(Index t) const { return areas_[t]; }
  double diameter(Index t) const { return diameters_[t]; }
  Point centroid(Index t) const;
  double h_max() const { return h_max_; }
  double h_min() const { return h_min_; }
  /// max_T diam(T)^2 / |T|; invariant under red refinement.
  double shape_regularity() const { return shape_regularity_; }
  double total_area() const;

  /// Rows are the (constant) gradients of the barycentric coordinates on t.
  Eigen::Matrix<double, 3, 2> barycentric_gradients(Index t) const;
  Eigen::Vector3d barycentric(Index t, const Point& x) const;
  Point map_from_barycentric(Index t, const Eigen::Vector3d& lambda) const;

  /// #V - #E + #T.
  Index euler_characteristic() const { return num_vertices() - num_edges() + num_elements(); }

  /// Parent element in the coarser mesh this one was refined from (empty for
  /// meshes built directly).
  const std::vector<Index>& parents() const { return parents_; }

  /// Same geometry with boundary edges retagged.
  Triangulation retagged(const TagFunction& tags) const;
  /// Same topology with one vertex moved.
  Triangulation with_vertex_moved(Index v, const Point& position) const;

 private:
  friend Triangulation refine_uniform(const Triangulation& mesh);
  void build(const TagFunction& tags);

  std::vector<Point> vertices_;
  std::vector<ElementVertices> elements_;
  std::vector<std::array<Index, 3>> element_edges_;
  std::vector<std::array<double, 3>> edge_signs_;
  std::vector<std::array<Index, 2>> edges_;
  std::vector<std::array<Index, 2>> edge_elements_;
  std::vector<BoundaryTag> edge_tags_;
  std::vector<std::uint8_t> boundary_vertex_;
  std::vector<std::uint8_t> dirichlet_vertex_;
  std::vector<std::vector<Index>> vertex_elements_;
  std::vector<double> areas_;
  std::vector<double> diameters_;
  std::vector<Index> parents_;
  double h_max_ = 0.0;
  double h_min_ = 0.0;
  double shape_regularity_ = 0.0;
};

/// Tag function marking the listed rectangle sides Neumann, the rest Dirichlet.
Triangulation::TagFunction neumann_sides(const Rectangle& domain, std::vector<RectangleSide> sides);

/// Uniform n x n grid of squares, each split by the (x0,y0)-(x1,y1)
/// diagonal (2n^2 elements) or by both diagonals (4n^2 elements).
Triangulation make_structured_mesh(Index n, const Rectangle& domain, MeshPattern pattern,
                                   const Triangulation::TagFunction& tags = {});

/// Red refinement: each triangle is split into four similar children.
/// Parent vertices keep their indices; edge midpoints follow in edge order.
/// Children of element t are 4t..4t+3 (child 3 is the central one).
Triangulation refine_uniform(const Triangulation& mesh);

struct VertexPatch {
  Index vertex = -1;
  std::vector<Index> elements;
  double area = 0.0;
  Point centroid = Point::Zero();
};

VertexPatch vertex_patch(const Triangulation& mesh, Index z);

struct MeshConditionReport {
  /// (vertex, |s_z - z|) for every interior vertex.
  std::vector<std::pair<Index, double>> deviations;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Checks s_z = z for all interior vertices: pass iff max |s_z - z| <= tol * h.
MeshConditionReport check_mesh_condition(const Triangulation& mesh, double tol = 1e-12);

/// Bucket-grid point location.
class PointLocator {
 public:
  explicit PointLocator(const Triangulation& mesh);
  /// An element whose closure contains x (within a relative tolerance), or -1.
  Index locate(const Point& x) const;

 private:
  const Triangulation* mesh_;
  Eigen::Vector2d origin_;
  double cell_ = 1.0;
  Index nx_ = 1;
  Index ny_ = 1;
  std::vector<std::vector<Index>> buckets_;
};

}  // namespace minres

#endif  // MINRES_MESH_HPP
