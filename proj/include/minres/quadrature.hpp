#ifndef MINRES_QUADRATURE_HPP
#define MINRES_QUADRATURE_HPP

#include "minres/mesh.hpp"

#include <functional>
#include <vector>

namespace minres {

/// Gauss-Legendre rule on [0,1].
struct GaussRule {
  std::vector<double> points;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

/// Rule on the reference triangle: barycentric points, weights summing to 1.
struct QuadratureRule {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

/// Collapsed (Duffy) Gauss rule exact for polynomials of total degree
/// `degree`. Every point lies strictly inside the triangle.
const QuadratureRule& triangle_rule(int degree);

/// Physical points with weights that already include the element area.
struct PhysicalRule {
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Where an integrand may be singular: a straight line or a single point.
struct SingularLocus {
  enum class Kind { None, Line, Point };
  Kind kind = Kind::None;
  Point anchor = Point::Zero();
  Vec2 direction = Vec2::UnitX();

  static SingularLocus none() { return {}; }
  static SingularLocus line(const Point& through, const Vec2& dir) {
    return {Kind::Line, through, dir.normalized()};
  }
  static SingularLocus point(const Point& p) { return {Kind::Point, p, Vec2::UnitX()}; }

  /// Signed distance to a line locus.
  double signed_distance(const Point& x) const;
  bool operator==(const SingularLocus&) const = default;
};

/// Composite rule used on elements whose closure meets the singular locus:
/// the element is split so the singularity sits on a sub-triangle vertex or
/// edge, and each piece gets a collapsed rule geometrically graded toward it.
struct SingularQuadratureOptions {
  int base_degree = 10;
  int grading_levels = 36;
  double grading_ratio = 0.5;
  int points_per_level = 8;
};

bool touches_locus(const Triangulation& mesh, Index t, const SingularLocus& locus);

/// Quadrature points on element t: the base rule of `base_degree`, or the
/// graded composite rule if the element touches `locus`.
PhysicalRule element_rule(const Triangulation& mesh, Index t, const SingularLocus& locus = {},
                          const SingularQuadratureOptions& options = {});

PhysicalRule element_rule(const Triangulation& mesh, Index t, const QuadratureRule& rule);

/// Sum of w_q g(x_q) |T|. Non-finite values raise NumericalError naming t.
double integrate(const std::function<double(const Point&)>& g, const Triangulation& mesh, Index t,
                 const QuadratureRule& rule);
double integrate(const std::function<double(const Point&)>& g, Index t, const PhysicalRule& rule);

}  // namespace minres

#endif  // MINRES_QUADRATURE_HPP
