#ifndef MINRES_LOAD_HPP
#define MINRES_LOAD_HPP

#include "minres/spaces.hpp"

#include <vector>

namespace minres {

struct PointMass {
  Point position = Point::Zero();
  double mass = 1.0;
};

/// Right-hand side <f, v> = <g0, v> + <g, grad v> + sum_i c_i v(x_i).
///
/// The volume density may depend on the element index (piecewise data);
/// such a density is bound to one mesh and `bound_mesh` records it.
struct LoadFunctional {
  ElementScalarFunction volume;
  VectorFunction gradient;
  std::vector<PointMass> point_masses;
  SingularLocus locus;
  const Triangulation* bound_mesh = nullptr;

  static LoadFunctional density(ScalarFunction g0, const SingularLocus& locus = {});
  static LoadFunctional gradient_form(VectorFunction g, const SingularLocus& locus = {});
  static LoadFunctional dirac(const Point& x, double mass = 1.0);
  /// Exact representation of a P0 field on its own mesh.
  static LoadFunctional piecewise_constant(const DiscreteField& p0);

  bool has_volume() const { return static_cast<bool>(volume); }
  bool has_gradient() const { return static_cast<bool>(gradient); }
  bool has_point_masses() const { return !point_masses.empty(); }
  bool empty() const { return !has_volume() && !has_gradient() && !has_point_masses(); }
  /// True for an L^2 density without gradient or point parts.
  bool is_volume_only() const { return has_volume() && !has_gradient() && !has_point_masses(); }

  /// Checks the representation against a mesh: non-empty, mesh binding,
  /// point masses strictly inside the domain.
  void validate(const Triangulation& mesh) const;
};

LoadFunctional operator+(const LoadFunctional& a, const LoadFunctional& b);
LoadFunctional operator*(double s, const LoadFunctional& f);

/// Per element: <f, lambda_0>_T, <f, lambda_1>_T, <f, lambda_2>_T and
/// <f, lambda_0 lambda_1 lambda_2>_T (local vertex order).
using ElementMoments = Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor>;

ElementMoments element_moments(const Triangulation& mesh, const LoadFunctional& f,
                               const SingularQuadratureOptions& options = {});

/// Elementwise means of an L^2 load. Gradient or point parts raise
/// UnsupportedRepresentation.
DiscreteField project_p0(const LoadFunctional& f, const Triangulation& mesh,
                         const SingularQuadratureOptions& options = {});

/// The load evaluated against a discrete field by quadrature (point masses
/// by point evaluation). Used by tests and the residual checks.
double apply_load(const LoadFunctional& f, const DiscreteField& v,
                  const SingularQuadratureOptions& options = {});

}  // namespace minres

#endif  // MINRES_LOAD_HPP
