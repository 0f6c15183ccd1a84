#ifndef MINRES_SPACES_HPP
#define MINRES_SPACES_HPP

#include "minres/mesh.hpp"
#include "minres/quadrature.hpp"

#include <functional>
#include <limits>
#include <vector>

namespace minres {

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Vec2(const Point&)>;
/// Scalar density that may depend on the element the point is taken from
/// (needed for exactly representing discontinuous piecewise data).
using ElementScalarFunction = std::function<double(const Point&, Index element)>;

enum class SpaceKind {
  P0,         ///< one value per element
  P0Vec,      ///< two values (x, y) per element
  P1C,        ///< continuous P1, nodal values at all vertices (zero at Dirichlet vertices)
  P1B,        ///< broken P1, three vertex values per element
  PkB,        ///< broken P^k, coefficients of lambda_1^a lambda_2^b per element
  RT0,        ///< lowest-order Raviart-Thomas, one normal flux per edge
  P1CBubble,  ///< continuous P1 nodal values followed by one bubble amplitude per element
};

/// Coefficient vector tagged with its space. The mesh must outlive the field.
struct DiscreteField {
  SpaceKind kind = SpaceKind::P0;
  int degree = 0;  // polynomial degree, used by PkB
  Vector coefficients;
  const Triangulation* mesh = nullptr;

  static DiscreteField zeros(SpaceKind kind, const Triangulation& mesh, int degree = 0);
  static Index dimension(SpaceKind kind, const Triangulation& mesh, int degree = 0);

  /// Throws InvalidArgument if the coefficient length or constraints are off.
  void validate() const;
};

/// Number of coefficients per element of PkB.
inline Index pk_local_dimension(int k) { return (k + 1) * (k + 2) / 2; }

/// Scalar value on element t at x (P0, P1C, P1B, PkB, P1CBubble).
double evaluate(const DiscreteField& field, Index t, const Point& x);
/// Elementwise gradient on t at x (scalar kinds).
Vec2 evaluate_gradient(const DiscreteField& field, Index t, const Point& x);
/// Vector value on t at x (P0Vec, RT0).
Vec2 evaluate_vector(const DiscreteField& field, Index t, const Point& x);
/// Constant divergence of an RT0 field on t.
double rt0_divergence(const DiscreteField& field, Index t);

/// Local RT0 basis function for local edge j of t (normal component 1 in the
/// global edge orientation).
Vec2 rt0_basis(const Triangulation& mesh, Index t, int j, const Point& x);
double rt0_basis_divergence(const Triangulation& mesh, Index t, int j);

/// Elimination table for continuous P1 with Dirichlet constraints.
struct P1DofMap {
  std::vector<Index> vertex_to_dof;  // -1 for constrained vertices
  std::vector<Index> dof_to_vertex;

  explicit P1DofMap(const Triangulation& mesh);
  Index size() const { return static_cast<Index>(dof_to_vertex.size()); }
  Vector expand(const Vector& reduced) const;
};

/// Continuous P1 nodal interpolant; Dirichlet vertex values are zeroed.
DiscreteField interpolate_p1(const Triangulation& mesh, const ScalarFunction& u);

/// Elementwise means (1/|T|) int_T f.
DiscreteField project_p0(const ElementScalarFunction& f, const Triangulation& mesh,
                         const SingularLocus& locus = {},
                         const SingularQuadratureOptions& options = {});

struct ExactSolution {
  ScalarFunction value;
  VectorFunction gradient;
  SingularLocus locus;
  ScalarFunction density;  // optional -laplace(u)
};

struct ErrorNorms {
  double u_l2 = std::numeric_limits<double>::quiet_NaN();
  double u_h1 = std::numeric_limits<double>::quiet_NaN();  // broken |u - u_h|_{H^1}
  double sigma_l2 = std::numeric_limits<double>::quiet_NaN();
};

/// Quadrature of |u - u_h|^2, |grad u - grad_T u_h|^2 and |grad u - sigma_h|^2.
/// Either field may be null; its entries stay NaN. With `with_gradient`
/// false the H^1 part of u_h is skipped (used when grad u is not in L^2).
ErrorNorms error_norms(const Triangulation& mesh, const DiscreteField* u_h,
                       const DiscreteField* sigma_h, const ExactSolution& exact,
                       bool with_gradient = true, const SingularQuadratureOptions& options = {});

/// L^2 norm of a scalar field.
double l2_norm(const DiscreteField& field);

}  // namespace minres

#endif  // MINRES_SPACES_HPP
