#ifndef MINRES_POISSON_P1_HPP
#define MINRES_POISSON_P1_HPP

#include "minres/linear_solver.hpp"
#include "minres/load.hpp"

namespace minres {

struct P1Solution {
  Vector nodal;  // values at all vertices, including the Dirichlet ones
  SolveInfo info;
};

/// Stiffness matrix (grad eta_i, grad eta_j) on the free vertices of `dofs`.
SparseMatrix assemble_p1_stiffness(const Triangulation& mesh, const P1DofMap& dofs);

/// Conforming P1 Galerkin solution of -laplace u = f with u = g (nodal
/// interpolant) on Dirichlet vertices; g = 0 if empty.
P1Solution solve_poisson_p1(const Triangulation& mesh, const LoadFunctional& f,
                            const ScalarFunction& dirichlet = {}, const SolverOptions& solver = {},
                            const SingularQuadratureOptions& quadrature = {});

/// Value of a nodal P1 vector at x on element t.
double evaluate_p1(const Triangulation& mesh, const Vector& nodal, Index t, const Point& x);
Vec2 evaluate_p1_gradient(const Triangulation& mesh, const Vector& nodal, Index t);

}  // namespace minres

#endif  // MINRES_POISSON_P1_HPP
