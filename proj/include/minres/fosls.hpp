#ifndef MINRES_FOSLS_HPP
#define MINRES_FOSLS_HPP

#include "minres/linear_solver.hpp"
#include "minres/regularization.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace minres {

enum class Regularizer { Pi0, Qh, PhPrime };

const char* to_string(Regularizer reg);
Regularizer parse_regularizer(const std::string& name);

/// Replaces the load by Pi_h^0 f (P0), Q_h f (P0) or P_h' f (broken P1).
DiscreteField regularize_load(const Triangulation& mesh, const LoadFunctional& f, Regularizer reg,
                              const SingularQuadratureOptions& options = {});

struct FoslsOptions {
  SolverOptions solver;
  SingularQuadratureOptions quadrature;
};

/// -div(A grad u) + alpha . grad u + beta u = f with A constant per element.
struct GeneralCoefficients {
  std::function<Mat2(Index element)> A;
  VectorFunction alpha;  // empty means 0
  ScalarFunction beta;   // empty means 0
  double lower = 1e-12;  // required spectral bounds of A
  double upper = 1e12;

  static GeneralCoefficients laplace();
  void validate(const Triangulation& mesh) const;
};

struct FoslsSolution {
  DiscreteField u;      // P1C
  DiscreteField sigma;  // RT0
  Regularizer reg = Regularizer::Qh;
  GeneralCoefficients coeffs = GeneralCoefficients::laplace();
  DiscreteField load;   // the regularized load actually used
  Vector estimator_sq;  // eta_T^2 per element
  Index dofs = 0;
  SolveInfo info;
  std::vector<std::string> warnings;

  double estimator() const { return std::sqrt(estimator_sq.sum()); }
};

/// Linear system of the least-squares functional. Unknowns: free vertex
/// values followed by RT0 coefficients of edges not on the Neumann boundary.
struct FoslsSystem {
  SparseMatrix matrix;
  Vector rhs;
  P1DofMap vertex_dofs;
  std::vector<Index> edge_to_dof;  // -1 on Neumann edges
  std::vector<Index> dof_to_edge;

  explicit FoslsSystem(const Triangulation& mesh);
  Index size() const { return vertex_dofs.size() + static_cast<Index>(dof_to_edge.size()); }
};

/// Assembles the system for min ||div tau - K v + g||^2 + ||A grad v - tau||^2
/// with g a P0 or broken P1 load.
FoslsSystem assemble_fosls(const Triangulation& mesh, const GeneralCoefficients& coeffs,
                           const DiscreteField& load);

/// Base Poisson problem. reg = Pi0 needs a volume load; PhPrime is rejected
/// (its right-hand side coincides with Qh, see solve_fosls_with_load).
FoslsSolution solve_fosls(const Triangulation& mesh, const LoadFunctional& f, Regularizer reg,
                          const FoslsOptions& options = {});

/// Poisson problem with an already regularized P0 or broken P1 load.
FoslsSolution solve_fosls_with_load(const Triangulation& mesh, const DiscreteField& load,
                                    Regularizer reg, const FoslsOptions& options = {});

/// Load Q_h(mass * delta_x0). Adds a warning if the mesh condition fails.
FoslsSolution solve_fosls_point_load(const Triangulation& mesh, const Point& x0, double mass = 1.0,
                                     const FoslsOptions& options = {});

/// Mixed Dirichlet/Neumann problem with Q_h f built on the non-Dirichlet vertices.
FoslsSolution solve_fosls_general(const Triangulation& mesh, const GeneralCoefficients& coeffs,
                                  const LoadFunctional& f, const FoslsOptions& options = {});

/// eta_T^2 = ||A grad u_h - sigma_h||_T^2 + ||div sigma_h - K u_h + g||_T^2.
Vector fosls_estimator(const Triangulation& mesh, const GeneralCoefficients& coeffs,
                       const DiscreteField& u, const DiscreteField& sigma, const DiscreteField& load);
Vector fosls_estimator(const FoslsSolution& sol);

/// Evaluates a P0 or broken P1 load.
double evaluate_load(const DiscreteField& load, Index t, const Point& x);

}  // namespace minres

#endif  // MINRES_FOSLS_HPP
