#ifndef MINRES_LINEAR_SOLVER_HPP
#define MINRES_LINEAR_SOLVER_HPP

#include "minres/types.hpp"

#include <Eigen/Sparse>

namespace minres {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplets = std::vector<Eigen::Triplet<double>>;

struct SolverOptions {
  double tolerance = 1e-10;          // relative residual for CG
  Index max_iterations = 100000;
  Index direct_threshold = 400000;   // sparse LDL^T up to this many unknowns
};

struct SolveInfo {
  Index unknowns = 0;
  Index iterations = 0;
  double residual = 0.0;  // relative residual ||b - Ax|| / ||b||
  bool direct = false;
};

/// Solves A x = b for symmetric positive definite A. Throws SolverError on
/// breakdown or non-convergence.
Vector solve_spd(const SparseMatrix& A, const Vector& b, const SolverOptions& options = {},
                 SolveInfo* info = nullptr);

/// max |A - A^T| / max |A|.
double symmetry_defect(const SparseMatrix& A);

}  // namespace minres

#endif  // MINRES_LINEAR_SOLVER_HPP
