#include "minres/linear_solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <string>

namespace minres {

namespace {

double relative_residual(const SparseMatrix& A, const Vector& x, const Vector& b) {
  const double nb = b.norm();
  const double nr = (b - A * x).norm();
  return nb > 0.0 ? nr / nb : nr;
}

}  // namespace

Vector solve_spd(const SparseMatrix& A, const Vector& b, const SolverOptions& options,
                 SolveInfo* info) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw InvalidArgument("solve_spd: dimension mismatch");
  }
  SolveInfo local;
  local.unknowns = A.rows();
  Vector x;
  if (A.rows() == 0) {
    x = Vector::Zero(0);
  } else if (b.squaredNorm() == 0.0) {
    x = Vector::Zero(A.rows());
  } else {
    bool solved = false;
    if (A.rows() <= options.direct_threshold) {
      Eigen::SimplicialLDLT<SparseMatrix> ldlt(A);
      if (ldlt.info() == Eigen::Success && (ldlt.vectorD().array() > 0.0).all()) {
        x = ldlt.solve(b);
        local.direct = true;
        solved = true;
      } else if (ldlt.info() == Eigen::Success) {
        throw SolverError("matrix is not positive definite", 0, 0.0);
      }
    }
    if (!solved) {
      Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
      cg.setTolerance(options.tolerance);
      cg.setMaxIterations(options.max_iterations);
      cg.compute(A);
      x = cg.solve(b);
      local.iterations = cg.iterations();
      if (cg.info() != Eigen::Success) {
        throw SolverError("conjugate gradients did not converge after " +
                              std::to_string(cg.iterations()) + " iterations (residual " +
                              std::to_string(cg.error()) + ")",
                          cg.iterations(), cg.error());
      }
    }
  }
  local.residual = relative_residual(A, x, b);
  if (info != nullptr) *info = local;
  return x;
}

double symmetry_defect(const SparseMatrix& A) {
  const SparseMatrix At = A.transpose();
  const SparseMatrix D = A - At;
  double dmax = 0.0;
  double amax = 0.0;
  for (int k = 0; k < D.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(D, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
  }
  for (int k = 0; k < A.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(A, k); it; ++it) amax = std::max(amax, std::abs(it.value()));
  }
  return amax > 0.0 ? dmax / amax : dmax;
}

}  // namespace minres
