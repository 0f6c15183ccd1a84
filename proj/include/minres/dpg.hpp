#ifndef MINRES_DPG_HPP
#define MINRES_DPG_HPP

#include "minres/fosls.hpp"

namespace minres {

struct DpgOptions {
  int test_increment = 0;  // scalar test degree is 2 + test_increment
  SolverOptions solver;
  SingularQuadratureOptions quadrature;
};

/// Element matrices of the ultraweak form on the broken test space
/// P^{2+delta}(T) x [P^2(T)]^2.
///
/// Trial order: u, sigma_x, sigma_y, uhat at the three local vertices,
/// sighat on the three local edges. Test order: the scalar monomials
/// lambda_1^a lambda_2^b by total degree, then (m, 0), (0, m) for each
/// quadratic monomial m.
struct LocalDpgSystem {
  Matrix gram;      // V inner product
  Matrix coupling;  // b(trial_j, test_i)
  Vector rhs;       // F_h(test_i)
};

LocalDpgSystem local_dpg_system(const Triangulation& mesh, Index t, const DiscreteField& load,
                                int test_increment);

struct DpgSolution {
  DiscreteField u;       // P0
  DiscreteField sigma;   // P0Vec
  DiscreteField uhat;    // P1C
  DiscreteField sighat;  // RT0 (normal traces)
  Regularizer reg = Regularizer::PhPrime;
  int test_increment = 0;
  DiscreteField load;
  Vector estimator_sq;
  Index dofs = 0;
  SolveInfo info;

  double estimator() const { return std::sqrt(estimator_sq.sum()); }
};

/// F_h(v) = <Q f, v> with Q = P_h' or Q_h.
DpgSolution solve_dpg(const Triangulation& mesh, const LoadFunctional& f, Regularizer reg,
                      const DpgOptions& options = {});

/// Same with a given P0 or broken P1 load.
DpgSolution solve_dpg_with_load(const Triangulation& mesh, const DiscreteField& load, Regularizer reg,
                                const DpgOptions& options = {});

/// Load P_h'(mass * delta_x0).
DpgSolution solve_dpg_point_load(const Triangulation& mesh, const Point& x0, double mass = 1.0,
                                 const DpgOptions& options = {});

/// eta_T^2 = r_T^T G_T^{-1} r_T with r_T the local residual of the solution,
/// recomputed from the element matrices.
Vector dpg_estimator(const DpgSolution& sol);

/// Elementwise affine u* with grad u* = sigma_h and mean u_h (broken P1).
DiscreteField postprocess(const DpgSolution& sol);

/// Local trial coefficients of element t in LocalDpgSystem order.
Eigen::Matrix<double, 9, 1> local_trial_vector(const DpgSolution& sol, Index t);

}  // namespace minres

#endif  // MINRES_DPG_HPP
