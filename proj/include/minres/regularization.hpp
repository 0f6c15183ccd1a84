#ifndef MINRES_REGULARIZATION_HPP
#define MINRES_REGULARIZATION_HPP

#include "minres/load.hpp"

namespace minres {

/// Dual basis of the hat functions and the normalized bubbles.
///
/// The vertex set is the set of free vertices (no Dirichlet edge attached),
/// which is V_0 for pure Dirichlet problems. For a free vertex z,
/// psi_z = (12 eta_z - 3) / |Omega(z)| on its patch.
struct BiorthogonalBasis {
  std::vector<Index> vertices;        // free vertices
  std::vector<double> patch_area;     // |Omega(z)| per mesh vertex (0 if not free)
  std::vector<double> gamma;          // 60 / |T| per element

  explicit BiorthogonalBasis(const Triangulation& mesh);

  /// psi_z as a broken P1 field.
  DiscreteField psi(const Triangulation& mesh, Index z) const;
};

/// 60 / |T|, so that int_T gamma_T lambda_0 lambda_1 lambda_2 = 1.
inline double bubble_normalization(const Triangulation& mesh, Index t) { return 60.0 / mesh.area(t); }

/// <f, eta_z> for every vertex.
Vector pair_hats(const Triangulation& mesh, const ElementMoments& moments);
/// <f, eta_{b,T}> for every element.
Vector pair_bubbles(const Triangulation& mesh, const ElementMoments& moments);

double pair_hat(const Triangulation& mesh, const LoadFunctional& f, Index z,
                const SingularQuadratureOptions& options = {});
double pair_bubble(const Triangulation& mesh, const LoadFunctional& f, Index t,
                   const SingularQuadratureOptions& options = {});

/// J_h v = sum_z <v, psi_z> eta_z (continuous P1).
DiscreteField apply_Jh(const Triangulation& mesh, const LoadFunctional& v,
                       const SingularQuadratureOptions& options = {});
DiscreteField apply_Jh(const DiscreteField& v);

/// Clement operator: nodal values are patch means of v.
DiscreteField apply_clement(const Triangulation& mesh, const LoadFunctional& v,
                            const SingularQuadratureOptions& options = {});

/// p1 + B_h(v - p1), returned as P1CBubble.
DiscreteField add_bubble_correction(const Triangulation& mesh, const LoadFunctional& v,
                                    const DiscreteField& p1,
                                    const SingularQuadratureOptions& options = {});

/// P_h v = J_h v + B_h(1 - J_h) v (P1CBubble).
DiscreteField apply_Ph(const Triangulation& mesh, const LoadFunctional& v,
                       const SingularQuadratureOptions& options = {});
DiscreteField apply_Ph(const DiscreteField& v);

/// J_h' f = sum_z <f, eta_z> psi_z (broken P1).
DiscreteField apply_Jh_adjoint(const Triangulation& mesh, const Vector& hat_pairings);
/// B_h' f = sum_T <f, eta_{b,T}> chi_T (P0).
DiscreteField apply_Bh_adjoint(const Triangulation& mesh, const Vector& bubble_pairings);

/// P_h' f = J_h' f + (1 - J_h') B_h' f (broken P1).
DiscreteField apply_Ph_adjoint(const Triangulation& mesh, const LoadFunctional& f,
                               const SingularQuadratureOptions& options = {});
/// Q_h f = elementwise mean of P_h' f (P0).
DiscreteField apply_Qh(const Triangulation& mesh, const LoadFunctional& f,
                       const SingularQuadratureOptions& options = {});
DiscreteField elementwise_mean(const DiscreteField& p1b);

/// ||grad w_h|| with w_h the P1 solution of -laplace w = phi on `mesh`
/// refined `extra_levels` times. Discrete stand-in for the H^{-1} norm.
double hminus1_surrogate(const Triangulation& mesh, const LoadFunctional& phi, int extra_levels = 2,
                         const SingularQuadratureOptions& options = {});

}  // namespace minres

#endif  // MINRES_REGULARIZATION_HPP
