#include "minres/regularization.hpp"

#include "minres/poisson_p1.hpp"

#include <cmath>

namespace minres {

namespace {

LoadFunctional field_as_load(const DiscreteField& v) {
  v.validate();
  LoadFunctional f;
  f.volume = [v](const Point& x, Index t) { return evaluate(v, t, x); };
  f.bound_mesh = v.mesh;
  return f;
}

int local_index(const Triangulation& mesh, Index t, Index z) {
  const auto& el = mesh.element(t);
  for (int i = 0; i < 3; ++i) {
    if (el[i] == z) return i;
  }
  return -1;
}

// <v, psi_z> from element moments: sum_T (12 <v, lambda_z>_T - 3 <v, 1>_T) / |Omega(z)|.
Vector dual_coefficients(const Triangulation& mesh, const ElementMoments& m,
                         const BiorthogonalBasis& basis) {
  Vector c = Vector::Zero(mesh.num_vertices());
  for (Index z : basis.vertices) {
    double s = 0.0;
    for (Index t : mesh.vertex_elements(z)) {
      s += 12.0 * m(t, local_index(mesh, t, z)) - 3.0 * m.row(t).head<3>().sum();
    }
    c[z] = s / basis.patch_area[z];
  }
  return c;
}

}  // namespace

BiorthogonalBasis::BiorthogonalBasis(const Triangulation& mesh)
    : patch_area(mesh.num_vertices(), 0.0), gamma(mesh.num_elements()) {
  for (Index z = 0; z < mesh.num_vertices(); ++z) {
    if (!mesh.is_free_vertex(z)) continue;
    vertices.push_back(z);
    for (Index t : mesh.vertex_elements(z)) patch_area[z] += mesh.area(t);
  }
  for (Index t = 0; t < mesh.num_elements(); ++t) gamma[t] = bubble_normalization(mesh, t);
}

DiscreteField BiorthogonalBasis::psi(const Triangulation& mesh, Index z) const {
  if (z < 0 || z >= mesh.num_vertices() || patch_area[z] == 0.0) {
    throw InvalidArgument("psi_z requested for a vertex outside the free set");
  }
  DiscreteField f = DiscreteField::zeros(SpaceKind::P1B, mesh);
  for (Index t : mesh.vertex_elements(z)) {
    const int iz = local_index(mesh, t, z);
    for (int i = 0; i < 3; ++i) f.coefficients[3 * t + i] = (i == iz ? 9.0 : -3.0) / patch_area[z];
  }
  return f;
}

Vector pair_hats(const Triangulation& mesh, const ElementMoments& moments) {
  Vector h = Vector::Zero(mesh.num_vertices());
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const auto& el = mesh.element(t);
    for (int i = 0; i < 3; ++i) h[el[i]] += moments(t, i);
  }
  return h;
}

Vector pair_bubbles(const Triangulation& mesh, const ElementMoments& moments) {
  Vector b(mesh.num_elements());
  for (Index t = 0; t < mesh.num_elements(); ++t) b[t] = bubble_normalization(mesh, t) * moments(t, 3);
  return b;
}

double pair_hat(const Triangulation& mesh, const LoadFunctional& f, Index z,
                const SingularQuadratureOptions& options) {
  return pair_hats(mesh, element_moments(mesh, f, options))[z];
}

double pair_bubble(const Triangulation& mesh, const LoadFunctional& f, Index t,
                   const SingularQuadratureOptions& options) {
  return pair_bubbles(mesh, element_moments(mesh, f, options))[t];
}

DiscreteField apply_Jh(const Triangulation& mesh, const LoadFunctional& v,
                       const SingularQuadratureOptions& options) {
  const BiorthogonalBasis basis(mesh);
  DiscreteField out = DiscreteField::zeros(SpaceKind::P1C, mesh);
  out.coefficients = dual_coefficients(mesh, element_moments(mesh, v, options), basis);
  return out;
}

DiscreteField apply_Jh(const DiscreteField& v) { return apply_Jh(*v.mesh, field_as_load(v)); }

DiscreteField apply_clement(const Triangulation& mesh, const LoadFunctional& v,
                            const SingularQuadratureOptions& options) {
  const ElementMoments m = element_moments(mesh, v, options);
  DiscreteField out = DiscreteField::zeros(SpaceKind::P1C, mesh);
  for (Index z = 0; z < mesh.num_vertices(); ++z) {
    if (!mesh.is_free_vertex(z)) continue;
    double integral = 0.0;
    double area = 0.0;
    for (Index t : mesh.vertex_elements(z)) {
      integral += m.row(t).head<3>().sum();
      area += mesh.area(t);
    }
    out.coefficients[z] = integral / area;
  }
  return out;
}

DiscreteField add_bubble_correction(const Triangulation& mesh, const LoadFunctional& v,
                                    const DiscreteField& p1, const SingularQuadratureOptions& options) {
  if (p1.kind != SpaceKind::P1C) throw InvalidArgument("bubble correction needs a P1C field");
  const ElementMoments m = element_moments(mesh, v, options);
  const Index nv = mesh.num_vertices();
  DiscreteField out = DiscreteField::zeros(SpaceKind::P1CBubble, mesh);
  out.coefficients.head(nv) = p1.coefficients;
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const auto& el = mesh.element(t);
    const double mean_p1 =
        (p1.coefficients[el[0]] + p1.coefficients[el[1]] + p1.coefficients[el[2]]) / 3.0;
    out.coefficients[nv + t] = m.row(t).head<3>().sum() - mean_p1 * mesh.area(t);
  }
  return out;
}

DiscreteField apply_Ph(const Triangulation& mesh, const LoadFunctional& v,
                       const SingularQuadratureOptions& options) {
  return add_bubble_correction(mesh, v, apply_Jh(mesh, v, options), options);
}

DiscreteField apply_Ph(const DiscreteField& v) {
  const LoadFunctional f = field_as_load(v);
  return apply_Ph(*v.mesh, f);
}

DiscreteField apply_Jh_adjoint(const Triangulation& mesh, const Vector& hat_pairings) {
  const BiorthogonalBasis basis(mesh);
  DiscreteField out = DiscreteField::zeros(SpaceKind::P1B, mesh);
  for (Index z : basis.vertices) {
    const double c = hat_pairings[z] / basis.patch_area[z];
    for (Index t : mesh.vertex_elements(z)) {
      const int iz = local_index(mesh, t, z);
      for (int i = 0; i < 3; ++i) out.coefficients[3 * t + i] += (i == iz ? 9.0 : -3.0) * c;
    }
  }
  return out;
}

DiscreteField apply_Bh_adjoint(const Triangulation& mesh, const Vector& bubble_pairings) {
  DiscreteField out = DiscreteField::zeros(SpaceKind::P0, mesh);
  out.coefficients = bubble_pairings;
  return out;
}

DiscreteField apply_Ph_adjoint(const Triangulation& mesh, const LoadFunctional& f,
                               const SingularQuadratureOptions& options) {
  const ElementMoments m = element_moments(mesh, f, options);
  const Vector bubbles = pair_bubbles(mesh, m);
  // <B_h' f, eta_z> = sum_{T in omega(z)} (B_h' f)_T |T| / 3.
  Vector hats_of_bubble = Vector::Zero(mesh.num_vertices());
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    for (Index v : mesh.element(t)) hats_of_bubble[v] += bubbles[t] * mesh.area(t) / 3.0;
  }
  DiscreteField out = apply_Jh_adjoint(mesh, pair_hats(mesh, m) - hats_of_bubble);
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    out.coefficients.segment<3>(3 * t).array() += bubbles[t];
  }
  return out;
}

DiscreteField elementwise_mean(const DiscreteField& p1b) {
  if (p1b.kind != SpaceKind::P1B) throw InvalidArgument("elementwise_mean needs a P1B field");
  DiscreteField out = DiscreteField::zeros(SpaceKind::P0, *p1b.mesh);
  for (Index t = 0; t < out.coefficients.size(); ++t) {
    out.coefficients[t] = p1b.coefficients.segment<3>(3 * t).mean();
  }
  return out;
}

DiscreteField apply_Qh(const Triangulation& mesh, const LoadFunctional& f,
                       const SingularQuadratureOptions& options) {
  return elementwise_mean(apply_Ph_adjoint(mesh, f, options));
}

double hminus1_surrogate(const Triangulation& mesh, const LoadFunctional& phi, int extra_levels,
                         const SingularQuadratureOptions& options) {
  Triangulation fine = mesh;
  std::vector<Index> ancestor(mesh.num_elements());
  for (Index t = 0; t < mesh.num_elements(); ++t) ancestor[t] = t;
  for (int k = 0; k < extra_levels; ++k) {
    fine = refine_uniform(fine);
    std::vector<Index> next(fine.num_elements());
    for (Index t = 0; t < fine.num_elements(); ++t) next[t] = ancestor[fine.parents()[t]];
    ancestor = std::move(next);
  }
  LoadFunctional f = phi;
  if (phi.bound_mesh != nullptr) {
    if (phi.bound_mesh != &mesh) throw InvalidArgument("load is bound to a different mesh");
    f.volume = [v = phi.volume, ancestor](const Point& x, Index t) { return v(x, ancestor[t]); };
    f.bound_mesh = &fine;
  }
  const P1Solution w = solve_poisson_p1(fine, f, {}, {}, options);
  double sum = 0.0;
  for (Index t = 0; t < fine.num_elements(); ++t) {
    sum += fine.area(t) * evaluate_p1_gradient(fine, w.nodal, t).squaredNorm();
  }
  return std::sqrt(sum);
}

}  // namespace minres
