#include "minres/poisson_p1.hpp"

namespace minres {

namespace {

Eigen::Matrix3d local_stiffness(const Triangulation& mesh, Index t) {
  const auto g = mesh.barycentric_gradients(t);
  return mesh.area(t) * g * g.transpose();
}

}  // namespace

SparseMatrix assemble_p1_stiffness(const Triangulation& mesh, const P1DofMap& dofs) {
  Triplets trips;
  trips.reserve(9 * mesh.num_elements());
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const Eigen::Matrix3d K = local_stiffness(mesh, t);
    const auto& el = mesh.element(t);
    for (int i = 0; i < 3; ++i) {
      const Index di = dofs.vertex_to_dof[el[i]];
      if (di < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const Index dj = dofs.vertex_to_dof[el[j]];
        if (dj >= 0) trips.emplace_back(di, dj, K(i, j));
      }
    }
  }
  SparseMatrix A(dofs.size(), dofs.size());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

P1Solution solve_poisson_p1(const Triangulation& mesh, const LoadFunctional& f,
                            const ScalarFunction& dirichlet, const SolverOptions& solver,
                            const SingularQuadratureOptions& quadrature) {
  const P1DofMap dofs(mesh);
  Vector lift = Vector::Zero(mesh.num_vertices());
  if (dirichlet) {
    for (Index v = 0; v < mesh.num_vertices(); ++v) {
      if (mesh.is_dirichlet_vertex(v)) lift[v] = dirichlet(mesh.vertex(v));
    }
  }
  Vector b = Vector::Zero(dofs.size());
  const bool has_load = !f.empty();
  const ElementMoments m = has_load ? element_moments(mesh, f, quadrature) : ElementMoments();
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const auto& el = mesh.element(t);
    const Eigen::Matrix3d K = dirichlet ? local_stiffness(mesh, t) : Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) {
      const Index di = dofs.vertex_to_dof[el[i]];
      if (di < 0) continue;
      if (has_load) b[di] += m(t, i);
      if (dirichlet) {
        for (int j = 0; j < 3; ++j) {
          if (dofs.vertex_to_dof[el[j]] < 0) b[di] -= K(i, j) * lift[el[j]];
        }
      }
    }
  }
  P1Solution out;
  const Vector x = solve_spd(assemble_p1_stiffness(mesh, dofs), b, solver, &out.info);
  out.nodal = lift + dofs.expand(x);
  return out;
}

double evaluate_p1(const Triangulation& mesh, const Vector& nodal, Index t, const Point& x) {
  const auto& el = mesh.element(t);
  const Eigen::Vector3d l = mesh.barycentric(t, x);
  return l[0] * nodal[el[0]] + l[1] * nodal[el[1]] + l[2] * nodal[el[2]];
}

Vec2 evaluate_p1_gradient(const Triangulation& mesh, const Vector& nodal, Index t) {
  const auto& el = mesh.element(t);
  const Eigen::Vector3d c(nodal[el[0]], nodal[el[1]], nodal[el[2]]);
  return mesh.barycentric_gradients(t).transpose() * c;
}

}  // namespace minres
