#include "minres/fosls.hpp"

#include <Eigen/Eigenvalues>

#include <string>

namespace minres {

namespace {

using Local = Eigen::Matrix<double, 6, 6>;
using LocalVec = Eigen::Matrix<double, 6, 1>;
using Rows = Eigen::Matrix<double, 3, 6>;

constexpr int kAssemblyDegree = 6;

// Residual rows at x: first row div tau - K v, then A grad v - tau.
Rows residual_rows(const Triangulation& mesh, const GeneralCoefficients& c, Index t, const Mat2& A,
                   const Eigen::Matrix<double, 3, 2>& grads, const Point& x) {
  Rows R = Rows::Zero();
  const Eigen::Vector3d l = mesh.barycentric(t, x);
  const Vec2 alpha = c.alpha ? c.alpha(x) : Vec2::Zero();
  const double beta = c.beta ? c.beta(x) : 0.0;
  for (int i = 0; i < 3; ++i) {
    const Vec2 g = grads.row(i).transpose();
    R(0, i) = -alpha.dot(g) - beta * l[i];
    R.block<2, 1>(1, i) = A * g;
  }
  for (int j = 0; j < 3; ++j) {
    R(0, 3 + j) = rt0_basis_divergence(mesh, t, j);
    R.block<2, 1>(1, 3 + j) = -rt0_basis(mesh, t, j, x);
  }
  return R;
}

LocalVec local_coefficients(const Triangulation& mesh, Index t, const DiscreteField& u,
                            const DiscreteField& sigma) {
  LocalVec c;
  for (int i = 0; i < 3; ++i) c[i] = u.coefficients[mesh.element(t)[i]];
  for (int j = 0; j < 3; ++j) c[3 + j] = sigma.coefficients[mesh.element_edges(t)[j]];
  return c;
}

void require_load(const Triangulation& mesh, const DiscreteField& load) {
  if (load.mesh != &mesh) throw InvalidArgument("regularized load lives on a different mesh");
  if (load.kind != SpaceKind::P0 && load.kind != SpaceKind::P1B) {
    throw InvalidArgument("regularized load must be P0 or broken P1");
  }
  load.validate();
}

FoslsSolution solve_system(const Triangulation& mesh, const GeneralCoefficients& coeffs,
                           const DiscreteField& load, Regularizer reg, const FoslsOptions& options) {
  require_load(mesh, load);
  const FoslsSystem sys = assemble_fosls(mesh, coeffs, load);
  FoslsSolution sol;
  sol.reg = reg;
  sol.coeffs = coeffs;
  sol.load = load;
  sol.dofs = sys.size();
  const Vector x = solve_spd(sys.matrix, sys.rhs, options.solver, &sol.info);
  sol.u = DiscreteField::zeros(SpaceKind::P1C, mesh);
  sol.u.coefficients = sys.vertex_dofs.expand(x.head(sys.vertex_dofs.size()));
  sol.sigma = DiscreteField::zeros(SpaceKind::RT0, mesh);
  for (std::size_t k = 0; k < sys.dof_to_edge.size(); ++k) {
    sol.sigma.coefficients[sys.dof_to_edge[k]] = x[sys.vertex_dofs.size() + static_cast<Index>(k)];
  }
  sol.estimator_sq = fosls_estimator(mesh, coeffs, sol.u, sol.sigma, load);
  return sol;
}

}  // namespace

const char* to_string(Regularizer reg) {
  switch (reg) {
    case Regularizer::Pi0: return "pi0";
    case Regularizer::Qh: return "qh";
    case Regularizer::PhPrime: return "phprime";
  }
  return "?";
}

Regularizer parse_regularizer(const std::string& name) {
  if (name == "pi0") return Regularizer::Pi0;
  if (name == "qh") return Regularizer::Qh;
  if (name == "phprime") return Regularizer::PhPrime;
  throw InvalidArgument("unknown regularizer '" + name + "' (expected pi0, qh or phprime)");
}

DiscreteField regularize_load(const Triangulation& mesh, const LoadFunctional& f, Regularizer reg,
                              const SingularQuadratureOptions& options) {
  switch (reg) {
    case Regularizer::Pi0: return project_p0(f, mesh, options);
    case Regularizer::Qh: return apply_Qh(mesh, f, options);
    case Regularizer::PhPrime: return apply_Ph_adjoint(mesh, f, options);
  }
  throw InvalidArgument("unknown regularizer");
}

double evaluate_load(const DiscreteField& load, Index t, const Point& x) {
  return load.kind == SpaceKind::P0 ? load.coefficients[t] : evaluate(load, t, x);
}

GeneralCoefficients GeneralCoefficients::laplace() {
  GeneralCoefficients c;
  c.A = [](Index) { return Mat2::Identity(); };
  return c;
}

void GeneralCoefficients::validate(const Triangulation& mesh) const {
  if (!A) throw InvalidArgument("coefficient A is missing");
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const Mat2 a = A(t);
    if (std::abs(a(0, 1) - a(1, 0)) > 1e-14 * a.norm()) {
      throw InvalidArgument("coefficient A is not symmetric on element " + std::to_string(t));
    }
    const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Mat2>(a).eigenvalues();
    if (ev.minCoeff() < lower || ev.maxCoeff() > upper) {
      throw InvalidArgument("eigenvalues of A outside the admissible range on element " +
                            std::to_string(t));
    }
  }
}

FoslsSystem::FoslsSystem(const Triangulation& mesh)
    : vertex_dofs(mesh), edge_to_dof(mesh.num_edges(), -1) {
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edge_tag(e) == BoundaryTag::Neumann) continue;
    edge_to_dof[e] = vertex_dofs.size() + static_cast<Index>(dof_to_edge.size());
    dof_to_edge.push_back(e);
  }
}

FoslsSystem assemble_fosls(const Triangulation& mesh, const GeneralCoefficients& coeffs,
                           const DiscreteField& load) {
  require_load(mesh, load);
  FoslsSystem sys(mesh);
  const QuadratureRule& rule = triangle_rule(kAssemblyDegree);
  Triplets trips;
  trips.reserve(36 * mesh.num_elements());
  sys.rhs = Vector::Zero(sys.size());
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const PhysicalRule pr = element_rule(mesh, t, rule);
    const auto grads = mesh.barycentric_gradients(t);
    const Mat2 A = coeffs.A(t);
    Local K = Local::Zero();
    LocalVec F = LocalVec::Zero();
    for (std::size_t q = 0; q < pr.size(); ++q) {
      const Rows R = residual_rows(mesh, coeffs, t, A, grads, pr.points[q]);
      K.noalias() += pr.weights[q] * R.transpose() * R;
      F -= pr.weights[q] * evaluate_load(load, t, pr.points[q]) * R.row(0).transpose();
    }
    std::array<Index, 6> dof{};
    for (int i = 0; i < 3; ++i) dof[i] = sys.vertex_dofs.vertex_to_dof[mesh.element(t)[i]];
    for (int j = 0; j < 3; ++j) dof[3 + j] = sys.edge_to_dof[mesh.element_edges(t)[j]];
    for (int a = 0; a < 6; ++a) {
      if (dof[a] < 0) continue;
      sys.rhs[dof[a]] += F[a];
      for (int b = 0; b < 6; ++b) {
        if (dof[b] >= 0) trips.emplace_back(dof[a], dof[b], K(a, b));
      }
    }
  }
  sys.matrix.resize(sys.size(), sys.size());
  sys.matrix.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

Vector fosls_estimator(const Triangulation& mesh, const GeneralCoefficients& coeffs,
                       const DiscreteField& u, const DiscreteField& sigma, const DiscreteField& load) {
  const QuadratureRule& rule = triangle_rule(kAssemblyDegree);
  Vector eta(mesh.num_elements());
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const PhysicalRule pr = element_rule(mesh, t, rule);
    const auto grads = mesh.barycentric_gradients(t);
    const Mat2 A = coeffs.A(t);
    const LocalVec c = local_coefficients(mesh, t, u, sigma);
    double s = 0.0;
    for (std::size_t q = 0; q < pr.size(); ++q) {
      Eigen::Vector3d r = residual_rows(mesh, coeffs, t, A, grads, pr.points[q]) * c;
      r[0] += evaluate_load(load, t, pr.points[q]);
      s += pr.weights[q] * r.squaredNorm();
    }
    eta[t] = s;
  }
  return eta;
}

Vector fosls_estimator(const FoslsSolution& sol) {
  return fosls_estimator(*sol.u.mesh, sol.coeffs, sol.u, sol.sigma, sol.load);
}

FoslsSolution solve_fosls(const Triangulation& mesh, const LoadFunctional& f, Regularizer reg,
                          const FoslsOptions& options) {
  if (reg == Regularizer::PhPrime) {
    throw InvalidArgument("FOSLS takes pi0 or qh; the P_h' right-hand side equals the qh one");
  }
  const DiscreteField load = regularize_load(mesh, f, reg, options.quadrature);
  return solve_system(mesh, GeneralCoefficients::laplace(), load, reg, options);
}

FoslsSolution solve_fosls_with_load(const Triangulation& mesh, const DiscreteField& load,
                                    Regularizer reg, const FoslsOptions& options) {
  return solve_system(mesh, GeneralCoefficients::laplace(), load, reg, options);
}

FoslsSolution solve_fosls_point_load(const Triangulation& mesh, const Point& x0, double mass,
                                     const FoslsOptions& options) {
  const LoadFunctional f = LoadFunctional::dirac(x0, mass);
  f.validate(mesh);
  FoslsSolution sol = solve_fosls(mesh, f, Regularizer::Qh, options);
  const MeshConditionReport report = check_mesh_condition(mesh);
  if (!report.pass) {
    sol.warnings.push_back("mesh violates s_z = z (max deviation " +
                           std::to_string(report.max_deviation) + ")");
  }
  return sol;
}

FoslsSolution solve_fosls_general(const Triangulation& mesh, const GeneralCoefficients& coeffs,
                                  const LoadFunctional& f, const FoslsOptions& options) {
  coeffs.validate(mesh);
  bool has_dirichlet = false;
  for (Index e = 0; e < mesh.num_edges(); ++e) has_dirichlet |= mesh.edge_tag(e) == BoundaryTag::Dirichlet;
  if (!has_dirichlet) throw InvalidArgument("the Dirichlet boundary must have positive measure");
  const DiscreteField load = apply_Qh(mesh, f, options.quadrature);
  return solve_system(mesh, coeffs, load, Regularizer::Qh, options);
}

}  // namespace minres
