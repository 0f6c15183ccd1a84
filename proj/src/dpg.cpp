#include "minres/dpg.hpp"

#include <Eigen/Cholesky>

#include <string>

namespace minres {

namespace {

using Trial = Eigen::Matrix<double, 9, 1>;

// lambda_1^a lambda_2^b ordered by total degree, with gradient.
struct Monomials {
  std::vector<std::pair<int, int>> exps;

  explicit Monomials(int k) {
    for (int d = 0; d <= k; ++d) {
      for (int a = d; a >= 0; --a) exps.emplace_back(a, d - a);
    }
  }
  Index size() const { return static_cast<Index>(exps.size()); }

  void eval(const Eigen::Vector3d& l, const Eigen::Matrix<double, 3, 2>& g, Vector& v,
            Eigen::Matrix<double, Eigen::Dynamic, 2>& grad) const {
    v.resize(size());
    grad.resize(size(), 2);
    for (Index i = 0; i < size(); ++i) {
      const auto [a, b] = exps[i];
      v[i] = std::pow(l[1], a) * std::pow(l[2], b);
      Vec2 d = Vec2::Zero();
      if (a > 0) d += a * std::pow(l[1], a - 1) * std::pow(l[2], b) * g.row(1).transpose();
      if (b > 0) d += b * std::pow(l[1], a) * std::pow(l[2], b - 1) * g.row(2).transpose();
      grad.row(i) = d.transpose();
    }
  }
};

struct CondensedElement {
  Eigen::Matrix3d kff_inv;
  Eigen::Matrix<double, 3, 6> kft;
  Eigen::Vector3d ff;
};

std::array<Index, 6> trace_dofs(const Triangulation& mesh, const P1DofMap& vdofs, Index t) {
  std::array<Index, 6> d{};
  for (int i = 0; i < 3; ++i) d[i] = vdofs.vertex_to_dof[mesh.element(t)[i]];
  for (int j = 0; j < 3; ++j) d[3 + j] = vdofs.size() + mesh.element_edges(t)[j];
  return d;
}

Eigen::LLT<Matrix> factor_gram(const Matrix& G, Index t) {
  Eigen::LLT<Matrix> llt(G);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("local Gram matrix not positive definite on element " + std::to_string(t), t);
  }
  return llt;
}

}  // namespace

LocalDpgSystem local_dpg_system(const Triangulation& mesh, Index t, const DiscreteField& load,
                                int test_increment) {
  if (test_increment < 0) throw InvalidArgument("test increment must be non-negative");
  const Monomials scalar(2 + test_increment);
  const Monomials quad(2);
  const Index ns = scalar.size();
  const Index nq = quad.size();
  const Index n = ns + 2 * nq;
  LocalDpgSystem sys;
  sys.gram = Matrix::Zero(n, n);
  sys.coupling = Matrix::Zero(n, 9);
  sys.rhs = Vector::Zero(n);

  const auto g = mesh.barycentric_gradients(t);
  const PhysicalRule pr = element_rule(mesh, t, triangle_rule(2 * (2 + test_increment)));
  Vector sv, qv;
  Eigen::Matrix<double, Eigen::Dynamic, 2> sg, qg;
  for (std::size_t q = 0; q < pr.size(); ++q) {
    const Point& x = pr.points[q];
    const double w = pr.weights[q];
    const Eigen::Vector3d l = mesh.barycentric(t, x);
    scalar.eval(l, g, sv, sg);
    quad.eval(l, g, qv, qg);
    sys.gram.topLeftCorner(ns, ns).noalias() += w * (sg * sg.transpose() + sv * sv.transpose());
    for (int c = 0; c < 2; ++c) {
      for (int d = 0; d < 2; ++d) {
        // div(m_i e_c) div(m_j e_d) + (m_i e_c).(m_j e_d)
        Matrix block = qg.col(c) * qg.col(d).transpose();
        if (c == d) block += qv * qv.transpose();
        for (Index i = 0; i < nq; ++i) {
          for (Index j = 0; j < nq; ++j) sys.gram(ns + 2 * i + c, ns + 2 * j + d) += w * block(i, j);
        }
      }
    }
    const double f = evaluate_load(load, t, x);
    sys.rhs.head(ns) += w * f * sv;
    // (u, div tau)
    for (Index i = 0; i < nq; ++i) {
      for (int c = 0; c < 2; ++c) sys.coupling(ns + 2 * i + c, 0) += w * qg(i, c);
    }
    // (sigma, grad v + tau)
    for (int c = 0; c < 2; ++c) {
      sys.coupling.block(0, 1 + c, ns, 1) += w * sg.col(c);
      for (Index i = 0; i < nq; ++i) sys.coupling(ns + 2 * i + c, 1 + c) += w * qv[i];
    }
  }

  // Boundary terms -<uhat, tau.n> - <sighat, v> by Gauss on each edge.
  const GaussRule& gl = gauss_legendre(3 + test_increment);
  for (int j = 0; j < 3; ++j) {
    const Index e = mesh.element_edges(t)[j];
    const double sign = mesh.edge_sign(t, j);
    const Vec2 n_out = sign * mesh.edge_normal(e);
    const double len = mesh.edge_length(e);
    const int a = (j + 1) % 3;
    const int b = (j + 2) % 3;
    for (std::size_t q = 0; q < gl.points.size(); ++q) {
      Eigen::Vector3d l = Eigen::Vector3d::Zero();
      l[a] = 1.0 - gl.points[q];
      l[b] = gl.points[q];
      const double w = len * gl.weights[q];
      scalar.eval(l, g, sv, sg);
      quad.eval(l, g, qv, qg);
      sys.coupling.block(0, 6 + j, ns, 1) -= w * sign * sv;
      for (int vi : {a, b}) {
        for (Index i = 0; i < nq; ++i) {
          for (int c = 0; c < 2; ++c) sys.coupling(ns + 2 * i + c, 3 + vi) -= w * l[vi] * qv[i] * n_out[c];
        }
      }
    }
  }
  return sys;
}

DpgSolution solve_dpg_with_load(const Triangulation& mesh, const DiscreteField& load, Regularizer reg,
                                const DpgOptions& options) {
  if (load.mesh != &mesh || (load.kind != SpaceKind::P0 && load.kind != SpaceKind::P1B)) {
    throw InvalidArgument("DPG load must be a P0 or broken P1 field on the same mesh");
  }
  const P1DofMap vdofs(mesh);
  const Index ntrace = vdofs.size() + mesh.num_edges();
  std::vector<CondensedElement> cond(mesh.num_elements());
  std::vector<Matrix> W(mesh.num_elements());
  std::vector<Vector> y(mesh.num_elements());
  Triplets trips;
  trips.reserve(36 * mesh.num_elements());
  Vector rhs = Vector::Zero(ntrace);

  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const LocalDpgSystem loc = local_dpg_system(mesh, t, load, options.test_increment);
    const Eigen::LLT<Matrix> llt = factor_gram(loc.gram, t);
    W[t] = llt.matrixL().solve(loc.coupling);
    y[t] = llt.matrixL().solve(loc.rhs);
    const Eigen::Matrix<double, 9, 9> K = W[t].transpose() * W[t];
    const Trial F = W[t].transpose() * y[t];
    const Eigen::Matrix3d kff = K.topLeftCorner<3, 3>();
    Eigen::LLT<Eigen::Matrix3d> kllt(kff);
    if (kllt.info() != Eigen::Success) {
      throw NumericalError("field block singular on element " + std::to_string(t), t);
    }
    CondensedElement& c = cond[t];
    c.kff_inv = kllt.solve(Eigen::Matrix3d::Identity());
    c.kft = K.topRightCorner<3, 6>();
    c.ff = F.head<3>();
    const Eigen::Matrix<double, 6, 6> S = K.bottomRightCorner<6, 6>() - c.kft.transpose() * c.kff_inv * c.kft;
    const Eigen::Matrix<double, 6, 1> Fs = F.tail<6>() - c.kft.transpose() * c.kff_inv * c.ff;
    const auto dof = trace_dofs(mesh, vdofs, t);
    for (int a = 0; a < 6; ++a) {
      if (dof[a] < 0) continue;
      rhs[dof[a]] += Fs[a];
      for (int b = 0; b < 6; ++b) {
        if (dof[b] >= 0) trips.emplace_back(dof[a], dof[b], S(a, b));
      }
    }
  }
  SparseMatrix A(ntrace, ntrace);
  A.setFromTriplets(trips.begin(), trips.end());

  DpgSolution sol;
  sol.reg = reg;
  sol.test_increment = options.test_increment;
  sol.load = load;
  sol.dofs = 3 * mesh.num_elements() + ntrace;
  const Vector xt = solve_spd(A, rhs, options.solver, &sol.info);

  sol.u = DiscreteField::zeros(SpaceKind::P0, mesh);
  sol.sigma = DiscreteField::zeros(SpaceKind::P0Vec, mesh);
  sol.uhat = DiscreteField::zeros(SpaceKind::P1C, mesh);
  sol.sighat = DiscreteField::zeros(SpaceKind::RT0, mesh);
  sol.uhat.coefficients = vdofs.expand(xt.head(vdofs.size()));
  sol.sighat.coefficients = xt.tail(mesh.num_edges());
  sol.estimator_sq.resize(mesh.num_elements());
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const auto dof = trace_dofs(mesh, vdofs, t);
    Eigen::Matrix<double, 6, 1> xl;
    for (int a = 0; a < 6; ++a) xl[a] = dof[a] < 0 ? 0.0 : xt[dof[a]];
    const Eigen::Vector3d xf = cond[t].kff_inv * (cond[t].ff - cond[t].kft * xl);
    sol.u.coefficients[t] = xf[0];
    sol.sigma.coefficients.segment<2>(2 * t) = xf.tail<2>();
    Trial full;
    full << xf, xl;
    sol.estimator_sq[t] = (y[t] - W[t] * full).squaredNorm();
  }
  return sol;
}

DpgSolution solve_dpg(const Triangulation& mesh, const LoadFunctional& f, Regularizer reg,
                      const DpgOptions& options) {
  if (reg == Regularizer::Pi0) throw InvalidArgument("DPG takes phprime or qh");
  return solve_dpg_with_load(mesh, regularize_load(mesh, f, reg, options.quadrature), reg, options);
}

DpgSolution solve_dpg_point_load(const Triangulation& mesh, const Point& x0, double mass,
                                 const DpgOptions& options) {
  const LoadFunctional f = LoadFunctional::dirac(x0, mass);
  f.validate(mesh);
  return solve_dpg(mesh, f, Regularizer::PhPrime, options);
}

Eigen::Matrix<double, 9, 1> local_trial_vector(const DpgSolution& sol, Index t) {
  const Triangulation& mesh = *sol.u.mesh;
  Trial x;
  x[0] = sol.u.coefficients[t];
  x.segment<2>(1) = sol.sigma.coefficients.segment<2>(2 * t);
  for (int i = 0; i < 3; ++i) x[3 + i] = sol.uhat.coefficients[mesh.element(t)[i]];
  for (int j = 0; j < 3; ++j) x[6 + j] = sol.sighat.coefficients[mesh.element_edges(t)[j]];
  return x;
}

Vector dpg_estimator(const DpgSolution& sol) {
  const Triangulation& mesh = *sol.u.mesh;
  Vector eta(mesh.num_elements());
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const LocalDpgSystem loc = local_dpg_system(mesh, t, sol.load, sol.test_increment);
    const Vector r = loc.rhs - loc.coupling * local_trial_vector(sol, t);
    eta[t] = r.dot(factor_gram(loc.gram, t).solve(r));
  }
  return eta;
}

DiscreteField postprocess(const DpgSolution& sol) {
  const Triangulation& mesh = *sol.u.mesh;
  DiscreteField out = DiscreteField::zeros(SpaceKind::P1B, mesh);
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const Point c = mesh.centroid(t);
    const Vec2 s = sol.sigma.coefficients.segment<2>(2 * t);
    for (int i = 0; i < 3; ++i) {
      out.coefficients[3 * t + i] = sol.u.coefficients[t] + s.dot(mesh.vertex(mesh.element(t)[i]) - c);
    }
  }
  return out;
}

}  // namespace minres
