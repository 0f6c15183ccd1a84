#include "minres/spaces.hpp"

#include <cmath>
#include <string>

namespace minres {

namespace {

const char* kind_name(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::P0: return "P0";
    case SpaceKind::P0Vec: return "P0Vec";
    case SpaceKind::P1C: return "P1C";
    case SpaceKind::P1B: return "P1B";
    case SpaceKind::PkB: return "PkB";
    case SpaceKind::RT0: return "RT0";
    case SpaceKind::P1CBubble: return "P1CBubble";
  }
  return "?";
}

void require_mesh(const DiscreteField& f) {
  if (f.mesh == nullptr) throw InvalidArgument("discrete field has no mesh");
}

// lambda_1^a lambda_2^b and its gradient, ordered by total degree.
double pk_basis(int k, Index i, const Eigen::Vector3d& lambda) {
  Index idx = 0;
  for (int d = 0; d <= k; ++d) {
    for (int a = d; a >= 0; --a, ++idx) {
      if (idx == i) return std::pow(lambda[1], a) * std::pow(lambda[2], d - a);
    }
  }
  return 0.0;
}

Vec2 pk_basis_gradient(int k, Index i, const Eigen::Vector3d& lambda,
                       const Eigen::Matrix<double, 3, 2>& grads) {
  Index idx = 0;
  for (int d = 0; d <= k; ++d) {
    for (int a = d; a >= 0; --a, ++idx) {
      if (idx != i) continue;
      const int b = d - a;
      Vec2 g = Vec2::Zero();
      if (a > 0) g += a * std::pow(lambda[1], a - 1) * std::pow(lambda[2], b) * grads.row(1).transpose();
      if (b > 0) g += b * std::pow(lambda[1], a) * std::pow(lambda[2], b - 1) * grads.row(2).transpose();
      return g;
    }
  }
  return Vec2::Zero();
}

}  // namespace

Index DiscreteField::dimension(SpaceKind kind, const Triangulation& mesh, int degree) {
  switch (kind) {
    case SpaceKind::P0: return mesh.num_elements();
    case SpaceKind::P0Vec: return 2 * mesh.num_elements();
    case SpaceKind::P1C: return mesh.num_vertices();
    case SpaceKind::P1B: return 3 * mesh.num_elements();
    case SpaceKind::PkB: return pk_local_dimension(degree) * mesh.num_elements();
    case SpaceKind::RT0: return mesh.num_edges();
    case SpaceKind::P1CBubble: return mesh.num_vertices() + mesh.num_elements();
  }
  return 0;
}

DiscreteField DiscreteField::zeros(SpaceKind kind, const Triangulation& mesh, int degree) {
  DiscreteField f;
  f.kind = kind;
  f.degree = degree;
  f.mesh = &mesh;
  f.coefficients = Vector::Zero(dimension(kind, mesh, degree));
  return f;
}

void DiscreteField::validate() const {
  require_mesh(*this);
  const Index expected = dimension(kind, *mesh, degree);
  if (coefficients.size() != expected) {
    throw InvalidArgument(std::string(kind_name(kind)) + " field has " +
                          std::to_string(coefficients.size()) + " coefficients, expected " +
                          std::to_string(expected));
  }
  if (kind == SpaceKind::P1C || kind == SpaceKind::P1CBubble) {
    for (Index v = 0; v < mesh->num_vertices(); ++v) {
      if (mesh->is_dirichlet_vertex(v) && coefficients[v] != 0.0) {
        throw InvalidArgument("continuous P1 field is nonzero at Dirichlet vertex " +
                              std::to_string(v));
      }
    }
  }
}

double evaluate(const DiscreteField& field, Index t, const Point& x) {
  require_mesh(field);
  const Triangulation& mesh = *field.mesh;
  switch (field.kind) {
    case SpaceKind::P0:
      return field.coefficients[t];
    case SpaceKind::P1C:
    case SpaceKind::P1CBubble: {
      const Eigen::Vector3d l = mesh.barycentric(t, x);
      const auto& el = mesh.element(t);
      double v = l[0] * field.coefficients[el[0]] + l[1] * field.coefficients[el[1]] +
                 l[2] * field.coefficients[el[2]];
      if (field.kind == SpaceKind::P1CBubble) {
        const double gamma = 60.0 / mesh.area(t);
        v += field.coefficients[mesh.num_vertices() + t] * gamma * l[0] * l[1] * l[2];
      }
      return v;
    }
    case SpaceKind::P1B: {
      const Eigen::Vector3d l = mesh.barycentric(t, x);
      return l.dot(field.coefficients.segment<3>(3 * t));
    }
    case SpaceKind::PkB: {
      const Eigen::Vector3d l = mesh.barycentric(t, x);
      const Index n = pk_local_dimension(field.degree);
      double v = 0.0;
      for (Index i = 0; i < n; ++i) v += field.coefficients[n * t + i] * pk_basis(field.degree, i, l);
      return v;
    }
    default:
      throw InvalidArgument(std::string("scalar evaluation of ") + kind_name(field.kind));
  }
}

Vec2 evaluate_gradient(const DiscreteField& field, Index t, const Point& x) {
  require_mesh(field);
  const Triangulation& mesh = *field.mesh;
  const auto grads = mesh.barycentric_gradients(t);
  switch (field.kind) {
    case SpaceKind::P0:
      return Vec2::Zero();
    case SpaceKind::P1C:
    case SpaceKind::P1CBubble: {
      const auto& el = mesh.element(t);
      Vec2 g = field.coefficients[el[0]] * grads.row(0).transpose() +
               field.coefficients[el[1]] * grads.row(1).transpose() +
               field.coefficients[el[2]] * grads.row(2).transpose();
      if (field.kind == SpaceKind::P1CBubble) {
        const Eigen::Vector3d l = mesh.barycentric(t, x);
        const double c = field.coefficients[mesh.num_vertices() + t] * 60.0 / mesh.area(t);
        g += c * (l[1] * l[2] * grads.row(0).transpose() + l[0] * l[2] * grads.row(1).transpose() +
                  l[0] * l[1] * grads.row(2).transpose());
      }
      return g;
    }
    case SpaceKind::P1B:
      return grads.transpose() * field.coefficients.segment<3>(3 * t);
    case SpaceKind::PkB: {
      const Eigen::Vector3d l = mesh.barycentric(t, x);
      const Index n = pk_local_dimension(field.degree);
      Vec2 g = Vec2::Zero();
      for (Index i = 0; i < n; ++i) {
        g += field.coefficients[n * t + i] * pk_basis_gradient(field.degree, i, l, grads);
      }
      return g;
    }
    default:
      throw InvalidArgument(std::string("gradient of ") + kind_name(field.kind));
  }
}

Vec2 rt0_basis(const Triangulation& mesh, Index t, int j, const Point& x) {
  const Index e = mesh.element_edges(t)[j];
  const Point& p = mesh.vertex(mesh.element(t)[j]);
  return mesh.edge_sign(t, j) * mesh.edge_length(e) / (2.0 * mesh.area(t)) * (x - p);
}

double rt0_basis_divergence(const Triangulation& mesh, Index t, int j) {
  const Index e = mesh.element_edges(t)[j];
  return mesh.edge_sign(t, j) * mesh.edge_length(e) / mesh.area(t);
}

Vec2 evaluate_vector(const DiscreteField& field, Index t, const Point& x) {
  require_mesh(field);
  const Triangulation& mesh = *field.mesh;
  switch (field.kind) {
    case SpaceKind::P0Vec:
      return field.coefficients.segment<2>(2 * t);
    case SpaceKind::RT0: {
      Vec2 v = Vec2::Zero();
      for (int j = 0; j < 3; ++j) {
        v += field.coefficients[mesh.element_edges(t)[j]] * rt0_basis(mesh, t, j, x);
      }
      return v;
    }
    default:
      throw InvalidArgument(std::string("vector evaluation of ") + kind_name(field.kind));
  }
}

double rt0_divergence(const DiscreteField& field, Index t) {
  require_mesh(field);
  if (field.kind != SpaceKind::RT0) throw InvalidArgument("divergence needs an RT0 field");
  double d = 0.0;
  for (int j = 0; j < 3; ++j) {
    d += field.coefficients[field.mesh->element_edges(t)[j]] * rt0_basis_divergence(*field.mesh, t, j);
  }
  return d;
}

P1DofMap::P1DofMap(const Triangulation& mesh) : vertex_to_dof(mesh.num_vertices(), -1) {
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (mesh.is_dirichlet_vertex(v)) continue;
    vertex_to_dof[v] = static_cast<Index>(dof_to_vertex.size());
    dof_to_vertex.push_back(v);
  }
}

Vector P1DofMap::expand(const Vector& reduced) const {
  Vector full = Vector::Zero(static_cast<Index>(vertex_to_dof.size()));
  for (Index d = 0; d < size(); ++d) full[dof_to_vertex[d]] = reduced[d];
  return full;
}

DiscreteField interpolate_p1(const Triangulation& mesh, const ScalarFunction& u) {
  DiscreteField f = DiscreteField::zeros(SpaceKind::P1C, mesh);
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    if (!mesh.is_dirichlet_vertex(v)) f.coefficients[v] = u(mesh.vertex(v));
  }
  return f;
}

DiscreteField project_p0(const ElementScalarFunction& f, const Triangulation& mesh,
                         const SingularLocus& locus, const SingularQuadratureOptions& options) {
  DiscreteField out = DiscreteField::zeros(SpaceKind::P0, mesh);
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const PhysicalRule rule = element_rule(mesh, t, locus, options);
    out.coefficients[t] = integrate([&](const Point& x) { return f(x, t); }, t, rule) / mesh.area(t);
  }
  return out;
}

namespace {

// Exact values with a small inward shift when a point hits the singular set.
template <typename F>
auto evaluate_guarded(const F& f, const Triangulation& mesh, Index t, const Point& x) {
  auto v = f(x);
  if (v.array().isFinite().all()) return v;
  const Point shifted = x + 1e-10 * (mesh.centroid(t) - x);
  v = f(shifted);
  if (!v.array().isFinite().all()) {
    throw NumericalError("exact solution not finite near element " + std::to_string(t), t);
  }
  return v;
}

}  // namespace

ErrorNorms error_norms(const Triangulation& mesh, const DiscreteField* u_h,
                       const DiscreteField* sigma_h, const ExactSolution& exact,
                       bool with_gradient, const SingularQuadratureOptions& options) {
  double eu = 0.0;
  double eg = 0.0;
  double es = 0.0;
  const bool need_gradient = (u_h != nullptr && with_gradient) || sigma_h != nullptr;
  auto value = [&](const Point& x) { return Eigen::Matrix<double, 1, 1>(exact.value(x)); };
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const PhysicalRule rule = element_rule(mesh, t, exact.locus, options);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point& x = rule.points[q];
      const double w = rule.weights[q];
      Vec2 grad = Vec2::Zero();
      if (need_gradient) grad = evaluate_guarded(exact.gradient, mesh, t, x);
      if (u_h != nullptr) {
        const double du = evaluate_guarded(value, mesh, t, x)(0) - evaluate(*u_h, t, x);
        eu += w * du * du;
        if (with_gradient) eg += w * (grad - evaluate_gradient(*u_h, t, x)).squaredNorm();
      }
      if (sigma_h != nullptr) es += w * (grad - evaluate_vector(*sigma_h, t, x)).squaredNorm();
    }
  }
  ErrorNorms out;
  if (u_h != nullptr) {
    out.u_l2 = std::sqrt(eu);
    if (with_gradient) out.u_h1 = std::sqrt(eg);
  }
  if (sigma_h != nullptr) out.sigma_l2 = std::sqrt(es);
  return out;
}

double l2_norm(const DiscreteField& field) {
  require_mesh(field);
  const Triangulation& mesh = *field.mesh;
  const int degree = field.kind == SpaceKind::PkB ? 2 * field.degree : 6;
  const QuadratureRule& rule = triangle_rule(degree);
  double sum = 0.0;
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const PhysicalRule pr = element_rule(mesh, t, rule);
    for (std::size_t q = 0; q < pr.size(); ++q) {
      const double v = evaluate(field, t, pr.points[q]);
      sum += pr.weights[q] * v * v;
    }
  }
  return std::sqrt(sum);
}

}  // namespace minres
