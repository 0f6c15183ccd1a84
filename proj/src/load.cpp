#include "minres/load.hpp"

#include <cmath>
#include <string>

namespace minres {

namespace {

SingularLocus merge_loci(const SingularLocus& a, const SingularLocus& b) {
  if (a.kind == SingularLocus::Kind::None) return b;
  if (b.kind == SingularLocus::Kind::None || a == b) return a;
  throw InvalidArgument("cannot combine loads with different singular loci");
}

const Triangulation* merge_meshes(const Triangulation* a, const Triangulation* b) {
  if (a == nullptr) return b;
  if (b == nullptr || a == b) return a;
  throw InvalidArgument("cannot combine piecewise loads bound to different meshes");
}

Index locate_or_throw(const PointLocator& locator, const Point& x) {
  const Index t = locator.locate(x);
  if (t < 0) {
    throw InvalidArgument("point mass at (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                          ") lies outside the mesh");
  }
  return t;
}

}  // namespace

LoadFunctional LoadFunctional::density(ScalarFunction g0, const SingularLocus& locus) {
  LoadFunctional f;
  f.volume = [g0 = std::move(g0)](const Point& x, Index) { return g0(x); };
  f.locus = locus;
  return f;
}

LoadFunctional LoadFunctional::gradient_form(VectorFunction g, const SingularLocus& locus) {
  LoadFunctional f;
  f.gradient = std::move(g);
  f.locus = locus;
  return f;
}

LoadFunctional LoadFunctional::dirac(const Point& x, double mass) {
  LoadFunctional f;
  f.point_masses.push_back({x, mass});
  return f;
}

LoadFunctional LoadFunctional::piecewise_constant(const DiscreteField& p0) {
  if (p0.kind != SpaceKind::P0) throw InvalidArgument("piecewise_constant needs a P0 field");
  p0.validate();
  LoadFunctional f;
  f.volume = [values = p0.coefficients](const Point&, Index t) { return values[t]; };
  f.bound_mesh = p0.mesh;
  return f;
}

void LoadFunctional::validate(const Triangulation& mesh) const {
  if (empty()) throw InvalidArgument("load functional has no parts");
  if (bound_mesh != nullptr && bound_mesh != &mesh) {
    throw InvalidArgument("piecewise load is bound to a different mesh");
  }
  if (!has_point_masses()) return;
  const PointLocator locator(mesh);
  for (const PointMass& pm : point_masses) {
    const Index t = locate_or_throw(locator, pm.position);
    const Eigen::Vector3d l = mesh.barycentric(t, pm.position);
    for (int j = 0; j < 3; ++j) {
      const Index e = mesh.element_edges(t)[j];
      if (mesh.edge_elements(e)[1] < 0 && std::abs(l[j]) <= 1e-12) {
        throw InvalidArgument("point mass lies on the domain boundary");
      }
    }
  }
}

LoadFunctional operator+(const LoadFunctional& a, const LoadFunctional& b) {
  LoadFunctional f;
  f.locus = merge_loci(a.locus, b.locus);
  f.bound_mesh = merge_meshes(a.bound_mesh, b.bound_mesh);
  if (a.has_volume() && b.has_volume()) {
    f.volume = [va = a.volume, vb = b.volume](const Point& x, Index t) { return va(x, t) + vb(x, t); };
  } else {
    f.volume = a.has_volume() ? a.volume : b.volume;
  }
  if (a.has_gradient() && b.has_gradient()) {
    f.gradient = [ga = a.gradient, gb = b.gradient](const Point& x) -> Vec2 { return ga(x) + gb(x); };
  } else {
    f.gradient = a.has_gradient() ? a.gradient : b.gradient;
  }
  f.point_masses = a.point_masses;
  f.point_masses.insert(f.point_masses.end(), b.point_masses.begin(), b.point_masses.end());
  return f;
}

LoadFunctional operator*(double s, const LoadFunctional& f) {
  LoadFunctional out = f;
  if (f.has_volume()) out.volume = [v = f.volume, s](const Point& x, Index t) { return s * v(x, t); };
  if (f.has_gradient()) out.gradient = [g = f.gradient, s](const Point& x) -> Vec2 { return s * g(x); };
  for (PointMass& pm : out.point_masses) pm.mass *= s;
  return out;
}

ElementMoments element_moments(const Triangulation& mesh, const LoadFunctional& f,
                               const SingularQuadratureOptions& options) {
  f.validate(mesh);
  ElementMoments m = ElementMoments::Zero(mesh.num_elements(), 4);
  if (f.has_volume() || f.has_gradient()) {
    for (Index t = 0; t < mesh.num_elements(); ++t) {
      const PhysicalRule rule = element_rule(mesh, t, f.locus, options);
      const auto grads = mesh.barycentric_gradients(t);
      Eigen::Vector4d acc = Eigen::Vector4d::Zero();
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Point& x = rule.points[q];
        const Eigen::Vector3d l = mesh.barycentric(t, x);
        const double w = rule.weights[q];
        if (f.has_volume()) {
          const double g0 = f.volume(x, t);
          if (!std::isfinite(g0)) {
            throw NumericalError("non-finite load density on element " + std::to_string(t), t);
          }
          acc.head<3>() += w * g0 * l;
          acc[3] += w * g0 * l.prod();
        }
        if (f.has_gradient()) {
          const Vec2 g = f.gradient(x);
          if (!g.allFinite()) {
            throw NumericalError("non-finite load gradient part on element " + std::to_string(t), t);
          }
          const Eigen::Vector3d gl = grads * g;
          acc.head<3>() += w * gl;
          acc[3] += w * (l[1] * l[2] * gl[0] + l[0] * l[2] * gl[1] + l[0] * l[1] * gl[2]);
        }
      }
      m.row(t) = acc.transpose();
    }
  }
  if (f.has_point_masses()) {
    const PointLocator locator(mesh);
    for (const PointMass& pm : f.point_masses) {
      const Index t = locate_or_throw(locator, pm.position);
      const Eigen::Vector3d l = mesh.barycentric(t, pm.position).cwiseMax(0.0);
      m.row(t).head<3>() += pm.mass * l.transpose();
      m(t, 3) += pm.mass * l.prod();
    }
  }
  return m;
}

DiscreteField project_p0(const LoadFunctional& f, const Triangulation& mesh,
                         const SingularQuadratureOptions& options) {
  if (f.has_point_masses() || f.has_gradient() || !f.has_volume()) {
    throw UnsupportedRepresentation("L2 projection needs a load given by an integrable density");
  }
  f.validate(mesh);
  return project_p0(f.volume, mesh, f.locus, options);
}

double apply_load(const LoadFunctional& f, const DiscreteField& v,
                  const SingularQuadratureOptions& options) {
  if (v.mesh == nullptr) throw InvalidArgument("field has no mesh");
  const Triangulation& mesh = *v.mesh;
  f.validate(mesh);
  double sum = 0.0;
  if (f.has_volume() || f.has_gradient()) {
    for (Index t = 0; t < mesh.num_elements(); ++t) {
      const PhysicalRule rule = element_rule(mesh, t, f.locus, options);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Point& x = rule.points[q];
        double val = 0.0;
        if (f.has_volume()) val += f.volume(x, t) * evaluate(v, t, x);
        if (f.has_gradient()) val += f.gradient(x).dot(evaluate_gradient(v, t, x));
        sum += rule.weights[q] * val;
      }
    }
  }
  if (f.has_point_masses()) {
    const PointLocator locator(mesh);
    for (const PointMass& pm : f.point_masses) {
      sum += pm.mass * evaluate(v, locate_or_throw(locator, pm.position), pm.position);
    }
  }
  return sum;
}

}  // namespace minres
