#include "minres/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

namespace minres {

namespace {

GaussRule compute_gauss_legendre(int n) {
  GaussRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 0 ? 1.0 : (n == 1 ? x : p1);
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Map [-1,1] -> [0,1].
    rule.points[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

QuadratureRule compute_triangle_rule(int degree) {
  const int n = std::max(1, (degree + 3) / 2);
  const GaussRule& g = gauss_legendre(n);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    const double t = g.points[i];
    for (int j = 0; j < n; ++j) {
      const double u = g.points[j];
      rule.points.emplace_back(1.0 - t, t * (1.0 - u), t * u);
      rule.weights.push_back(2.0 * t * g.weights[i] * g.weights[j]);
    }
  }
  return rule;
}

// Collapsed map x = p + t((a - p) + u(b - a)) on the sub-triangle (p, a, b),
// graded toward t = 0 (apex) or t = 1 (edge ab).
void append_graded(const Point& p, const Point& a, const Point& b, bool toward_edge,
                   const SingularQuadratureOptions& opt, PhysicalRule& out) {
  const double twice_area = std::abs((a - p).x() * (b - p).y() - (a - p).y() * (b - p).x());
  if (twice_area <= 0.0) return;
  const int nu = std::max((opt.base_degree + 2) / 2, 2 * opt.points_per_level);
  const GaussRule& gu = gauss_legendre(nu);
  const GaussRule& gt = gauss_legendre(opt.points_per_level);
  const double q = opt.grading_ratio;
  double outer = 1.0;
  for (int level = 0; level <= opt.grading_levels; ++level) {
    // s is the distance parameter from the singular set: [inner, outer].
    const double inner = level == opt.grading_levels ? 0.0 : outer * q;
    const double len = outer - inner;
    const bool last = level == opt.grading_levels;
    for (std::size_t i = 0; i < gt.points.size(); ++i) {
      // s = len * w^2 on the innermost interval absorbs an s^{-1/2} singularity
      const double w = gt.points[i];
      const double s = last ? len * w * w : inner + len * w;
      const double ds = last ? 2.0 * len * w : len;
      const double t = toward_edge ? 1.0 - s : s;
      for (std::size_t j = 0; j < gu.points.size(); ++j) {
        const double u = gu.points[j];
        const Point e = a + u * (b - a);
        // measured from the singular set so that tiny s is not lost to rounding
        out.points.push_back(toward_edge ? Point(e - s * (e - p)) : Point(p + s * (e - p)));
        out.weights.push_back(twice_area * t * ds * gt.weights[i] * gu.weights[j]);
      }
    }
    outer = inner;
  }
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  if (n < 1) throw InvalidArgument("Gauss rule needs at least one point");
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(compute_gauss_legendre(n));
  return *slot;
}

const QuadratureRule& triangle_rule(int degree) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  if (degree < 0) throw InvalidArgument("negative quadrature degree");
  std::lock_guard lock(mutex);
  auto& slot = cache[degree];
  if (!slot) slot = std::make_unique<QuadratureRule>(compute_triangle_rule(degree));
  return *slot;
}

double SingularLocus::signed_distance(const Point& x) const {
  const Vec2 r = x - anchor;
  return r.x() * direction.y() - r.y() * direction.x();
}

bool touches_locus(const Triangulation& mesh, Index t, const SingularLocus& locus) {
  const auto& el = mesh.element(t);
  const double eps = 1e-12 * mesh.diameter(t);
  switch (locus.kind) {
    case SingularLocus::Kind::None:
      return false;
    case SingularLocus::Kind::Point:
      return mesh.barycentric(t, locus.anchor).minCoeff() >= -1e-12;
    case SingularLocus::Kind::Line: {
      bool pos = false;
      bool neg = false;
      for (Index v : el) {
        const double d = locus.signed_distance(mesh.vertex(v));
        if (std::abs(d) <= eps) return true;
        (d > 0 ? pos : neg) = true;
      }
      return pos && neg;
    }
  }
  return false;
}

PhysicalRule element_rule(const Triangulation& mesh, Index t, const QuadratureRule& rule) {
  PhysicalRule out;
  out.points.reserve(rule.size());
  out.weights.reserve(rule.size());
  const double area = mesh.area(t);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    out.points.push_back(mesh.map_from_barycentric(t, rule.points[q]));
    out.weights.push_back(rule.weights[q] * area);
  }
  return out;
}

PhysicalRule element_rule(const Triangulation& mesh, Index t, const SingularLocus& locus,
                          const SingularQuadratureOptions& options) {
  if (!touches_locus(mesh, t, locus)) {
    return element_rule(mesh, t, triangle_rule(options.base_degree));
  }
  const auto& el = mesh.element(t);
  const std::array<Point, 3> v{mesh.vertex(el[0]), mesh.vertex(el[1]), mesh.vertex(el[2])};
  PhysicalRule out;
  if (locus.kind == SingularLocus::Kind::Point) {
    const Eigen::Vector3d b = mesh.barycentric(t, locus.anchor);
    const double eps = 1e-12;
    for (int i = 0; i < 3; ++i) {
      if (b[i] > eps) append_graded(locus.anchor, v[(i + 1) % 3], v[(i + 2) % 3], false, options, out);
    }
    return out;
  }

  const double eps = 1e-12 * mesh.diameter(t);
  std::array<double, 3> d{};
  std::vector<int> zero;
  for (int i = 0; i < 3; ++i) {
    d[i] = locus.signed_distance(v[i]);
    if (std::abs(d[i]) <= eps) zero.push_back(i);
  }
  auto crossing = [&](int i, int j) {
    const double s = d[i] / (d[i] - d[j]);
    return Point(v[i] + s * (v[j] - v[i]));
  };
  if (zero.size() >= 2) {
    const int apex = 3 - zero[0] - zero[1];
    append_graded(v[apex], v[zero[0]], v[zero[1]], true, options, out);
  } else if (zero.size() == 1) {
    const int z = zero[0];
    const int i = (z + 1) % 3;
    const int j = (z + 2) % 3;
    if (d[i] * d[j] > 0.0) {
      append_graded(v[z], v[i], v[j], false, options, out);
    } else {
      const Point c = crossing(i, j);
      append_graded(v[i], v[z], c, true, options, out);
      append_graded(v[j], v[z], c, true, options, out);
    }
  } else {
    // The line crosses two edges; `lone` is the vertex alone on its side.
    int lone = 0;
    for (int i = 0; i < 3; ++i) {
      if (d[i] * d[(i + 1) % 3] > 0.0) lone = (i + 2) % 3;
    }
    const int w1 = (lone + 1) % 3;
    const int w2 = (lone + 2) % 3;
    const Point c1 = crossing(lone, w1);
    const Point c2 = crossing(lone, w2);
    append_graded(v[lone], c1, c2, true, options, out);
    append_graded(v[w1], c1, c2, true, options, out);
    append_graded(c2, v[w1], v[w2], false, options, out);
  }
  return out;
}

double integrate(const std::function<double(const Point&)>& g, Index t, const PhysicalRule& rule) {
  double sum = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const double val = g(rule.points[q]);
    if (!std::isfinite(val)) {
      throw NumericalError("non-finite integrand on element " + std::to_string(t), t);
    }
    sum += rule.weights[q] * val;
  }
  return sum;
}

double integrate(const std::function<double(const Point&)>& g, const Triangulation& mesh, Index t,
                 const QuadratureRule& rule) {
  return integrate(g, t, element_rule(mesh, t, rule));
}

}  // namespace minres
