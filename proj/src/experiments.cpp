#include "minres/experiments.hpp"

#include "minres/poisson_p1.hpp"

#include <cmath>
#include <numbers>

namespace minres {

namespace {

constexpr double pi = std::numbers::pi;

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// v(x) = x |x|^{1/2 + 1/128} (1 - x^2) = sign(x)(|x|^p - |x|^{p+2}).
constexpr double p63 = 193.0 / 128.0;

double v63(double x) { return x * std::pow(std::abs(x), p63 - 1.0) * (1.0 - x * x); }
double dv63(double x) {
  const double a = std::abs(x);
  return p63 * std::pow(a, p63 - 1.0) - (p63 + 2.0) * std::pow(a, p63 + 1.0);
}

Experiment make_sec6x(const std::string& name, Method method) {
  Experiment e;
  e.name = name;
  e.domain = Rectangle{0.0, 0.0, 1.0, 1.0};
  e.coarse_n = 4;
  e.default_levels = 7;
  const SingularLocus diag = SingularLocus::line({0.0, 0.0}, {1.0, 1.0});
  e.exact = ExactSolution{manufactured::sec61_u, manufactured::sec61_grad, diag, {}};
  e.load = LoadFunctional::gradient_form(manufactured::sec61_grad, diag);
  if (method == Method::Dpg) {
    e.description = "u = |x-y|^{3/4} sin(pi x) sin(pi y) on (0,1)^2, DPG with H^-1 load <grad u, grad v>";
    e.configurations = {{Method::Dpg, Regularizer::PhPrime}, {Method::Dpg, Regularizer::Qh}};
    e.expected = {{Method::Dpg, Regularizer::PhPrime, "errU", 0.88, 1.12},
                  {Method::Dpg, Regularizer::PhPrime, "errSigma", 0.17, 0.33},
                  {Method::Dpg, Regularizer::PhPrime, "errUtilde", 1.13, 1.37},
                  {Method::Dpg, Regularizer::PhPrime, "estDPG", 0.17, 0.33}};
  } else {
    e.description = "u = |x-y|^{3/4} sin(pi x) sin(pi y) on (0,1)^2, FOSLS with H^-1 load <grad u, grad v>";
    e.configurations = {{Method::Fosls, Regularizer::Qh}};
    e.expected = {{Method::Fosls, Regularizer::Qh, "errUH1", 0.17, 0.33},
                  {Method::Fosls, Regularizer::Qh, "errSigmaL2", 0.17, 0.33},
                  {Method::Fosls, Regularizer::Qh, "errUL2", 1.13, 1.37},
                  {Method::Fosls, Regularizer::Qh, "estLSQ", 0.17, 0.33}};
  }
  return e;
}

Experiment make_sec63() {
  Experiment e;
  e.name = "sec63";
  e.description = "u = v(x)(1-y^2), v = x|x|^{1/2+1/128}(1-x^2) on (-1,1)^2, FOSLS with L2 load";
  e.domain = Rectangle{-1.0, -1.0, 1.0, 1.0};
  e.coarse_n = 4;
  e.default_levels = 7;
  const SingularLocus axis = SingularLocus::line({0.0, 0.0}, {0.0, 1.0});
  e.exact = ExactSolution{manufactured::sec63_u, manufactured::sec63_grad, axis, manufactured::sec63_f};
  e.load = LoadFunctional::density(manufactured::sec63_f, axis);
  e.configurations = {{Method::Fosls, Regularizer::Qh}, {Method::Fosls, Regularizer::Pi0}};
  e.expected = {{Method::Fosls, Regularizer::Qh, "errUL2", 1.85, 2.15},
                {Method::Fosls, Regularizer::Qh, "errUH1", 0.9, 1.1},
                {Method::Fosls, Regularizer::Qh, "errSigmaL2", 0.9, 1.1},
                {Method::Fosls, Regularizer::Pi0, "errUL2", 0.0, 1.7},
                {Method::Fosls, Regularizer::Pi0, "errUH1", 0.9, 1.1},
                {Method::Fosls, Regularizer::Pi0, "errSigmaL2", 0.9, 1.1}};
  return e;
}

Experiment make_point(const std::string& name, Method method) {
  Experiment e;
  e.name = name;
  e.domain = Rectangle{-1.0, -1.0, 1.0, 1.0};
  e.coarse_n = 4;
  e.default_levels = 6;
  e.point_source = Point(0.0, 0.0);
  e.load = LoadFunctional::dirac(*e.point_source);
  if (method == Method::Dpg) {
    e.description = "delta at (0,0) on (-1,1)^2, DPG with P_h' delta";
    e.configurations = {{Method::Dpg, Regularizer::PhPrime}};
    e.expected = {{Method::Dpg, Regularizer::PhPrime, "errU", 0.85, 1.1}};
  } else {
    e.description = "delta at (0,0) on (-1,1)^2, FOSLS with Q_h delta";
    e.configurations = {{Method::Fosls, Regularizer::Qh}};
    e.expected = {{Method::Fosls, Regularizer::Qh, "errUL2", 0.88, 1.12}};
  }
  return e;
}

Experiment make_smooth() {
  Experiment e;
  e.name = "smooth";
  e.description = "u = sin(pi x) sin(pi y) on (0,1)^2 (synthetic sanity check)";
  e.domain = Rectangle{0.0, 0.0, 1.0, 1.0};
  e.coarse_n = 4;
  e.default_levels = 5;
  e.synthetic = true;
  auto u = [](const Point& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); };
  auto grad = [](const Point& x) {
    return Vec2(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()), pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  };
  auto f = [u](const Point& x) { return 2.0 * pi * pi * u(x); };
  e.exact = ExactSolution{u, grad, {}, f};
  e.load = LoadFunctional::density(f);
  e.configurations = {{Method::Dpg, Regularizer::PhPrime},
                      {Method::Dpg, Regularizer::Qh},
                      {Method::Fosls, Regularizer::Qh},
                      {Method::Fosls, Regularizer::Pi0}};
  for (Regularizer r : {Regularizer::PhPrime, Regularizer::Qh}) {
    e.expected.push_back({Method::Dpg, r, "errU", 0.9, 1.1});
    e.expected.push_back({Method::Dpg, r, "errSigma", 0.9, 1.1});
  }
  for (Regularizer r : {Regularizer::Qh, Regularizer::Pi0}) {
    e.expected.push_back({Method::Fosls, r, "errUH1", 0.9, 1.1});
    e.expected.push_back({Method::Fosls, r, "errSigmaL2", 0.9, 1.1});
  }
  e.expected.push_back({Method::Fosls, Regularizer::Qh, "errUL2", 1.85, 2.15});
  return e;
}

}  // namespace

namespace manufactured {

double sec61_u(const Point& x) {
  return std::pow(std::abs(x.x() - x.y()), 0.75) * std::sin(pi * x.x()) * std::sin(pi * x.y());
}

Vec2 sec61_grad(const Point& x) {
  const double d = x.x() - x.y();
  const double a = std::abs(d);
  const double sx = std::sin(pi * x.x());
  const double sy = std::sin(pi * x.y());
  const double r = std::pow(a, 0.75);
  const double dr = a > 0.0 ? 0.75 * std::pow(a, -0.25) * sign(d) : 0.0;
  return Vec2(dr * sx * sy + r * pi * std::cos(pi * x.x()) * sy,
              -dr * sx * sy + r * sx * pi * std::cos(pi * x.y()));
}

double sec63_u(const Point& x) { return v63(x.x()) * (1.0 - x.y() * x.y()); }

Vec2 sec63_grad(const Point& x) {
  return Vec2(dv63(x.x()) * (1.0 - x.y() * x.y()), -2.0 * x.y() * v63(x.x()));
}

double sec63_f(const Point& x) {
  const double a = std::abs(x.x());
  const double w = 1.0 - x.y() * x.y();
  if (a == 0.0) return 0.0;
  return sign(x.x()) * (144129.0 * x.x() * x.x() - 12545.0) / (16384.0 * std::pow(a, 63.0 / 128.0)) * w +
         2.0 * v63(x.x());
}

}  // namespace manufactured

const char* to_string(Method m) { return m == Method::Dpg ? "dpg" : "fosls"; }

Method parse_method(const std::string& name) {
  if (name == "dpg") return Method::Dpg;
  if (name == "fosls") return Method::Fosls;
  throw InvalidArgument("unknown method '" + name + "' (expected dpg or fosls)");
}

bool Experiment::supports(Method m, Regularizer r) const {
  for (const auto& [cm, cr] : configurations) {
    if (cm == m && cr == r) return true;
  }
  return false;
}

std::vector<RateExpectation> Experiment::expectations(Method m, Regularizer r) const {
  std::vector<RateExpectation> out;
  for (const RateExpectation& e : expected) {
    if (e.method == m && e.reg == r) out.push_back(e);
  }
  return out;
}

const std::vector<Experiment>& experiment_registry() {
  static const std::vector<Experiment> registry = {
      make_sec6x("sec61", Method::Dpg),   make_sec6x("sec62", Method::Fosls), make_sec63(),
      make_point("point64", Method::Dpg), make_point("point65", Method::Fosls), make_smooth()};
  return registry;
}

const Experiment& find_experiment(const std::string& name) {
  for (const Experiment& e : experiment_registry()) {
    if (e.name == name) return e;
  }
  throw InvalidArgument("unknown experiment '" + name + "'");
}

double PointLoadReference::corrector_at(const Point& x) const {
  const Index t = locator->locate(x);
  if (t < 0) throw InvalidArgument("reference evaluated outside the domain");
  return evaluate_p1(*mesh, corrector, t, x);
}

PointLoadReference build_point_load_reference(const Rectangle& domain, const Point& x0, Index fine_n,
                                              MeshPattern pattern, const SolverOptions& solver) {
  if (!domain.contains(x0) || domain.distance_to_boundary(x0) <= 0.0) {
    throw InvalidArgument("point source must lie strictly inside the domain");
  }
  PointLoadReference ref;
  ref.mesh = std::make_shared<const Triangulation>(make_structured_mesh(fine_n, domain, pattern));
  ref.locator = std::make_shared<const PointLocator>(*ref.mesh);
  auto boundary = [x0](const Point& x) { return std::log((x - x0).norm()) / (2.0 * pi); };
  LoadFunctional none;
  ref.corrector = solve_poisson_p1(*ref.mesh, none, boundary, solver).nodal;

  auto mesh = ref.mesh;
  auto locator = ref.locator;
  auto r = std::make_shared<const Vector>(ref.corrector);
  ref.exact.value = [mesh, locator, r, x0](const Point& x) {
    const Index t = locator->locate(x);
    if (t < 0) return std::numeric_limits<double>::quiet_NaN();
    return -std::log((x - x0).norm()) / (2.0 * pi) + evaluate_p1(*mesh, *r, t, x);
  };
  ref.exact.gradient = [mesh, locator, r, x0](const Point& x) {
    const Index t = locator->locate(x);
    if (t < 0) return Vec2(Vec2::Constant(std::numeric_limits<double>::quiet_NaN()));
    const Vec2 d = x - x0;
    return Vec2(-d / (2.0 * pi * d.squaredNorm()) + evaluate_p1_gradient(*mesh, *r, t));
  };
  ref.exact.locus = SingularLocus::point(x0);
  return ref;
}

double check_self_convergence(PointLoadReference& ref, const Rectangle& domain, const Point& x0,
                              Index fine_n, MeshPattern pattern, const SolverOptions& solver) {
  if (fine_n % 2 != 0) throw InvalidArgument("self-convergence check needs an even fine_n");
  const PointLoadReference coarse = build_point_load_reference(domain, x0, fine_n / 2, pattern, solver);
  double diff = 0.0;
  for (Index v = 0; v < coarse.mesh->num_vertices(); ++v) {
    const Point& x = coarse.mesh->vertex(v);
    diff = std::max(diff, std::abs(coarse.corrector[v] - ref.corrector_at(x)));
  }
  ref.self_convergence = diff;
  return diff;
}

}  // namespace minres
