#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "minres/convergence.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

using namespace minres;

namespace {

ConvergenceTable synthetic_table(const std::vector<double>& dofs, const std::vector<double>& err) {
  ConvergenceTable t;
  t.method = Method::Fosls;
  t.columns = ConvergenceTable::columns_for(Method::Fosls);
  for (std::size_t i = 0; i < dofs.size(); ++i) t.rows.push_back({dofs[i], 1.0, err[i], err[i], err[i]});
  return t;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

double second_difference_laplacian(const ScalarFunction& u, const Point& x, double h) {
  const double c = u(x);
  return (u(x + Point(h, 0)) + u(x - Point(h, 0)) + u(x + Point(0, h)) + u(x - Point(0, h)) - 4.0 * c) / (h * h);
}

}  // namespace

TEST_CASE("EOC of an exact power law, a constant column and undefined rates") {
  std::vector<double> dofs, err;
  for (int k = 0; k < 6; ++k) {
    const double h = std::pow(0.5, k);
    dofs.push_back(7.0 / (h * h));
    err.push_back(3.0 * std::pow(h, 1.25));
  }
  const ConvergenceTable t = synthetic_table(dofs, err);
  CHECK(std::abs(extract_eoc(t, "errUL2", 2) - 1.25) < 1e-12);
  CHECK(std::abs(extract_eoc(t, "errUL2", 5) - 1.25) < 1e-12);
  for (double r : consecutive_eocs(t, "errUL2")) CHECK(std::abs(r - 1.25) < 1e-12);
  CHECK(std::abs(extract_eoc(t, "estLSQ", 3)) < 1e-12);
  CHECK_THROWS_AS(extract_eoc(t, "errUL2", 6), InvalidArgument);
  CHECK_THROWS_AS(extract_eoc(t, "nope", 2), InvalidArgument);
  ConvergenceTable z = t;
  z.rows.back()[2] = 0.0;
  CHECK_THROWS_AS(extract_eoc(z, "errUL2", 2), InvalidArgument);
  z.rows.back()[2] = -1.0;
  CHECK_THROWS_AS(extract_eoc(z, "errUL2", 2), InvalidArgument);
}

TEST_CASE("data files: exact header, one row per level, round trip, errors") {
  ConvergenceOptions o;
  o.levels = 3;
  const ConvergenceTable t = run_convergence(find_experiment("smooth"), Method::Dpg, Regularizer::PhPrime, o);
  std::ostringstream s;
  emit_data(t, s);
  std::istringstream in(s.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "dofDPG estDPG errU errUtilde errSigma");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);

  const std::string path = temp_path("minres_roundtrip.dat");
  emit_data(t, path);
  const ConvergenceTable back = read_data(path);
  CHECK(back.columns == t.columns);
  REQUIRE(back.rows.size() == t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < t.columns.size(); ++j) CHECK(back.rows[i][j] == t.rows[i][j]);
  }
  std::remove(path.c_str());

  CHECK_THROWS_AS(emit_data(t, std::string("/nonexistent-dir/x.dat")), IoError);
  CHECK_THROWS_AS(emit_data(ConvergenceTable{}, s), InvalidArgument);
  CHECK_THROWS_AS(read_data("/nonexistent-dir/x.dat"), IoError);

  const ConvergenceTable f = run_convergence(find_experiment("smooth"), Method::Fosls, Regularizer::Qh, o);
  std::ostringstream sf;
  emit_data(f, sf);
  CHECK(sf.str().substr(0, sf.str().find('\n')) == "dofLSQ estLSQ errUL2 errUH1 errSigmaL2");
}

TEST_CASE("runs are deterministic and dofs increase") {
  ConvergenceOptions o;
  o.levels = 3;
  const Experiment& e = find_experiment("sec62");
  std::ostringstream a, b;
  const ConvergenceTable t = run_convergence(e, Method::Fosls, Regularizer::Qh, o);
  emit_data(t, a);
  emit_data(run_convergence(e, Method::Fosls, Regularizer::Qh, o), b);
  CHECK(a.str() == b.str());
  const auto dofs = t.column("dofLSQ");
  for (std::size_t i = 1; i < dofs.size(); ++i) CHECK(dofs[i] > dofs[i - 1]);
  CHECK_THROWS_AS(run_convergence(e, Method::Dpg, Regularizer::Qh, o), InvalidArgument);
  CHECK_THROWS_AS(run_convergence(find_experiment("sec63"), Method::Fosls, Regularizer::PhPrime, o), InvalidArgument);
}

TEST_CASE("registry contents") {
  std::set<std::string> names;
  for (const Experiment& e : experiment_registry()) {
    names.insert(e.name);
    CHECK_FALSE(e.configurations.empty());
    for (const RateExpectation& r : e.expected) {
      CHECK(r.upper > 0.0);
      CHECK(r.upper <= 2.5);
      CHECK(r.lower < r.upper);
      CHECK(e.supports(r.method, r.reg));
    }
    CHECK(e.synthetic == (e.name == "smooth"));
    CHECK(e.exact.has_value() != e.point_source.has_value());
  }
  CHECK(names == std::set<std::string>{"sec61", "sec62", "sec63", "point64", "point65", "smooth"});
  CHECK_THROWS_AS(find_experiment("sec99"), InvalidArgument);
  const Experiment& p = find_experiment("point64");
  CHECK(*p.point_source == Point(0.0, 0.0));
  CHECK(p.domain.x0 == -1.0);
  CHECK(p.domain.x1 == 1.0);
}

TEST_CASE("manufactured data: gradients and -laplace by finite differences") {
  const double h = 1e-5;
  for (const Point& x : {Point(0.2, 0.7), Point(0.8, 0.3), Point(0.45, 0.6), Point(0.9, 0.05)}) {
    const Vec2 g = manufactured::sec61_grad(x);
    const double dx = (manufactured::sec61_u(x + Point(h, 0)) - manufactured::sec61_u(x - Point(h, 0))) / (2 * h);
    const double dy = (manufactured::sec61_u(x + Point(0, h)) - manufactured::sec61_u(x - Point(0, h))) / (2 * h);
    CHECK(g.x() == doctest::Approx(dx).epsilon(1e-7));
    CHECK(g.y() == doctest::Approx(dy).epsilon(1e-7));
  }
  for (const Point& x : {Point(0.3, 0.2), Point(-0.6, 0.4), Point(0.05, -0.7), Point(-0.2, -0.9), Point(0.9, 0.1)}) {
    const Vec2 g = manufactured::sec63_grad(x);
    const double dx = (manufactured::sec63_u(x + Point(h, 0)) - manufactured::sec63_u(x - Point(h, 0))) / (2 * h);
    const double dy = (manufactured::sec63_u(x + Point(0, h)) - manufactured::sec63_u(x - Point(0, h))) / (2 * h);
    CHECK(g.x() == doctest::Approx(dx).epsilon(1e-7));
    CHECK(g.y() == doctest::Approx(dy).epsilon(1e-7));
    const double lap = second_difference_laplacian(manufactured::sec63_u, x, 1e-4);
    CHECK(manufactured::sec63_f(x) == doctest::Approx(-lap).epsilon(1e-5));
  }
  // v(x) = x|x|^{1/2+1/128}(1 - x^2) vanishes on the boundary and is odd
  CHECK(manufactured::sec63_u(Point(1.0, 0.3)) == 0.0);
  CHECK(manufactured::sec63_u(Point(0.4, 1.0)) == 0.0);
  CHECK(manufactured::sec63_u(Point(-0.4, 0.2)) == doctest::Approx(-manufactured::sec63_u(Point(0.4, 0.2))));
  const double p = 0.5 + 1.0 / 128.0;
  CHECK(manufactured::sec63_u(Point(0.5, 0.0)) == doctest::Approx(0.5 * std::pow(0.5, p) * 0.75).epsilon(1e-14));
  // values on the singular lines are finite
  CHECK(std::isfinite(manufactured::sec63_f(Point(0.0, 0.2))));
  CHECK(manufactured::sec61_grad(Point(0.3, 0.3)).allFinite());
}

TEST_CASE("point-load reference: symmetry, log singularity, self-convergence") {
  const Rectangle sq{-1.0, -1.0, 1.0, 1.0};
  const Point x0(0.0, 0.0);
  PointLoadReference ref = build_point_load_reference(sq, x0, 32);
  const double d = check_self_convergence(ref, sq, x0, 32);
  CHECK(d == ref.self_convergence);
  CHECK(d < 1e-3);
  for (const Point& x : {Point(0.31, 0.52), Point(-0.7, 0.13), Point(0.05, -0.9)}) {
    const double u = ref.exact.value(x);
    for (const Point& y : {Point(-x.x(), x.y()), Point(x.x(), -x.y()), Point(x.y(), x.x()), Point(-x.y(), -x.x())}) {
      CHECK(std::abs(ref.exact.value(y) - u) < 1e-3);
    }
  }
  // the corrector is bounded, so near x0 the fundamental solution dominates
  const double r = 1e-6;
  const double fundamental = -std::log(r) / (2.0 * std::numbers::pi);
  CHECK(std::abs(ref.exact.value(Point(r, 0.0)) - fundamental) < 0.1 * fundamental);
  // u_ref vanishes on the boundary up to the corrector's nodal interpolation
  CHECK(std::abs(ref.exact.value(Point(1.0, 0.0))) < 1e-12);
  CHECK(std::abs(ref.exact.value(Point(0.3, -1.0))) < 1e-2);
  CHECK_THROWS_AS(build_point_load_reference(sq, Point(1.0, 0.0), 8), InvalidArgument);
  CHECK_THROWS_AS(check_self_convergence(ref, sq, x0, 33), InvalidArgument);

  // finer correctors converge at second order
  PointLoadReference fine = build_point_load_reference(sq, x0, 64);
  const double d2 = check_self_convergence(fine, sq, x0, 64);
  CHECK(d2 < 0.4 * d);
}

TEST_CASE("rate checks use the registry intervals") {
  ConvergenceOptions o;
  o.levels = 4;
  const Experiment& e = find_experiment("smooth");
  const ConvergenceTable t = run_convergence(e, Method::Fosls, Regularizer::Qh, o);
  const auto checks = check_rates(t, e, 2);
  CHECK(checks.size() == 3);
  for (const RateCheck& c : checks) {
    CHECK(c.pass == (c.observed >= c.expectation.lower && c.observed <= c.expectation.upper));
    CHECK(c.observed == extract_eoc(t, c.expectation.column, 2));
  }
  const auto wide = check_rates(t, e, 2, 100.0);
  for (const RateCheck& c : wide) CHECK(c.pass);
}
