#include "minres/convergence.hpp"
#include "minres/mesh_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

using namespace minres;

namespace {

MeshPattern parse_pattern(const std::string& s) {
  if (s == "diagonal") return MeshPattern::Diagonal;
  if (s == "crisscross") return MeshPattern::Crisscross;
  throw InvalidArgument("unknown pattern '" + s + "' (expected diagonal or crisscross)");
}

Regularizer default_reg(Method m) { return m == Method::Dpg ? Regularizer::PhPrime : Regularizer::Qh; }

struct CheckMeshArgs {
  std::string pattern = "diagonal";
  Index n = 8;
  std::string mesh;
  std::string out;
  double perturb = 0.0;
  int levels = 1;
};

int run_check_mesh(const CheckMeshArgs& a) {
  Triangulation mesh = a.mesh.empty() ? make_structured_mesh(a.n, Rectangle{}, parse_pattern(a.pattern))
                                      : read_mesh(a.mesh);
  int status = 0;
  for (int level = 0; level < a.levels; ++level) {
    if (level > 0) mesh = make_structured_mesh(a.n << level, Rectangle{}, parse_pattern(a.pattern));
    Triangulation checked = mesh;
    if (a.perturb != 0.0) {
      Index v = -1;
      for (Index z = 0; z < mesh.num_vertices() && v < 0; ++z) {
        if (!mesh.is_boundary_vertex(z)) v = z;
      }
      if (v < 0) throw InvalidArgument("mesh has no interior vertex to perturb");
      checked = mesh.with_vertex_moved(v, mesh.vertex(v) + Point(a.perturb * mesh.h_min(), 0.0));
    }
    const MeshConditionReport r = check_mesh_condition(checked);
    std::cout << "vertices " << checked.num_vertices() << " elements " << checked.num_elements() << " edges "
              << checked.num_edges() << " h " << checked.h_max() << " max|s_z - z| " << r.max_deviation
              << " condition " << (r.pass ? "pass" : "fail") << '\n';
    if (!a.out.empty() && level == 0) write_mesh(checked, a.out);
    if (!a.mesh.empty()) break;
  }
  return status;
}

struct SolveArgs {
  std::string experiment;
  std::string method = "dpg";
  std::string reg;
  int levels = 1;
  int test_increment = 0;
  std::string out;
};

void write_fields(std::ostream& out, const Triangulation& mesh, const DiscreteField& u, const DiscreteField& sigma) {
  out << "# element cx cy u sigma_x sigma_y\n" << std::setprecision(17);
  for (Index t = 0; t < mesh.num_elements(); ++t) {
    const Point c = mesh.centroid(t);
    const Vec2 s = evaluate_vector(sigma, t, c);
    out << t << ' ' << c.x() << ' ' << c.y() << ' ' << evaluate(u, t, c) << ' ' << s.x() << ' ' << s.y() << '\n';
  }
}

int run_solve(const SolveArgs& a) {
  const Experiment& e = find_experiment(a.experiment);
  const Method method = parse_method(a.method);
  const Regularizer reg = a.reg.empty() ? default_reg(method) : parse_regularizer(a.reg);
  if (!e.supports(method, reg)) {
    throw InvalidArgument("experiment " + e.name + " does not run " + to_string(method) + " with " + to_string(reg));
  }
  const Index n = e.coarse_n << (a.levels - 1);
  const Triangulation mesh = make_structured_mesh(n, e.domain, e.pattern);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw IoError("cannot open " + a.out + " for writing");
    out = &file;
  }
  if (method == Method::Dpg) {
    DpgOptions o;
    o.test_increment = a.test_increment;
    const DpgSolution sol = solve_dpg(mesh, e.load, reg, o);
    std::cerr << "n " << n << " dofs " << sol.dofs << " estimator " << sol.estimator() << '\n';
    write_fields(*out, mesh, sol.u, sol.sigma);
  } else {
    const FoslsSolution sol = e.point_source ? solve_fosls_point_load(mesh, *e.point_source)
                                             : solve_fosls(mesh, e.load, reg);
    for (const std::string& w : sol.warnings) std::cerr << "warning: " << w << '\n';
    std::cerr << "n " << n << " dofs " << sol.dofs << " estimator " << sol.estimator() << '\n';
    write_fields(*out, mesh, sol.u, sol.sigma);
  }
  return 0;
}

struct ConvergeArgs {
  std::string experiment;
  std::string method = "dpg";
  std::string reg;
  int levels = 0;
  int test_increment = 0;
  int fine_levels = 3;
  int last_k = 2;
  std::string out;
  std::optional<double> assert_tol;
};

int run_converge(const ConvergeArgs& a) {
  const Experiment& e = find_experiment(a.experiment);
  const Method method = parse_method(a.method);
  const Regularizer reg = a.reg.empty() ? default_reg(method) : parse_regularizer(a.reg);
  ConvergenceOptions o;
  o.levels = a.levels;
  o.test_increment = a.test_increment;
  o.fine_levels = a.fine_levels;
  o.progress = [](const ConvergenceTable& t) {
    std::cerr << "level " << t.rows.size() - 1 << " n " << t.subdivisions.back();
    for (std::size_t i = 0; i < t.columns.size(); ++i) std::cerr << ' ' << t.columns[i] << ' ' << t.rows.back()[i];
    std::cerr << '\n';
  };
  const ConvergenceTable table = run_convergence(e, method, reg, o);
  if (a.out.empty()) {
    emit_data(table, std::cout);
  } else {
    emit_data(table, a.out);
  }
  if (e.point_source) {
    std::cerr << "reference self-convergence " << table.reference_self_convergence
              << (table.reference_guard_ok ? " (guard ok)" : " (guard failed)") << '\n';
  }
  for (const std::string& note : table.notes) std::cerr << "note: " << note << '\n';
  for (std::size_t c = 1; c < table.columns.size(); ++c) {
    std::cerr << "eoc " << table.columns[c] << ' ';
    try {
      std::cerr << extract_eoc(table, table.columns[c], std::min<int>(a.last_k, table.rows.size() - 1));
    } catch (const InvalidArgument&) {
      std::cerr << "undefined";
    }
    std::cerr << '\n';
  }
  if (!a.assert_tol) return 0;
  bool ok = table.reference_guard_ok;
  for (const RateCheck& c : check_rates(table, e, a.last_k, *a.assert_tol)) {
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.expectation.column << " observed " << c.observed << " expected ["
              << c.expectation.lower << ", " << c.expectation.upper << "] +/- " << *a.assert_tol << '\n';
    ok = ok && c.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized DPG and FOSLS solvers for Poisson problems with singular data"};
  app.require_subcommand(1);

  CheckMeshArgs cm;
  auto* check = app.add_subcommand("check-mesh", "Build a mesh and test the patch-centroid condition");
  check->add_option("--pattern", cm.pattern, "diagonal or crisscross")->check(CLI::IsMember({"diagonal", "crisscross"}));
  check->add_option("--n", cm.n, "subdivisions per side of the unit square")->check(CLI::PositiveNumber);
  check->add_option("--mesh", cm.mesh, "read the mesh from a text file instead")->check(CLI::ExistingFile);
  check->add_option("--perturb", cm.perturb, "move one interior vertex by this multiple of h_min");
  check->add_option("--levels", cm.levels, "also check n*2, n*4, ...")->check(CLI::PositiveNumber);
  check->add_option("--out", cm.out, "write the (first) mesh to a text file");

  SolveArgs sv;
  auto* solve = app.add_subcommand("solve", "Single level solve with element-wise field export");
  solve->add_option("--experiment", sv.experiment)->required();
  solve->add_option("--method", sv.method)->check(CLI::IsMember({"dpg", "fosls"}));
  solve->add_option("--reg", sv.reg, "pi0, qh or phprime")->check(CLI::IsMember({"pi0", "qh", "phprime"}));
  solve->add_option("--levels", sv.levels, "solve on the mesh of this level")->check(CLI::PositiveNumber);
  solve->add_option("--test-increment", sv.test_increment)->check(CLI::NonNegativeNumber);
  solve->add_option("--out", sv.out, "field file (stdout if omitted)");

  ConvergeArgs cv;
  auto* converge = app.add_subcommand("converge", "Convergence study writing a data file");
  converge->add_option("--experiment", cv.experiment)->required();
  converge->add_option("--method", cv.method)->check(CLI::IsMember({"dpg", "fosls"}));
  converge->add_option("--reg", cv.reg, "pi0, qh or phprime")->check(CLI::IsMember({"pi0", "qh", "phprime"}));
  converge->add_option("--levels", cv.levels, "number of levels (experiment default if omitted)")
      ->check(CLI::PositiveNumber);
  converge->add_option("--test-increment", cv.test_increment)->check(CLI::NonNegativeNumber);
  converge->add_option("--fine-levels", cv.fine_levels, "point loads: corrector refinements beyond the finest level")
      ->check(CLI::PositiveNumber);
  converge->add_option("--last-k", cv.last_k, "rates are fitted over the last k+1 rows")->check(CLI::PositiveNumber);
  converge->add_option("--out", cv.out, "data file (stdout if omitted)");
  converge->add_option("--assert-rates", cv.assert_tol,
                       "fail unless each expected rate lies in its interval widened by tol");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*check) return run_check_mesh(cm);
    if (*solve) return run_solve(sv);
    return run_converge(cv);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
}
