#include "minres/convergence.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace minres {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::vector<double> dpg_row(const Triangulation& mesh, const DpgSolution& sol,
                            const std::optional<ExactSolution>& exact, bool point_load,
                            const SingularQuadratureOptions& q) {
  const DiscreteField ustar = postprocess(sol);
  const ErrorNorms e = error_norms(mesh, &sol.u, point_load ? nullptr : &sol.sigma, *exact, false, q);
  const ErrorNorms es = error_norms(mesh, &ustar, nullptr, *exact, false, q);
  return {static_cast<double>(sol.dofs), sol.estimator(), e.u_l2, es.u_l2, e.sigma_l2};
}

std::vector<double> fosls_row(const Triangulation& mesh, const FoslsSolution& sol,
                              const std::optional<ExactSolution>& exact, bool point_load,
                              const SingularQuadratureOptions& q) {
  const ErrorNorms e =
      error_norms(mesh, &sol.u, point_load ? nullptr : &sol.sigma, *exact, !point_load, q);
  return {static_cast<double>(sol.dofs), sol.estimator(), e.u_l2, e.u_h1, e.sigma_l2};
}

}  // namespace

std::vector<std::string> ConvergenceTable::columns_for(Method m) {
  if (m == Method::Dpg) return {"dofDPG", "estDPG", "errU", "errUtilde", "errSigma"};
  return {"dofLSQ", "estLSQ", "errUL2", "errUH1", "errSigmaL2"};
}

Index ConvergenceTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<Index>(i);
  }
  throw InvalidArgument("table has no column '" + name + "'");
}

std::vector<double> ConvergenceTable::column(const std::string& name) const {
  const Index c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

ConvergenceTable run_convergence(const Experiment& experiment, Method method, Regularizer reg,
                                 const ConvergenceOptions& options) {
  if (!experiment.supports(method, reg)) {
    throw InvalidArgument("experiment " + experiment.name + " does not run " + to_string(method) +
                          " with " + to_string(reg));
  }
  const int levels = options.levels > 0 ? options.levels : experiment.default_levels;
  const Index n0 = options.coarse_n > 0 ? options.coarse_n : experiment.coarse_n;
  const bool point_load = experiment.point_source.has_value();

  ConvergenceTable table;
  table.experiment = experiment.name;
  table.method = method;
  table.reg = reg;
  table.test_increment = options.test_increment;
  table.pattern = experiment.pattern;
  table.columns = ConvergenceTable::columns_for(method);

  std::optional<ExactSolution> exact = experiment.exact;
  std::optional<PointLoadReference> reference;
  if (point_load) {
    const Index finest = n0 << (levels - 1);
    const Index fine_n = finest << options.fine_levels;
    reference = build_point_load_reference(experiment.domain, *experiment.point_source, fine_n,
                                           experiment.pattern, options.solver);
    check_self_convergence(*reference, experiment.domain, *experiment.point_source, fine_n,
                           experiment.pattern, options.solver);
    table.reference_self_convergence = reference->self_convergence;
    exact = reference->exact;
  }

  for (int level = 0; level < levels; ++level) {
    const Index n = n0 << level;
    const Triangulation mesh = make_structured_mesh(n, experiment.domain, experiment.pattern);
    std::vector<double> row;
    try {
      if (method == Method::Dpg) {
        DpgOptions o;
        o.test_increment = options.test_increment;
        o.solver = options.solver;
        o.quadrature = options.quadrature;
        const DpgSolution sol = solve_dpg(mesh, experiment.load, reg, o);
        row = dpg_row(mesh, sol, exact, point_load, options.quadrature);
      } else {
        FoslsOptions o;
        o.solver = options.solver;
        o.quadrature = options.quadrature;
        FoslsSolution sol = point_load
                                ? solve_fosls_point_load(mesh, *experiment.point_source, 1.0, o)
                                : solve_fosls(mesh, experiment.load, reg, o);
        for (const std::string& w : sol.warnings) table.notes.push_back("level " + std::to_string(level) + ": " + w);
        row = fosls_row(mesh, sol, exact, point_load, options.quadrature);
      }
    } catch (const SolverError& e) {
      throw SolverError("level " + std::to_string(level) + " (n = " + std::to_string(n) + "): " + e.what(),
                        e.iterations(), e.residual());
    } catch (const NumericalError& e) {
      throw NumericalError("level " + std::to_string(level) + " (n = " + std::to_string(n) + "): " + e.what(),
                           e.element());
    }
    table.rows.push_back(row);
    table.subdivisions.push_back(n);
    table.h.push_back(mesh.h_max());
    if (options.progress) options.progress(table);
  }

  if (point_load) {
    const double finest_error = table.rows.back()[2];
    table.reference_guard_ok = table.reference_self_convergence < 0.1 * finest_error;
    if (!table.reference_guard_ok) {
      table.notes.push_back("reference corrector self-convergence " +
                            std::to_string(table.reference_self_convergence) +
                            " is not below 0.1 x finest error " + std::to_string(finest_error));
    }
  }
  return table;
}

double extract_eoc(const ConvergenceTable& table, const std::string& column, int last_k) {
  if (last_k < 1 || static_cast<int>(table.rows.size()) < last_k + 1) {
    throw InvalidArgument("extract_eoc needs at least last_k + 1 rows");
  }
  const std::vector<double> err = table.column(column);
  const std::vector<double> dofs = table.column(table.columns.front());
  const std::size_t start = err.size() - static_cast<std::size_t>(last_k) - 1;
  const int m = last_k + 1;
  Eigen::VectorXd xs(m), ys(m);
  for (int i = 0; i < m; ++i) {
    const double e = err[start + i];
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw InvalidArgument("rate undefined: column " + column + " has a non-positive or non-finite entry");
    }
    xs[i] = -0.5 * std::log(dofs[start + i]);
    ys[i] = std::log(e);
  }
  const double xm = xs.mean();
  const double ym = ys.mean();
  return ((xs.array() - xm) * (ys.array() - ym)).sum() / (xs.array() - xm).square().sum();
}

std::vector<double> consecutive_eocs(const ConvergenceTable& table, const std::string& column) {
  const std::vector<double> err = table.column(column);
  const std::vector<double> dofs = table.column(table.columns.front());
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    out.push_back(std::log(err[i] / err[i + 1]) / std::log(std::sqrt(dofs[i + 1] / dofs[i])));
  }
  return out;
}

void emit_data(const ConvergenceTable& table, std::ostream& out) {
  if (table.rows.empty()) throw InvalidArgument("cannot emit an empty table");
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? " " : "") << table.columns[i];
  out << '\n' << std::setprecision(17);
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? " " : "");
      if (std::isnan(row[i])) {
        out << "nan";
      } else {
        out << row[i];
      }
    }
    out << '\n';
  }
}

void emit_data(const ConvergenceTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  emit_data(table, out);
  out.flush();
  if (!out) throw IoError("write to " + path + " failed");
}

ConvergenceTable read_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  ConvergenceTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + " is empty");
  std::istringstream hs(line);
  for (std::string c; hs >> c;) table.columns.push_back(c);
  table.method = table.columns.front() == "dofDPG" ? Method::Dpg : Method::Fosls;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<double> row;
    for (std::string tok; ls >> tok;) row.push_back(tok == "nan" ? nan : std::stod(tok));
    if (row.empty()) continue;
    if (row.size() != table.columns.size()) throw IoError("malformed row in " + path);
    table.rows.push_back(row);
  }
  return table;
}

std::vector<RateCheck> check_rates(const ConvergenceTable& table, const Experiment& experiment,
                                   int last_k, double widen) {
  std::vector<RateCheck> out;
  for (const RateExpectation& e : experiment.expectations(table.method, table.reg)) {
    RateCheck c;
    c.expectation = e;
    c.observed = extract_eoc(table, e.column, last_k);
    c.pass = c.observed >= e.lower - widen && c.observed <= e.upper + widen;
    out.push_back(c);
  }
  return out;
}

}  // namespace minres
