#ifndef MINRES_CONVERGENCE_HPP
#define MINRES_CONVERGENCE_HPP

#include "minres/experiments.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace minres {

/// One row per level. Columns are `dofDPG estDPG errU errUtilde errSigma`
/// for DPG and `dofLSQ estLSQ errUL2 errUH1 errSigmaL2` for FOSLS; the first
/// column is the dof count. Errors that are undefined (grad u not in L^2) are NaN.
struct ConvergenceTable {
  std::string experiment;
  Method method = Method::Dpg;
  Regularizer reg = Regularizer::PhPrime;
  int test_increment = 0;
  MeshPattern pattern = MeshPattern::Diagonal;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<Index> subdivisions;  // n per level
  std::vector<double> h;
  std::vector<std::string> notes;
  double reference_self_convergence = std::numeric_limits<double>::quiet_NaN();
  bool reference_guard_ok = true;

  static std::vector<std::string> columns_for(Method m);
  Index column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

struct ConvergenceOptions {
  int levels = 0;       // 0: experiment default
  Index coarse_n = 0;   // 0: experiment default
  int test_increment = 0;
  int fine_levels = 3;  // point loads: corrector mesh this many levels beyond the finest
  SolverOptions solver;
  SingularQuadratureOptions quadrature;
  std::function<void(const ConvergenceTable&)> progress;  // called after each level
};

ConvergenceTable run_convergence(const Experiment& experiment, Method method, Regularizer reg,
                                 const ConvergenceOptions& options = {});

/// Least-squares slope of log(err) against log(1/sqrt(dofs)) over the last
/// last_k + 1 rows.
double extract_eoc(const ConvergenceTable& table, const std::string& column, int last_k);

/// log(e_i / e_{i+1}) / log(sqrt(N_{i+1} / N_i)) between consecutive rows.
std::vector<double> consecutive_eocs(const ConvergenceTable& table, const std::string& column);

void emit_data(const ConvergenceTable& table, std::ostream& out);
void emit_data(const ConvergenceTable& table, const std::string& path);
ConvergenceTable read_data(const std::string& path);

struct RateCheck {
  RateExpectation expectation;
  double observed = 0.0;
  bool pass = false;
};

/// Compares extract_eoc(column, last_k) with the registry intervals.
/// `widen` is added on both sides of each interval.
std::vector<RateCheck> check_rates(const ConvergenceTable& table, const Experiment& experiment,
                                   int last_k = 2, double widen = 0.0);

}  // namespace minres

#endif  // MINRES_CONVERGENCE_HPP
