#ifndef MINRES_EXPERIMENTS_HPP
#define MINRES_EXPERIMENTS_HPP

#include "minres/dpg.hpp"
#include "minres/fosls.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace minres {

enum class Method { Dpg, Fosls };

const char* to_string(Method m);
Method parse_method(const std::string& name);

/// Expected convergence rate of one output column, as an admissible interval.
struct RateExpectation {
  Method method;
  Regularizer reg;
  std::string column;
  double lower;
  double upper;
};

struct Experiment {
  std::string name;
  std::string description;
  Rectangle domain;
  MeshPattern pattern = MeshPattern::Diagonal;
  Index coarse_n = 4;
  int default_levels = 6;
  std::optional<ExactSolution> exact;  // empty for point loads
  LoadFunctional load;
  std::optional<Point> point_source;
  std::vector<std::pair<Method, Regularizer>> configurations;
  std::vector<RateExpectation> expected;
  bool synthetic = false;

  bool supports(Method m, Regularizer r) const;
  std::vector<RateExpectation> expectations(Method m, Regularizer r) const;
};

/// sec61, sec62, sec63, point64, point65, smooth.
const std::vector<Experiment>& experiment_registry();
const Experiment& find_experiment(const std::string& name);

/// u_ref = -(1/2pi) ln|x - x0| + r_h with r_h the P1 solution of the harmonic
/// problem with boundary values (1/2pi) ln|x - x0| on a fine mesh.
struct PointLoadReference {
  std::shared_ptr<const Triangulation> mesh;
  std::shared_ptr<const PointLocator> locator;
  Vector corrector;
  ExactSolution exact;
  /// max |r_h - r_{h/2}| over the vertices of the coarser corrector mesh,
  /// filled by check_self_convergence.
  double self_convergence = std::numeric_limits<double>::quiet_NaN();

  /// Corrector value at x.
  double corrector_at(const Point& x) const;
};

/// The corrector uses the structured mesh with fine_n subdivisions.
PointLoadReference build_point_load_reference(const Rectangle& domain, const Point& x0, Index fine_n,
                                              MeshPattern pattern = MeshPattern::Diagonal,
                                              const SolverOptions& solver = {});

/// Builds the corrector on fine_n / 2 as well and records the largest nodal
/// difference in `ref.self_convergence`.
double check_self_convergence(PointLoadReference& ref, const Rectangle& domain, const Point& x0,
                              Index fine_n, MeshPattern pattern = MeshPattern::Diagonal,
                              const SolverOptions& solver = {});

/// Closed forms used by the registry.
namespace manufactured {
double sec61_u(const Point& x);
Vec2 sec61_grad(const Point& x);
double sec63_u(const Point& x);
Vec2 sec63_grad(const Point& x);
double sec63_f(const Point& x);
}  // namespace manufactured

}  // namespace minres

#endif  // MINRES_EXPERIMENTS_HPP
