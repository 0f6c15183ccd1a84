#ifndef MINRES_TYPES_HPP
#define MINRES_TYPES_HPP

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace minres {

using Index = Eigen::Index;
using Point = Eigen::Vector2d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Raised for violated preconditions on user-supplied arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A load or field in a representation an operator cannot consume
/// (e.g. the elementwise mean of a point mass).
class UnsupportedRepresentation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite integrand values or singular local matrices.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, Index element = -1)
      : std::runtime_error(what), element_(element) {}
  Index element() const { return element_; }

 private:
  Index element_;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, Index iterations, double residual)
      : std::runtime_error(what), iterations_(iterations), residual_(residual) {}
  Index iterations() const { return iterations_; }
  double residual() const { return residual_; }

 private:
  Index iterations_;
  double residual_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace minres

#endif  // MINRES_TYPES_HPP
