#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>

#include "normlab/errors.hpp"

namespace normlab {

/// Central-difference step: cbrt(machine epsilon) * (1 + |x|_inf).
double fd_step(const Eigen::VectorXd& x);

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x);

/// Central-difference Jacobian of a vector field.
Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field,
                            const Eigen::VectorXd& x);

/// Second differences of a scalar function (step eps^(1/4) * (1 + |x|_inf)).
Eigen::MatrixXd fd_hessian_of_eval(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x);

/// Scalar function on R^n with optional analytic derivatives.
/// Missing derivatives fall back to central finite differences.
struct SmoothFunction {
  std::function<double(const Eigen::VectorXd&)> eval;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> grad;  // optional
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> hess;  // optional
  int dim = 0;
  std::string name;

  double operator()(const Eigen::VectorXd& x) const { return eval(x); }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const {
    return grad ? grad(x) : fd_gradient(eval, x);
  }

  /// Analytic Hessian, Jacobian of the analytic gradient, or second
  /// differences of eval, in that order of preference. Not symmetrized.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const {
    if (hess) return hess(x);
    if (grad) return fd_jacobian(grad, x);
    return fd_hessian_of_eval(eval, x);
  }
};

/// Operator T : X -> X* in coordinates. linear_matrix, when present, is a
/// shortcut certified by apply(v) = matrix * v; consumers may use it for
/// exact Jacobians.
struct MonotoneOperator {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;
  int dim = 0;
  std::optional<Eigen::MatrixXd> linear_matrix;
  std::string name;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return apply(x); }
};

/// Gradient field of f viewed as an operator X -> X*.
MonotoneOperator gradient_operator(const SmoothFunction& f);

}  // namespace normlab
