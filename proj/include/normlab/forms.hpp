#pragma once

#include <Eigen/Dense>

#include "normlab/errors.hpp"

namespace normlab {

/// Symmetric bilinear form on R^n, stored as its dense matrix.
///
/// Construction rejects matrices whose asymmetry exceeds 1e-12 in max norm;
/// all internal producers (symmetrize, conjugate_quadratic) emit exactly
/// symmetric matrices, so the check only fires on raw user input.
class QuadraticForm {
 public:
  explicit QuadraticForm(Eigen::MatrixXd matrix);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  /// Bilinear evaluation A[x, y] = x^T M y.
  double operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  /// Quadratic evaluation A[x, x].
  double quad(const Eigen::VectorXd& x) const;

  static QuadraticForm identity(int n);

 private:
  Eigen::MatrixXd matrix_;
};

/// (B + B^T)/2. Quadratic values are preserved: x^T B x = result[x, x].
QuadraticForm symmetrize(const Eigen::MatrixXd& raw);

/// Inverse form A^{-1} of a positive definite A; the conjugate of
/// g = (1/2) A[x, x] is g* = (1/2) A^{-1}[x*, x*].
QuadraticForm conjugate_quadratic(const QuadraticForm& a);

/// max|A·B - I|, entrywise.
double inverse_pair_residual(const QuadraticForm& a, const QuadraticForm& b);

}  // namespace normlab
