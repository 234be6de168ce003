#include "normlab/forms.hpp"

#include <cmath>

namespace normlab {

QuadraticForm::QuadraticForm(Eigen::MatrixXd matrix) : matrix_(std::move(matrix)) {
  require(matrix_.rows() == matrix_.cols(), ErrorCode::invalid_argument,
          "quadratic form requires a square matrix");
  require(matrix_.rows() >= 1, ErrorCode::invalid_argument,
          "quadratic form requires dimension >= 1");
  require(matrix_.allFinite(), ErrorCode::invalid_argument,
          "quadratic form entries must be finite");
  const double asym = (matrix_ - matrix_.transpose()).cwiseAbs().maxCoeff();
  require(asym <= 1e-12, ErrorCode::invalid_argument,
          "matrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
}

double QuadraticForm::operator()(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
  require(x.size() == matrix_.rows() && y.size() == matrix_.rows(),
          ErrorCode::dimension_mismatch, "form/vector dimension mismatch");
  return x.dot(matrix_ * y);
}

double QuadraticForm::quad(const Eigen::VectorXd& x) const {
  require(x.size() == matrix_.rows(), ErrorCode::dimension_mismatch,
          "form/vector dimension mismatch");
  return x.dot(matrix_ * x);
}

QuadraticForm QuadraticForm::identity(int n) {
  return QuadraticForm(Eigen::MatrixXd::Identity(n, n));
}

QuadraticForm symmetrize(const Eigen::MatrixXd& raw) {
  require(raw.rows() == raw.cols(), ErrorCode::invalid_argument,
          "symmetrize requires a square matrix");
  // (b_ij + b_ji)/2 computed once per unordered pair so the result is
  // exactly symmetric in floating point.
  Eigen::MatrixXd sym(raw.rows(), raw.cols());
  for (Eigen::Index i = 0; i < raw.rows(); ++i) {
    sym(i, i) = raw(i, i);
    for (Eigen::Index j = i + 1; j < raw.cols(); ++j) {
      const double v = 0.5 * (raw(i, j) + raw(j, i));
      sym(i, j) = v;
      sym(j, i) = v;
    }
  }
  return QuadraticForm(std::move(sym));
}

QuadraticForm conjugate_quadratic(const QuadraticForm& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a.matrix());
  require(llt.info() == Eigen::Success, ErrorCode::not_positive_definite,
          "conjugate_quadratic requires a positive definite form");
  Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(a.dim(), a.dim()));
  return symmetrize(inv);
}

double inverse_pair_residual(const QuadraticForm& a, const QuadraticForm& b) {
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch,
          "inverse_pair_residual dimension mismatch");
  const Eigen::MatrixXd residual =
      a.matrix() * b.matrix() - Eigen::MatrixXd::Identity(a.dim(), a.dim());
  return residual.cwiseAbs().maxCoeff();
}

}  // namespace normlab
