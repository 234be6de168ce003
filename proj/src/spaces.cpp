#include "normlab/spaces.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "normlab/rng.hpp"

namespace normlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_inf(double p) { return std::isinf(p); }

double lp_sum(const Eigen::VectorXd& v, double p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v[i]), p);
  return acc;
}

double holder_conjugate(double p) {
  if (p == 1.0) return kInf;
  if (is_inf(p)) return 1.0;
  return p / (p - 1.0);
}

}  // namespace

NormedSpace::NormedSpace(int dim, NormKind kind, double p, Eigen::VectorXd weights,
                         QuadraticForm form)
    : dim_(dim), kind_(kind), p_(p), weights_(std::move(weights)), form_(std::move(form)) {
  require(dim_ >= 1, ErrorCode::invalid_argument, "space dimension must be >= 1");

  box_halfwidths_ = Eigen::VectorXd::Ones(dim_);
  switch (kind_) {
    case NormKind::p_norm:
      // Unit l_p ball sits inside the unit box for every p >= 1.
      break;
    case NormKind::weighted_p_norm: {
      for (int i = 0; i < dim_; ++i) {
        box_halfwidths_[i] = is_inf(p_) ? 1.0 / weights_[i]
                                        : std::pow(weights_[i], -1.0 / p_);
      }
      break;
    }
    case NormKind::quadratic_norm: {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(form_.matrix());
      require(eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 1e-10,
              ErrorCode::not_positive_definite,
              "quadratic norm matrix must be positive definite "
              "(smallest eigenvalue > 1e-10)");
      Eigen::LLT<Eigen::MatrixXd> llt(form_.matrix());
      require(llt.info() == Eigen::Success, ErrorCode::not_positive_definite,
              "quadratic norm matrix failed Cholesky factorization");
      chol_lower_ = llt.matrixL();
      inverse_ = symmetrize(llt.solve(Eigen::MatrixXd::Identity(dim_, dim_))).matrix();
      // Tight ellipsoid bounding box: |v_i| <= sqrt((A^{-1})_ii).
      for (int i = 0; i < dim_; ++i) box_halfwidths_[i] = std::sqrt(inverse_(i, i));
      break;
    }
  }
}

NormedSpace NormedSpace::lp(int dim, double p) {
  require(p >= 1.0, ErrorCode::invalid_argument, "p-norm requires p >= 1");
  return NormedSpace(dim, NormKind::p_norm, p, Eigen::VectorXd(), QuadraticForm::identity(1));
}

NormedSpace NormedSpace::weighted_lp(int dim, double p, Eigen::VectorXd weights) {
  require(p >= 1.0, ErrorCode::invalid_argument, "weighted p-norm requires p >= 1");
  require(weights.size() == dim, ErrorCode::dimension_mismatch,
          "weight vector length must equal dim");
  require((weights.array() > 0.0).all(), ErrorCode::invalid_argument,
          "weights must all be positive");
  return NormedSpace(dim, NormKind::weighted_p_norm, p, std::move(weights),
                     QuadraticForm::identity(1));
}

NormedSpace NormedSpace::quadratic(QuadraticForm form) {
  const int n = form.dim();
  return NormedSpace(n, NormKind::quadratic_norm, 2.0, Eigen::VectorXd(), std::move(form));
}

void NormedSpace::check_dim(const Eigen::VectorXd& v) const {
  require(v.size() == dim_, ErrorCode::dimension_mismatch,
          "vector has length " + std::to_string(v.size()) + ", space has dim " +
              std::to_string(dim_));
}

double NormedSpace::norm(const Eigen::VectorXd& v) const {
  check_dim(v);
  switch (kind_) {
    case NormKind::p_norm:
      if (p_ == 1.0) return v.cwiseAbs().sum();
      if (p_ == 2.0) return std::sqrt(v.squaredNorm());
      if (is_inf(p_)) return v.cwiseAbs().maxCoeff();
      return std::pow(lp_sum(v, p_), 1.0 / p_);
    case NormKind::weighted_p_norm: {
      if (is_inf(p_)) return (weights_.array() * v.cwiseAbs().array()).maxCoeff();
      double acc = 0.0;
      for (int i = 0; i < dim_; ++i) acc += weights_[i] * std::pow(std::abs(v[i]), p_);
      return p_ == 1.0 ? acc : std::pow(acc, 1.0 / p_);
    }
    case NormKind::quadratic_norm:
      return std::sqrt(form_.quad(v));
  }
  return 0.0;
}

double NormedSpace::norm_squared(const Eigen::VectorXd& v) const {
  if (kind_ == NormKind::quadratic_norm) return form_.quad(v);
  if (kind_ == NormKind::p_norm && p_ == 2.0) return v.squaredNorm();
  const double n = norm(v);
  return n * n;
}

double NormedSpace::dual_norm(const Eigen::VectorXd& w) const {
  check_dim(w);
  switch (kind_) {
    case NormKind::p_norm: {
      const double q = holder_conjugate(p_);
      if (q == 1.0) return w.cwiseAbs().sum();
      if (q == 2.0) return std::sqrt(w.squaredNorm());
      if (is_inf(q)) return w.cwiseAbs().maxCoeff();
      return std::pow(lp_sum(w, q), 1.0 / q);
    }
    case NormKind::weighted_p_norm: {
      const double q = holder_conjugate(p_);
      if (is_inf(q)) return (w.cwiseAbs().array() / weights_.array()).maxCoeff();
      if (q == 1.0) return (w.cwiseAbs().array() / weights_.array()).sum();
      // Dual weights w_i^(1-q); q/p = q - 1.
      double acc = 0.0;
      for (int i = 0; i < dim_; ++i)
        acc += std::pow(weights_[i], 1.0 - q) * std::pow(std::abs(w[i]), q);
      return std::pow(acc, 1.0 / q);
    }
    case NormKind::quadratic_norm: {
      // sqrt(w^T A^{-1} w) via the cached factor: ||L^{-1} w||_2.
      Eigen::VectorXd solved =
          chol_lower_.triangularView<Eigen::Lower>().solve(w);
      return std::sqrt(solved.squaredNorm());
    }
  }
  return 0.0;
}

NormedSpace NormedSpace::dual_space() const {
  switch (kind_) {
    case NormKind::p_norm:
      return lp(dim_, holder_conjugate(p_));
    case NormKind::weighted_p_norm: {
      const double q = holder_conjugate(p_);
      Eigen::VectorXd dual_weights(dim_);
      if (p_ == 1.0 || is_inf(p_)) {
        dual_weights = weights_.cwiseInverse();
      } else {
        for (int i = 0; i < dim_; ++i) dual_weights[i] = std::pow(weights_[i], 1.0 - q);
      }
      return weighted_lp(dim_, q, std::move(dual_weights));
    }
    case NormKind::quadratic_norm:
      return quadratic(QuadraticForm(inverse_));
  }
  throw LabError(ErrorCode::invalid_argument, "unknown norm kind");
}

std::vector<Vector> NormedSpace::unit_sphere_samples(int count, std::uint64_t seed) const {
  require(count >= 1, ErrorCode::invalid_argument, "sample count must be >= 1");
  Rng rng = Rng(seed).split("unit-sphere");
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    Eigen::VectorXd v(dim_);
    for (int i = 0; i < dim_; ++i) v[i] = rng.normal();
    double n = norm(v);
    if (!(n > 1e-300)) continue;  // essentially impossible; redraw
    v /= n;
    // One correction pass tightens pow-based norms to the 1e-12 contract.
    n = norm(v);
    if (std::abs(n - 1.0) > 1e-15) v /= n;
    out.push_back(Vector{std::move(v), Frame::primal});
  }
  return out;
}

std::string NormedSpace::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case NormKind::p_norm:
      if (is_inf(p_)) {
        os << "l_inf^" << dim_;
      } else {
        os << "l_" << p_ << "^" << dim_;
      }
      break;
    case NormKind::weighted_p_norm:
      os << "weighted-l_" << (is_inf(p_) ? std::string("inf") : std::to_string(p_)) << "^"
         << dim_;
      break;
    case NormKind::quadratic_norm:
      os << "quadratic^" << dim_;
      break;
  }
  return os.str();
}

}  // namespace normlab
