#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "normlab/errors.hpp"
#include "normlab/forms.hpp"

namespace normlab {

enum class Frame { primal, dual };

/// Coordinate vector tagged with the space it lives in (X or X*).
/// The dual X* is identified with R^n via the standard pairing <w, v> = w.v;
/// the tag records which side of the pairing a stored vector belongs to.
struct Vector {
  Eigen::VectorXd coords;
  Frame frame = Frame::primal;
};

enum class NormKind { p_norm, weighted_p_norm, quadratic_norm };

/// Finite-dimensional real normed space with exact primal and dual norms.
///
/// Supported norms: l_p for p in [1, inf] (p = 1 and p = inf are explicit
/// branches, not limits), weighted l_p with positive weights
/// ||v|| = (sum_i w_i |v_i|^p)^(1/p)  (max_i w_i |v_i| for p = inf),
/// and quadratic norms ||v|| = sqrt(v^T A v) for symmetric positive
/// definite A. Every supported norm has a closed-form dual:
/// Holder conjugate q = p/(p-1) with weights w^(1-q), and A^{-1} for
/// quadratic norms (factorized once at construction and cached).
class NormedSpace {
 public:
  static NormedSpace lp(int dim, double p);
  static NormedSpace weighted_lp(int dim, double p, Eigen::VectorXd weights);
  static NormedSpace quadratic(QuadraticForm form);

  int dim() const { return dim_; }
  NormKind kind() const { return kind_; }
  double p() const { return p_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const QuadraticForm& form() const { return form_; }

  double norm(const Eigen::VectorXd& v) const;
  double dual_norm(const Eigen::VectorXd& w) const;

  /// norm(v)^2, skipping the square root for Euclidean and quadratic kinds
  /// (keeps Rayleigh-style ratios exact where the norm is itself a form).
  double norm_squared(const Eigen::VectorXd& v) const;

  /// Space whose norm is this space's dual norm. Applying dual_space twice
  /// returns a space with the same norm for p in (1, inf) and quadratic kinds.
  NormedSpace dual_space() const;

  /// Deterministic unit-norm samples: Gaussian directions normalized by the
  /// space norm; |norm - 1| <= 1e-12 for every returned vector.
  std::vector<Vector> unit_sphere_samples(int count, std::uint64_t seed) const;

  /// Halfwidths of the tightest axis-aligned box containing the unit ball
  /// (used for rejection sampling of balls).
  const Eigen::VectorXd& unit_ball_box() const { return box_halfwidths_; }

  /// Short human-readable descriptor, e.g. "l_1.5^3".
  std::string describe() const;

 private:
  NormedSpace(int dim, NormKind kind, double p, Eigen::VectorXd weights, QuadraticForm form);

  void check_dim(const Eigen::VectorXd& v) const;

  int dim_ = 0;
  NormKind kind_ = NormKind::p_norm;
  double p_ = 2.0;
  Eigen::VectorXd weights_;   // weighted_p_norm only
  QuadraticForm form_;        // quadratic_norm only (identity placeholder otherwise)
  Eigen::MatrixXd chol_lower_;  // cached factor A = L L^T
  Eigen::MatrixXd inverse_;     // cached A^{-1}, symmetric
  Eigen::VectorXd box_halfwidths_;
};

}  // namespace normlab
