#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <utility>

#include "normlab/functions.hpp"
#include "normlab/quadratic.hpp"
#include "normlab/rng.hpp"
#include "normlab/spaces.hpp"

namespace normlab {

/// Sampling stays inside the closed ball of radius kOpenBallShrink * radius;
/// the open ball of the constants' definition cannot be distinguished from
/// its closure by sampling, so the shrink documents the gap.
inline constexpr double kOpenBallShrink = 0.999;

/// Pairs closer than this in the space norm are resampled (never divided).
inline constexpr double kDegeneratePairDistance = 1e-10;

struct Ball {
  Eigen::VectorXd center;
  double radius = 0.0;
  NormedSpace space;
};

void validate_ball(const Ball& ball);

/// Uniform draw from the shrunken closed ball by rejection from the unit
/// ball's bounding box (exact uniformity at desk dimensions).
Eigen::VectorXd sample_ball(const Ball& ball, Rng& rng);

enum class Method { secant, gradient_monotonicity, hessian, operator_field };

const char* to_string(Method method);

/// Extremal sample achieving an estimate; lambda is NaN for pair quotients.
struct Witness {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
};

/// Empirical (mu_hat, L_hat) with provenance and reproducibility metadata.
/// These are witness-backed estimates, not rigorous certificates: mu_hat is
/// an upper bound on the true modulus (each sampled triple/pair constrains
/// mu from above), L_hat a lower bound on the true Lipschitz constant.
struct CertifiedConstants {
  double mu_hat = 0.0;
  double L_hat = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
  Method method = Method::secant;  // method that achieved mu_hat
  std::optional<double> secant_mu;
  std::optional<double> monotonicity_mu;
  Witness mu_witness;
  Witness L_witness;
};

/// inf over seeded triples (x, y, lambda) of the secant quotient
/// 2 [lf(x) + (1-l)f(y) - f(lx + (1-l)y)] / (l (1-l) ||x-y||^2);
/// lambda uniform on [0.05, 0.95]; the best witness is refined by a
/// derivative-free polish over (x, y, lambda).
double secant_modulus(const SmoothFunction& f, const Ball& ball, long samples,
                      std::uint64_t seed, Witness* witness = nullptr);

/// inf over seeded pairs of <f'(x) - f'(y), x - y> / ||x - y||^2.
double gradient_monotonicity_modulus(const SmoothFunction& f, const Ball& ball, long samples,
                                     std::uint64_t seed, Witness* witness = nullptr);

/// sup over seeded pairs of ||f'(x) - f'(y)||_{X*} / ||x - y||_X.
double lipschitz_constant(const SmoothFunction& f, const Ball& ball, long samples,
                          std::uint64_t seed, Witness* witness = nullptr);

struct CertifyConfig {
  long samples = 10000;
  std::uint64_t seed = 0;
  bool use_secant = true;
  bool use_monotonicity = true;
};

/// mu_hat = min over the requested moduli, L_hat = lipschitz_constant.
CertifiedConstants certify(const SmoothFunction& f, const Ball& ball,
                           const CertifyConfig& config);

/// Operator analogue: mu from <T(x) - T(y), x - y> / ||x - y||^2,
/// L from ||T(x) - T(y)||_{X*} / ||x - y||_X, identical sample streams to
/// the gradient-based paths of certify.
CertifiedConstants operator_certify(const MonotoneOperator& op, const Ball& ball,
                                    const CertifyConfig& config);

/// (mu, L) = extremes of the symmetrized second derivative A = f''(point)
/// over unit directions of the space norm (probe + polish).
/// Throws differentiability_failure on non-finite Hessian entries.
std::pair<double, double> hessian_bounds(const SmoothFunction& f, const NormedSpace& space,
                                         const Eigen::VectorXd& point, int sphere_budget,
                                         std::uint64_t seed);

}  // namespace normlab
