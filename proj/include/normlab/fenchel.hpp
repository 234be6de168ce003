#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <ostream>
#include <vector>

#include "normlab/certify.hpp"
#include "normlab/functions.hpp"
#include "normlab/spaces.hpp"

namespace normlab {

/// Sampled 1-D function on a uniform grid; node i sits at
/// lo + i * (hi - lo) / (N - 1). Values are finite or +inf (excluded from
/// the effective domain); NaN and -inf are rejected at construction.
struct GridFunction {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> values;

  GridFunction() = default;
  GridFunction(double lo, double hi, std::vector<double> values);

  int size() const { return static_cast<int>(values.size()); }
  double node(int i) const {
    return lo + static_cast<double>(i) * (hi - lo) / static_cast<double>(size() - 1);
  }

  static GridFunction sample(double lo, double hi, int n,
                             const std::function<double(double)>& fn);

  /// True when all values are finite and the discrete slopes are
  /// nondecreasing (the fast transform path applies).
  bool convex_on_grid() const;
};

/// Discrete Legendre-Fenchel transform with extrapolation marks: dual nodes
/// outside the input's discrete slope range cannot be represented reliably
/// by a finite grid and carry extrapolated = 1.
struct LfResult {
  GridFunction grid;
  std::vector<std::uint8_t> extrapolated;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
};

/// g*(s) = max over input nodes x of s*x - g(x), evaluated at m uniform dual
/// nodes on [dual_lo, dual_hi]. Uses the O(N+M) monotone-argmax path when g
/// is convex on its grid (all values finite), the O(N*M) scan otherwise;
/// both paths take the first maximizing node and agree bit for bit.
GridFunction lf_transform(const GridFunction& g, double dual_lo, double dual_hi, int m);
LfResult lf_transform_full(const GridFunction& g, double dual_lo, double dual_hi, int m);

/// Reference scan and fast path, exposed for cross-checking.
GridFunction lf_transform_scan(const GridFunction& g, double dual_lo, double dual_hi, int m);
GridFunction lf_transform_monotone(const GridFunction& g, double dual_lo, double dual_hi, int m);

/// lf_transform twice: out to m dual nodes spanning the discrete slope range,
/// then back to the input grid. Produces the lower convex envelope at the
/// nodes, <= g pointwise and = g (to grid resolution) for convex g.
GridFunction biconjugate(const GridFunction& g, int m);

/// f(x) + f*(x*) - <x*, x>; >= 0 up to rounding for a true conjugate pair,
/// = 0 exactly when x* = f'(x).
double fenchel_young_gap(const SmoothFunction& f, const SmoothFunction& fstar,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& x_star);

struct DescentReport {
  double residual = 0.0;
  Vector x_star;
  Vector y_star;
  double L_used = 0.0;
};

/// residual = f*(y*) - f*(x*) - <(f*)'(x*), y* - x*> - (L/2) ||y* - x*||^2,
/// where the norm is the dual space's own norm; <= 0 (up to rounding)
/// whenever L is a valid Lipschitz constant of (f*)' on the segment.
DescentReport descent_residual(const SmoothFunction& fstar, const NormedSpace& dual_space,
                               const Eigen::VectorXd& x_star, const Eigen::VectorXd& y_star,
                               double L);

/// y* in the subdifferential of (1/(2L)) ||.||_X^2 at v, selected so that
/// ||y*||_{X*} = ||v||_X / L and <y*, v> = ||v||_X^2 / L hold exactly.
/// Nonunique cases use deterministic tie-breaks: for p = 1 the sign pattern
/// of v (zero coordinates stay zero); for p = inf all mass on the
/// lowest-index maximal coordinate. v = 0 returns 0.
Eigen::VectorXd dual_scaling_subgradient(const NormedSpace& space, const Eigen::VectorXd& v,
                                         double L);

struct ConvexityCheck {
  long violations = 0;
  double worst_margin = 0.0;
  Witness worst;
  long samples = 0;
};

/// Checks the secant inequality with modulus mu = 1 / L_of_conjugate on
/// seeded triples inside the ball; counts margins below -1e-7 as violations
/// and reports the worst margin with its witness triple.
ConvexityCheck strong_convexity_from_conjugate(const SmoothFunction& f, const Ball& ball,
                                               double L_of_conjugate, long samples,
                                               std::uint64_t seed);

/// Radius recipe min(delta, epsilon * L / 4) where delta is found by
/// bisection on the sampled bound sup ||f'(x)||_{X*} <= epsilon / 2 over
/// ||x - center||_X <= delta.
double descent_ball_radius(const SmoothFunction& f, const NormedSpace& space,
                           const Eigen::VectorXd& center, double epsilon, double L, int samples,
                           std::uint64_t seed);

/// CSV export of (node, value) rows with '.' decimals and LF line endings.
void write_csv(const GridFunction& grid, std::ostream& out);

}  // namespace normlab
