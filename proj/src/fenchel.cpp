#include "normlab/fenchel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "normlab/format.hpp"
#include "normlab/parallel.hpp"

namespace normlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_grid_compatible(const GridFunction& g) {
  bool any_finite = false;
  for (double v : g.values) any_finite = any_finite || std::isfinite(v);
  require(any_finite, ErrorCode::empty_domain,
          "grid function has an empty effective domain (all values +inf)");
}

/// Discrete slope range over adjacent finite nodes.
struct SlopeRange {
  double lo = kInf;
  double hi = -kInf;
  bool valid = false;
};

SlopeRange discrete_slope_range(const GridFunction& g) {
  SlopeRange range;
  const int n = g.size();
  for (int i = 0; i + 1 < n; ++i) {
    if (!std::isfinite(g.values[static_cast<std::size_t>(i)]) ||
        !std::isfinite(g.values[static_cast<std::size_t>(i + 1)])) {
      continue;
    }
    const double slope = (g.values[static_cast<std::size_t>(i + 1)] -
                          g.values[static_cast<std::size_t>(i)]) /
                         (g.node(i + 1) - g.node(i));
    range.lo = std::min(range.lo, slope);
    range.hi = std::max(range.hi, slope);
    range.valid = true;
  }
  return range;
}

}  // namespace

GridFunction::GridFunction(double lo_, double hi_, std::vector<double> values_)
    : lo(lo_), hi(hi_), values(std::move(values_)) {
  require(lo < hi, ErrorCode::invalid_argument, "grid requires lo < hi");
  require(values.size() >= 2, ErrorCode::invalid_argument, "grid requires N >= 2 samples");
  for (double v : values) {
    require(!std::isnan(v) && v != -kInf, ErrorCode::invalid_argument,
            "grid values must be finite or +inf");
  }
}

GridFunction GridFunction::sample(double lo, double hi, int n,
                                  const std::function<double(double)>& fn) {
  require(n >= 2, ErrorCode::invalid_argument, "grid requires N >= 2 samples");
  GridFunction g;
  g.lo = lo;
  g.hi = hi;
  g.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g.values[static_cast<std::size_t>(i)] = fn(g.node(i));
  return GridFunction(lo, hi, std::move(g.values));
}

bool GridFunction::convex_on_grid() const {
  const int n = size();
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  // Uniform spacing: compare successive differences directly.
  for (int i = 0; i + 2 < n; ++i) {
    const double d0 = values[static_cast<std::size_t>(i + 1)] - values[static_cast<std::size_t>(i)];
    const double d1 =
        values[static_cast<std::size_t>(i + 2)] - values[static_cast<std::size_t>(i + 1)];
    if (d1 < d0) return false;
  }
  return true;
}

GridFunction lf_transform_scan(const GridFunction& g, double dual_lo, double dual_hi, int m) {
  require(m >= 2, ErrorCode::invalid_argument, "dual grid requires M >= 2");
  require(dual_lo < dual_hi, ErrorCode::invalid_argument, "dual grid requires lo < hi");
  check_grid_compatible(g);
  const int n = g.size();
  GridFunction out;
  out.lo = dual_lo;
  out.hi = dual_hi;
  out.values.assign(static_cast<std::size_t>(m), 0.0);

  const int chunks = m >= 4096 ? 64 : 1;
  const int per = m / chunks;
  parallel_chunks(chunks, [&](int c) {
    const int begin = per * c;
    const int end = (c + 1 == chunks) ? m : begin + per;
    for (int j = begin; j < end; ++j) {
      const double s = out.node(j);
      double best = -kInf;
      for (int i = 0; i < n; ++i) {
        const double gi = g.values[static_cast<std::size_t>(i)];
        if (!std::isfinite(gi)) continue;
        const double phi = s * g.node(i) - gi;
        if (phi > best) best = phi;  // first maximizing node wins
      }
      out.values[static_cast<std::size_t>(j)] = best;
    }
  });
  return out;
}

GridFunction lf_transform_monotone(const GridFunction& g, double dual_lo, double dual_hi,
                                   int m) {
  require(m >= 2, ErrorCode::invalid_argument, "dual grid requires M >= 2");
  require(dual_lo < dual_hi, ErrorCode::invalid_argument, "dual grid requires lo < hi");
  require(g.convex_on_grid(), ErrorCode::invalid_argument,
          "monotone path requires a finite convex grid function");
  const int n = g.size();
  GridFunction out;
  out.lo = dual_lo;
  out.hi = dual_hi;
  out.values.assign(static_cast<std::size_t>(m), 0.0);

  // phi_j(i) = s_j x_i - g_i is concave in i for convex g, and its first
  // maximizer is nondecreasing in s_j, so one pointer sweep covers all
  // dual nodes. Advancing on strict increase selects the first maximizer,
  // matching the scan's tie-break.
  int idx = 0;
  for (int j = 0; j < m; ++j) {
    const double s = out.node(j);
    double current = s * g.node(idx) - g.values[static_cast<std::size_t>(idx)];
    while (idx + 1 < n) {
      const double next = s * g.node(idx + 1) - g.values[static_cast<std::size_t>(idx + 1)];
      if (next > current) {
        ++idx;
        current = next;
      } else {
        break;
      }
    }
    out.values[static_cast<std::size_t>(j)] = current;
  }
  return out;
}

GridFunction lf_transform(const GridFunction& g, double dual_lo, double dual_hi, int m) {
  if (g.convex_on_grid()) return lf_transform_monotone(g, dual_lo, dual_hi, m);
  return lf_transform_scan(g, dual_lo, dual_hi, m);
}

LfResult lf_transform_full(const GridFunction& g, double dual_lo, double dual_hi, int m) {
  LfResult result;
  result.grid = lf_transform(g, dual_lo, dual_hi, m);
  const SlopeRange range = discrete_slope_range(g);
  result.slope_lo = range.lo;
  result.slope_hi = range.hi;
  result.extrapolated.assign(static_cast<std::size_t>(m), 0);
  for (int j = 0; j < m; ++j) {
    const double s = result.grid.node(j);
    const bool reliable = range.valid && s >= range.lo && s <= range.hi;
    result.extrapolated[static_cast<std::size_t>(j)] = reliable ? 0 : 1;
  }
  return result;
}

GridFunction biconjugate(const GridFunction& g, int m) {
  check_grid_compatible(g);
  SlopeRange range = discrete_slope_range(g);
  double s_lo = range.valid ? range.lo : 0.0;
  double s_hi = range.valid ? range.hi : 0.0;
  if (!(s_lo < s_hi)) {
    // Affine or single-segment input: widen symmetrically; an odd m puts a
    // dual node exactly on the slope.
    const double w = 0.5 * (1.0 + std::abs(s_lo));
    s_lo -= w;
    s_hi += w;
  }
  const GridFunction gstar = lf_transform(g, s_lo, s_hi, m);
  return lf_transform(gstar, g.lo, g.hi, g.size());
}

double fenchel_young_gap(const SmoothFunction& f, const SmoothFunction& fstar,
                         const Eigen::VectorXd& x, const Eigen::VectorXd& x_star) {
  require(x.size() == f.dim && x_star.size() == fstar.dim && f.dim == fstar.dim,
          ErrorCode::dimension_mismatch, "fenchel_young_gap dimension mismatch");
  return f.eval(x) + fstar.eval(x_star) - x_star.dot(x);
}

DescentReport descent_residual(const SmoothFunction& fstar, const NormedSpace& dual_space,
                               const Eigen::VectorXd& x_star, const Eigen::VectorXd& y_star,
                               double L) {
  require(L > 0.0, ErrorCode::invalid_argument, "descent_residual requires L > 0");
  require(x_star.size() == dual_space.dim() && y_star.size() == dual_space.dim(),
          ErrorCode::dimension_mismatch, "descent_residual dimension mismatch");
  const Eigen::VectorXd diff = y_star - x_star;
  const double lhs =
      fstar.eval(y_star) - fstar.eval(x_star) - fstar.gradient(x_star).dot(diff);
  const double residual = lhs - 0.5 * L * dual_space.norm_squared(diff);
  return DescentReport{residual, Vector{x_star, Frame::dual}, Vector{y_star, Frame::dual}, L};
}

Eigen::VectorXd dual_scaling_subgradient(const NormedSpace& space, const Eigen::VectorXd& v,
                                         double L) {
  require(L > 0.0, ErrorCode::invalid_argument, "dual_scaling_subgradient requires L > 0");
  require(v.size() == space.dim(), ErrorCode::dimension_mismatch,
          "vector dimension does not match the space");
  const int n = space.dim();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  if (v.isZero(0.0)) return y;

  const double p = space.p();
  const double vnorm = space.norm(v);
  switch (space.kind()) {
    case NormKind::p_norm: {
      if (p == 1.0) {
        for (int i = 0; i < n; ++i) {
          if (v[i] != 0.0) y[i] = (v[i] > 0.0 ? vnorm : -vnorm) / L;
        }
      } else if (std::isinf(p)) {
        int k = 0;
        for (int i = 1; i < n; ++i) {
          if (std::abs(v[i]) > std::abs(v[k])) k = i;
        }
        y[k] = (v[k] > 0.0 ? vnorm : -vnorm) / L;
      } else if (p == 2.0) {
        y = v / L;
      } else {
        const double scale = std::pow(vnorm, 2.0 - p) / L;
        for (int i = 0; i < n; ++i) {
          if (v[i] != 0.0) {
            y[i] = (v[i] > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(v[i]), p - 1.0) * scale;
          }
        }
      }
      break;
    }
    case NormKind::weighted_p_norm: {
      const Eigen::VectorXd& w = space.weights();
      if (p == 1.0) {
        for (int i = 0; i < n; ++i) {
          if (v[i] != 0.0) y[i] = (v[i] > 0.0 ? 1.0 : -1.0) * w[i] * vnorm / L;
        }
      } else if (std::isinf(p)) {
        int k = 0;
        for (int i = 1; i < n; ++i) {
          if (w[i] * std::abs(v[i]) > w[k] * std::abs(v[k])) k = i;
        }
        y[k] = (v[k] > 0.0 ? 1.0 : -1.0) * w[k] * vnorm / L;
      } else {
        const double scale = std::pow(vnorm, 2.0 - p) / L;
        for (int i = 0; i < n; ++i) {
          if (v[i] != 0.0) {
            y[i] = (v[i] > 0.0 ? 1.0 : -1.0) * w[i] * std::pow(std::abs(v[i]), p - 1.0) * scale;
          }
        }
      }
      break;
    }
    case NormKind::quadratic_norm:
      y = space.form().matrix() * v / L;
      break;
  }
  return y;
}

ConvexityCheck strong_convexity_from_conjugate(const SmoothFunction& f, const Ball& ball,
                                               double L_of_conjugate, long samples,
                                               std::uint64_t seed) {
  require(L_of_conjugate > 0.0, ErrorCode::invalid_argument,
          "strong_convexity_from_conjugate requires L > 0");
  require(f.dim == ball.space.dim(), ErrorCode::dimension_mismatch,
          "function dimension does not match the ball");
  require(samples >= 1, ErrorCode::invalid_argument, "sample count must be >= 1");
  validate_ball(ball);

  const double mu = 1.0 / L_of_conjugate;
  const NormedSpace& space = ball.space;
  const Rng stream = Rng(seed).split("scv-triples");

  const int chunks = samples >= 4096 ? 64 : 1;
  const long per = samples / chunks;
  const long extra = samples % chunks;
  std::vector<ConvexityCheck> partial(static_cast<std::size_t>(chunks));
  parallel_chunks(chunks, [&](int c) {
    Rng rng = stream.split(static_cast<std::uint64_t>(c));
    ConvexityCheck local;
    local.worst_margin = kInf;
    const long draws = per + (c < extra ? 1 : 0);
    for (long d = 0; d < draws; ++d) {
      Eigen::VectorXd x = sample_ball(ball, rng);
      Eigen::VectorXd y = sample_ball(ball, rng);
      const double lambda = rng.uniform(0.05, 0.95);
      const Eigen::VectorXd mid = lambda * x + (1.0 - lambda) * y;
      const double margin = lambda * f.eval(x) + (1.0 - lambda) * f.eval(y) - f.eval(mid) -
                            0.5 * mu * lambda * (1.0 - lambda) * space.norm_squared(x - y);
      if (margin < -1e-7) ++local.violations;
      if (margin < local.worst_margin) {
        local.worst_margin = margin;
        local.worst = Witness{std::move(x), std::move(y), lambda, margin};
      }
      ++local.samples;
    }
    partial[static_cast<std::size_t>(c)] = std::move(local);
  });

  ConvexityCheck result;
  result.worst_margin = kInf;
  for (const auto& local : partial) {
    result.violations += local.violations;
    result.samples += local.samples;
    if (local.samples > 0 && local.worst_margin < result.worst_margin) {
      result.worst_margin = local.worst_margin;
      result.worst = local.worst;
    }
  }
  return result;
}

double descent_ball_radius(const SmoothFunction& f, const NormedSpace& space,
                           const Eigen::VectorXd& center, double epsilon, double L, int samples,
                           std::uint64_t seed) {
  require(epsilon > 0.0 && L > 0.0, ErrorCode::invalid_argument,
          "descent_ball_radius requires epsilon > 0 and L > 0");
  require(center.size() == space.dim(), ErrorCode::dimension_mismatch,
          "center dimension does not match the space");

  const double cap = 0.25 * epsilon * L;
  const auto directions = space.unit_sphere_samples(samples, Rng(seed).split("delta").seed());
  const auto sup_grad = [&](double r) {
    double sup = space.dual_norm(f.gradient(center));
    for (const auto& u : directions) {
      sup = std::max(sup, space.dual_norm(f.gradient(center + r * u.coords)));
    }
    return sup;
  };

  const double target = 0.5 * epsilon;
  if (sup_grad(cap) <= target) return cap;
  double lo = 0.0;
  double hi = cap;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sup_grad(mid) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

void write_csv(const GridFunction& grid, std::ostream& out) {
  out << "node,value\n";
  for (int i = 0; i < grid.size(); ++i) {
    out << format_double(grid.node(i)) << ',' << format_double(grid.values[static_cast<std::size_t>(i)])
        << '\n';
  }
}

}  // namespace normlab
