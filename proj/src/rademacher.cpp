#include "normlab/rademacher.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include "normlab/parallel.hpp"
#include "normlab/rng.hpp"

namespace normlab {
namespace {

double norm_power(double n, double q) {
  if (q == 2.0) return n * n;
  if (q == 1.0) return n;
  return std::pow(n, q);
}

/// Walks sign patterns gray(i) for i in [begin, end) keeping the running
/// signed sum updated by +-2 x_k per step: O((end-begin) * dim) instead of
/// O((end-begin) * m * dim). Bit k of gray(i) set means eps_k = -1.
template <class Body>
void gray_walk(const std::vector<Eigen::VectorXd>& xs, std::int64_t begin, std::int64_t end,
               Body&& body) {
  const int m = static_cast<int>(xs.size());
  const auto g0 = static_cast<std::uint64_t>(begin) ^ (static_cast<std::uint64_t>(begin) >> 1);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(xs.front().size());
  for (int k = 0; k < m; ++k) s += ((g0 >> k) & 1u) ? -xs[k] : xs[k];
  body(s);
  for (std::int64_t i = begin + 1; i < end; ++i) {
    const int j = std::countr_zero(static_cast<std::uint64_t>(i));
    const auto gi = static_cast<std::uint64_t>(i) ^ (static_cast<std::uint64_t>(i) >> 1);
    if ((gi >> j) & 1u) {
      s -= 2.0 * xs[j];
    } else {
      s += 2.0 * xs[j];
    }
    body(s);
  }
}

/// Fixed chunk layout for a pattern count: boundaries depend only on the
/// workload, never on the worker count, so reductions merged in chunk order
/// are deterministic under any parallelism.
int chunk_count_for(std::int64_t total) { return total >= (1 << 14) ? 64 : 1; }

double sum_over_patterns(const std::vector<Eigen::VectorXd>& xs, std::int64_t total,
                         const std::function<double(const Eigen::VectorXd&)>& value) {
  const int chunks = chunk_count_for(total);
  std::vector<double> subtotal(static_cast<std::size_t>(chunks), 0.0);
  const std::int64_t per = total / chunks;
  parallel_chunks(chunks, [&](int c) {
    const std::int64_t begin = per * c;
    const std::int64_t end = (c + 1 == chunks) ? total : begin + per;
    double acc = 0.0;
    gray_walk(xs, begin, end, [&](const Eigen::VectorXd& s) { acc += value(s); });
    subtotal[static_cast<std::size_t>(c)] = acc;
  });
  double sum = 0.0;
  for (double part : subtotal) sum += part;
  return sum;
}

}  // namespace

VectorFamily VectorFamily::basis(int dim, int m) {
  VectorFamily family;
  family.vectors.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[k % dim] = 1.0;
    family.vectors.push_back(std::move(e));
  }
  return family;
}

void validate_family(const NormedSpace& space, const VectorFamily& family) {
  require(family.size() >= 1, ErrorCode::invalid_argument, "family must be nonempty");
  for (const auto& x : family.vectors) {
    require(x.size() == space.dim(), ErrorCode::dimension_mismatch,
            "family vector dimension does not match the space");
  }
}

void enumerate_sign_patterns(int m, const std::function<void(const Eigen::VectorXi&)>& visit) {
  require(m >= 1 && m <= kMaxEnumeration, ErrorCode::enumeration_too_large,
          "sign-pattern enumeration supports 1 <= m <= 22");
  const std::int64_t total = std::int64_t{1} << m;
  Eigen::VectorXi eps(m);
  for (std::int64_t pattern = 0; pattern < total; ++pattern) {
    for (int k = 0; k < m; ++k) eps[k] = ((pattern >> k) & 1) ? -1 : 1;
    visit(eps);
  }
}

double rademacher_average(const NormedSpace& space, const VectorFamily& family, double q,
                          std::optional<long> mc_budget, std::uint64_t seed) {
  validate_family(space, family);
  require(q >= 1.0, ErrorCode::invalid_argument, "rademacher_average requires q >= 1");
  const int m = family.size();
  if (m <= kMaxEnumeration && !mc_budget.has_value()) {
    const std::int64_t total = std::int64_t{1} << m;
    const double sum = sum_over_patterns(
        family.vectors, total,
        [&](const Eigen::VectorXd& s) { return norm_power(space.norm(s), q); });
    return sum / static_cast<double>(total);
  }
  require(mc_budget.has_value(), ErrorCode::enumeration_too_large,
          "enumeration too large: m > 22 requires a Monte-Carlo budget");
  return rademacher_average_mc(space, family, q, *mc_budget, seed).first;
}

std::pair<double, double> rademacher_average_mc(const NormedSpace& space,
                                                const VectorFamily& family, double q,
                                                long mc_budget, std::uint64_t seed) {
  validate_family(space, family);
  require(mc_budget >= 1, ErrorCode::invalid_argument, "Monte-Carlo budget must be >= 1");
  const int m = family.size();
  const int dim = space.dim();
  const Rng base = Rng(seed).split("rademacher-mc");

  const int chunks = mc_budget >= 4096 ? 64 : 1;
  const long per = mc_budget / chunks;
  const long extra = mc_budget % chunks;
  std::vector<double> sum1(static_cast<std::size_t>(chunks), 0.0);
  std::vector<double> sum2(static_cast<std::size_t>(chunks), 0.0);
  parallel_chunks(chunks, [&](int c) {
    Rng rng = base.split(static_cast<std::uint64_t>(c));
    const long draws = per + (c < extra ? 1 : 0);
    Eigen::VectorXd s(dim);
    double acc1 = 0.0;
    double acc2 = 0.0;
    for (long d = 0; d < draws; ++d) {
      s.setZero();
      std::uint64_t bits = 0;
      for (int k = 0; k < m; ++k) {
        if (k % 64 == 0) bits = rng.next_u64();
        if ((bits >> (k % 64)) & 1u) {
          s -= family.vectors[static_cast<std::size_t>(k)];
        } else {
          s += family.vectors[static_cast<std::size_t>(k)];
        }
      }
      const double v = norm_power(space.norm(s), q);
      acc1 += v;
      acc2 += v * v;
    }
    sum1[static_cast<std::size_t>(c)] = acc1;
    sum2[static_cast<std::size_t>(c)] = acc2;
  });

  double total1 = 0.0;
  double total2 = 0.0;
  for (int c = 0; c < chunks; ++c) {
    total1 += sum1[static_cast<std::size_t>(c)];
    total2 += sum2[static_cast<std::size_t>(c)];
  }
  const double n = static_cast<double>(mc_budget);
  const double mean = total1 / n;
  const double variance = std::max(0.0, total2 / n - mean * mean);
  return {mean, std::sqrt(variance / n)};
}

namespace {

double sum_norm_squares(const NormedSpace& space, const VectorFamily& family) {
  double s = 0.0;
  for (const auto& x : family.vectors) {
    const double n = space.norm(x);
    s += n * n;
  }
  return s;
}

}  // namespace

double type_ratio(const NormedSpace& space, const VectorFamily& family) {
  validate_family(space, family);
  const double denom = sum_norm_squares(space, family);
  require(denom > 0.0, ErrorCode::degenerate_family,
          "degenerate family: all vectors are zero");
  const double avg = rademacher_average(space, family, 2.0, std::nullopt, 0);
  return std::sqrt(avg / denom);
}

double cotype_ratio(const NormedSpace& space, const VectorFamily& family) {
  validate_family(space, family);
  const double avg = rademacher_average(space, family, 2.0, std::nullopt, 0);
  require(avg > 0.0, ErrorCode::degenerate_family,
          "degenerate family: zero Rademacher average");
  const double num = sum_norm_squares(space, family);
  return std::sqrt(num / avg);
}

namespace {

/// Scales the family so sum_k ||x_k||^2 = 1 (removes the flat joint-scaling
/// direction of both ratios). Returns false for an all-zero family.
bool normalize_family(const NormedSpace& space, VectorFamily& family) {
  const double total = sum_norm_squares(space, family);
  if (!(total > 1e-300)) return false;
  const double scale = 1.0 / std::sqrt(total);
  for (auto& x : family.vectors) x *= scale;
  return true;
}

}  // namespace

RademacherReport estimate_constant(const NormedSpace& space, RademacherMode mode,
                                   int family_size, long budget, std::uint64_t seed) {
  require(budget >= 1, ErrorCode::invalid_argument, "search budget must be >= 1");
  require(family_size >= 1 && family_size <= kMaxEnumeration, ErrorCode::enumeration_too_large,
          "family_size must be in [1, 22] for exact inner evaluation");

  const auto ratio_of = [&](const VectorFamily& fam) {
    return mode == RademacherMode::type2 ? type_ratio(space, fam) : cotype_ratio(space, fam);
  };

  const Rng master = Rng(seed).split("estimate-constant");
  const int n = space.dim();

  RademacherReport report;
  report.mode = mode;
  report.seed = seed;
  report.ratio = -std::numeric_limits<double>::infinity();

  long evals = 0;
  const auto evaluate = [&](const VectorFamily& fam) {
    const double r = ratio_of(fam);
    ++evals;
    if (r > report.ratio) {
      report.ratio = r;
      report.best_family = fam;
    }
    return r;
  };

  // The candidate stream below is a pure function of the seed; a larger
  // budget evaluates a superset of a smaller one, so the best ratio is
  // monotone in the budget.
  for (std::uint64_t restart = 0; evals < budget; ++restart) {
    VectorFamily fam;
    if (restart == 0) {
      fam = VectorFamily::basis(n, family_size);
    } else {
      Rng rng = master.split(restart);
      fam.vectors.resize(static_cast<std::size_t>(family_size));
      for (auto& x : fam.vectors) {
        x.resize(n);
        for (int i = 0; i < n; ++i) x[i] = rng.normal();
      }
    }
    if (!normalize_family(space, fam)) continue;

    double best_local = evaluate(fam);
    if (evals >= budget) break;

    // Coordinate-wise polish with shrinking step.
    double step = 0.3;
    while (step >= 1e-3 && evals < budget) {
      bool improved = false;
      for (int k = 0; k < family_size && evals < budget; ++k) {
        for (int i = 0; i < n && evals < budget; ++i) {
          for (const double delta : {step, -step}) {
            if (evals >= budget) break;
            VectorFamily candidate = fam;
            candidate.vectors[static_cast<std::size_t>(k)][i] += delta;
            if (!normalize_family(space, candidate)) continue;
            const double r = evaluate(candidate);
            if (r > best_local) {
              best_local = r;
              fam = std::move(candidate);
              improved = true;
              break;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }

  report.evaluations = evals;
  report.exact = true;
  return report;
}

std::pair<double, double> cross_term_expansion(const QuadraticForm& a,
                                               const VectorFamily& family) {
  require(family.size() >= 1, ErrorCode::invalid_argument, "family must be nonempty");
  require(family.size() <= kMaxEnumeration, ErrorCode::enumeration_too_large,
          "cross_term_expansion requires m <= 22");
  for (const auto& x : family.vectors) {
    require(x.size() == a.dim(), ErrorCode::dimension_mismatch,
            "family vector dimension does not match the form");
  }
  const std::int64_t total = std::int64_t{1} << family.size();
  const double sum = sum_over_patterns(family.vectors, total,
                                       [&](const Eigen::VectorXd& s) { return a.quad(s); });
  const double lhs = sum / static_cast<double>(total);
  double rhs = 0.0;
  for (const auto& x : family.vectors) rhs += a.quad(x);
  return {lhs, rhs};
}

}  // namespace normlab
