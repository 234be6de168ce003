#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "normlab/forms.hpp"
#include "normlab/spaces.hpp"

namespace normlab {

/// Full sign-pattern enumeration is capped at 2^22 (~4M) patterns;
/// beyond that callers must supply a Monte-Carlo budget.
inline constexpr int kMaxEnumeration = 22;

/// Finite family x_1, ..., x_m in a common coordinate space.
struct VectorFamily {
  std::vector<Eigen::VectorXd> vectors;

  int size() const { return static_cast<int>(vectors.size()); }
  int dim() const { return vectors.empty() ? 0 : static_cast<int>(vectors.front().size()); }

  /// e_1, ..., e_m (cycling through coordinates when m > dim).
  static VectorFamily basis(int dim, int m);
};

void validate_family(const NormedSpace& space, const VectorFamily& family);

/// Visits every sign pattern in {-1, +1}^m in plain binary order
/// (bit k set means eps_k = -1). Intended for tests and small m.
void enumerate_sign_patterns(int m, const std::function<void(const Eigen::VectorXi&)>& visit);

/// (1/2^m) sum over eps in {-1,1}^m of ||sum_k eps_k x_k||^q, exact by
/// Gray-code enumeration for m <= 22; with mc_budget, a seeded Monte-Carlo
/// mean over that many sign draws (used automatically when m > 22).
double rademacher_average(const NormedSpace& space, const VectorFamily& family, double q,
                          std::optional<long> mc_budget, std::uint64_t seed);

/// Monte-Carlo mean and standard error (for consistency checks).
std::pair<double, double> rademacher_average_mc(const NormedSpace& space,
                                                const VectorFamily& family, double q,
                                                long mc_budget, std::uint64_t seed);

/// sqrt(average_2 / sum_k ||x_k||^2); a witness lower bound on T_2(X).
double type_ratio(const NormedSpace& space, const VectorFamily& family);

/// sqrt(sum_k ||x_k||^2 / average_2); a witness lower bound on C_2(X).
double cotype_ratio(const NormedSpace& space, const VectorFamily& family);

enum class RademacherMode { type2, cotype2 };

struct RademacherReport {
  VectorFamily best_family;
  double ratio = 0.0;
  RademacherMode mode = RademacherMode::type2;
  long evaluations = 0;
  bool exact = true;  // true iff every inner average used full enumeration
  std::uint64_t seed = 0;
};

/// Maximizes type_ratio or cotype_ratio over families of the given size by
/// multi-start random search with coordinate-wise polish. The first start is
/// the normalized basis family; the candidate stream is a deterministic
/// function of the seed, evaluated in order, so a larger budget explores a
/// superset and the reported ratio is monotone in the budget.
RademacherReport estimate_constant(const NormedSpace& space, RademacherMode mode,
                                   int family_size, long budget, std::uint64_t seed);

/// lhs = (1/2^m) sum_eps A[s_eps, s_eps] with s_eps = sum_k eps_k x_k,
/// rhs = sum_k A[x_k, x_k]. The cross terms cancel exactly over the full
/// sign enumeration, so lhs = rhs up to floating accumulation.
std::pair<double, double> cross_term_expansion(const QuadraticForm& a,
                                               const VectorFamily& family);

}  // namespace normlab
