#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "normlab/forms.hpp"
#include "normlab/functions.hpp"
#include "normlab/spaces.hpp"

namespace normlab {

/// Extremes of the direction ratio A[h,h] / ||h||_X^2 over nonzero h,
/// with the witnessing directions.
struct FormExtremes {
  double mu = 0.0;
  double L = 0.0;
  Eigen::VectorXd h_min;
  Eigen::VectorXd h_max;
};

/// Probe/polish configuration for form_extremes.
///
/// Probes are deterministic structured directions (each standard basis
/// vector, and the +-1 sign patterns for dim <= 10) plus `budget` seeded
/// random directions. polish_all refines every probe by coordinate
/// ascent/descent with snap-to-zero moves; otherwise only the polish_top
/// best candidates per side are refined.
struct ProbeConfig {
  int budget = 128;
  bool polish_all = false;
  int polish_top = 4;
  int max_passes = 100;
  double step_floor = 3e-8;
};

FormExtremes form_extremes(const NormedSpace& space, const QuadraticForm& form,
                           const ProbeConfig& config, std::uint64_t seed);

enum class CertificateSource { function, operator_field };

/// Inner product A certified to satisfy mu ||h||_X^2 <= A[h,h] <= L ||h||_X^2.
struct InnerProductCertificate {
  QuadraticForm form;
  double mu = 0.0;
  double L = 0.0;
  Eigen::MatrixXd cholesky_upper;  // U with U^T U = form.matrix()
  Vector base_point;
  CertificateSource source = CertificateSource::function;
};

/// Builds the certificate at a differentiability point: symmetrized Jacobian
/// of the gradient (resp. operator), then sphere probing for (mu, L).
/// Throws not_positive_definite with a witness direction when the minimum
/// probe value is <= 0 or the factorization fails.
InnerProductCertificate extract_inner_product(const SmoothFunction& f, const NormedSpace& space,
                                              const Eigen::VectorXd& point, int probe_budget,
                                              std::uint64_t seed);
InnerProductCertificate extract_inner_product(const MonotoneOperator& op,
                                              const NormedSpace& space,
                                              const Eigen::VectorXd& point, int probe_budget,
                                              std::uint64_t seed);

/// (sqrt(mu), sqrt(L)) after re-validating the sandwich on fresh probes;
/// throws certificate_stale on a violation beyond 1e-9.
std::pair<double, double> equivalence_constants(const InnerProductCertificate& cert,
                                                const NormedSpace& space, int probes,
                                                std::uint64_t seed);

struct ConditioningResult {
  QuadraticForm form;
  double ratio = 1.0;
  double mu = 0.0;
  double L = 0.0;
  long evaluations = 0;
};

/// Minimizes L(A)/mu(A) over positive definite forms A = R^T R with R upper
/// triangular, log-parameterized diagonal, det R = 1 (fixes the scale).
/// Multi-start derivative-free search; restart 0 starts at the identity.
/// The winner is re-evaluated with a heavy probe pass, so the reported
/// ratio is tight for the returned form. sqrt(ratio) is an upper bound on
/// the Banach-Mazur distance to a Euclidean space realized by the witness.
ConditioningResult min_conditioning(const NormedSpace& space, long budget, int restarts,
                                    std::uint64_t seed);

/// Conditioning ratio of the identity form (no search); exact at the
/// structured probes, e.g. equal to n on l_1^n.
ConditioningResult identity_conditioning(const NormedSpace& space, int probe_budget,
                                         std::uint64_t seed);

}  // namespace normlab
