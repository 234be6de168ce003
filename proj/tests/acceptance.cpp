// Acceptance suite: one line per criterion, [PASS]/[FAIL], nonzero exit on
// any failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "normlab/catalog.hpp"
#include "normlab/certify.hpp"
#include "normlab/fenchel.hpp"
#include "normlab/format.hpp"
#include "normlab/quadratic.hpp"
#include "normlab/rademacher.hpp"
#include "normlab/rng.hpp"
#include "normlab/run.hpp"
#include "oracles.hpp"

using namespace normlab;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& info) {
    if (detail.empty()) detail = info;
  }
};

Eigen::MatrixXd random_spd(Rng& rng, int dim, double max_condition) {
  Eigen::MatrixXd gauss(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) gauss(i, j) = rng.normal();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd eig(dim);
  const double half_log = 0.5 * std::log(max_condition);
  for (int i = 0; i < dim; ++i) eig[i] = std::exp(rng.uniform(-half_log, half_log));
  Eigen::MatrixXd m = q * eig.asDiagonal() * q.transpose();
  return 0.5 * (m + m.transpose());
}

SmoothFunction quadratic_fn(const Eigen::MatrixXd& q) {
  SmoothFunction f;
  f.dim = static_cast<int>(q.rows());
  f.name = "quadratic";
  auto shared = std::make_shared<Eigen::MatrixXd>(q);
  f.eval = [shared](const Eigen::VectorXd& x) { return 0.5 * x.dot(*shared * x); };
  f.grad = [shared](const Eigen::VectorXd& x) -> Eigen::VectorXd { return *shared * x; };
  return f;
}

VectorFamily random_family(Rng& rng, int dim, int m) {
  VectorFamily family;
  family.vectors.resize(static_cast<std::size_t>(m));
  for (auto& x : family.vectors) {
    x.resize(dim);
    for (int i = 0; i < dim; ++i) x[i] = rng.normal();
  }
  return family;
}

// ---------------------------------------------------------------------------
// Criterion 1: cross-term cancellation, 100 seeded cases, m <= 8, dim <= 6.
Outcome criterion_cancellation() {
  Outcome out;
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform_index(5));
    const int m = 2 + static_cast<int>(rng.uniform_index(7));
    Eigen::MatrixXd raw(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) raw(i, j) = rng.normal();
    }
    const QuadraticForm a = symmetrize(raw);
    const VectorFamily family = random_family(rng, dim, m);
    const auto [lhs, rhs] = cross_term_expansion(a, family);
    const double rel = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
    worst = std::max(worst, rel);
    if (rel > 1e-10) {
      out.fail("case " + std::to_string(trial) + " relative gap " + std::to_string(rel));
    }
  }
  out.note("worst relative gap " + format_double(worst));
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 2: basis-family witnesses and Euclidean neutrality.
Outcome criterion_type_cotype() {
  Outcome out;
  const auto l1 = NormedSpace::lp(2, 1.0);
  const auto linf = NormedSpace::lp(2, std::numeric_limits<double>::infinity());
  const auto basis = VectorFamily::basis(2, 2);
  const double root2 = std::sqrt(2.0);

  if (std::abs(type_ratio(l1, basis) - root2) > 1e-12) {
    out.fail("l_1^2 basis type ratio missed sqrt(2)");
  }
  if (std::abs(cotype_ratio(linf, basis) - root2) > 1e-12) {
    out.fail("l_inf^2 basis cotype ratio missed sqrt(2)");
  }

  Rng rng(202);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + trial % 3;
    const auto space = NormedSpace::lp(dim, 2.0);
    const VectorFamily family = random_family(rng, dim, 2 + static_cast<int>(rng.uniform_index(5)));
    const double t = type_ratio(space, family);
    const double c = cotype_ratio(space, family);
    worst = std::max({worst, std::abs(t - 1.0), std::abs(c - 1.0)});
    if (std::abs(t - 1.0) > 1e-9 || std::abs(c - 1.0) > 1e-9) {
      out.fail("Euclidean family " + std::to_string(trial) + " ratio off unity");
    }
  }
  out.note("worst Euclidean deviation " + format_double(worst));
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 3: certification of diag(1,4) on a Euclidean ball, 1e5 samples.
Outcome criterion_certify() {
  Outcome out;
  Eigen::MatrixXd q(2, 2);
  q << 1.0, 0.0, 0.0, 4.0;
  const Ball ball{Eigen::VectorXd::Zero(2), 1.0, NormedSpace::lp(2, 2.0)};
  CertifyConfig config;
  config.samples = 100000;
  config.seed = 303;
  const CertifiedConstants cc = certify(quadratic_fn(q), ball, config);

  if (!(cc.mu_hat >= 1.0 - 1e-4 && cc.mu_hat <= 1.0)) {
    out.fail("mu_hat " + format_double(cc.mu_hat) + " outside [1-1e-4, 1]");
  }
  if (!(cc.L_hat >= 4.0 - 1e-4 && cc.L_hat <= 4.0)) {
    out.fail("L_hat " + format_double(cc.L_hat) + " outside [4-1e-4, 4]");
  }
  const double sqrt_ratio = std::sqrt(cc.L_hat / cc.mu_hat);
  if (std::abs(sqrt_ratio - 2.0) > 1e-3) {
    out.fail("sqrt(L/mu) " + format_double(sqrt_ratio) + " not 2 +- 1e-3");
  }
  out.note("mu_hat " + format_double(cc.mu_hat) + ", L_hat " + format_double(cc.L_hat));
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 4: inner-product extraction on 20 seeded SPD quadratics.
Outcome criterion_extraction() {
  Outcome out;
  Rng rng(404);
  double worst_recovery = 0.0;
  long sandwich_violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform_index(4));
    const Eigen::MatrixXd q = random_spd(rng, dim, 100.0);
    const auto space = NormedSpace::lp(dim, 2.0);
    Eigen::VectorXd point(dim);
    for (int i = 0; i < dim; ++i) point[i] = rng.uniform(-1.0, 1.0);

    const InnerProductCertificate cert =
        extract_inner_product(quadratic_fn(q), space, point, 64,
                              static_cast<std::uint64_t>(trial));
    const double recovery = (cert.form.matrix() - q).cwiseAbs().maxCoeff();
    worst_recovery = std::max(worst_recovery, recovery);
    if (recovery > 1e-5) {
      out.fail("case " + std::to_string(trial) + " matrix recovery error " +
               format_double(recovery));
    }

    Rng fresh(900 + static_cast<std::uint64_t>(trial));
    for (int k = 0; k < 1000; ++k) {
      Eigen::VectorXd h(dim);
      for (int i = 0; i < dim; ++i) h[i] = fresh.normal();
      const double ns = space.norm_squared(h);
      const double v = cert.form.quad(h);
      const double tol = 1e-9 * std::max(1.0, std::abs(v));
      if (v < cert.mu * ns - tol || v > cert.L * ns + tol) ++sandwich_violations;
    }
  }
  if (sandwich_violations > 0) {
    out.fail(std::to_string(sandwich_violations) + " sandwich violations beyond 1e-9");
  }
  out.note("worst matrix recovery " + format_double(worst_recovery));
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 5: operator symmetrization for T = [[1,1],[-1,1]].
Outcome criterion_operator() {
  Outcome out;
  const MonotoneOperator op = make_operator("linear:[[1,1],[-1,1]]", 2);
  const Ball ball{Eigen::VectorXd::Zero(2), 1.0, NormedSpace::lp(2, 2.0)};
  CertifyConfig config;
  config.samples = 20000;
  config.seed = 505;
  const CertifiedConstants cc = operator_certify(op, ball, config);

  if (std::abs(cc.mu_hat - 1.0) > 1e-6) {
    out.fail("mu_hat " + format_double(cc.mu_hat) + " not 1 +- 1e-6");
  }
  if (std::abs(cc.L_hat - std::sqrt(2.0)) > 1e-6) {
    out.fail("L_hat " + format_double(cc.L_hat) + " not sqrt(2) +- 1e-6");
  }
  const InnerProductCertificate cert =
      extract_inner_product(op, ball.space, ball.center, 64, 505);
  const double gap =
      (cert.form.matrix() - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff();
  if (gap > 1e-5) out.fail("extracted form differs from identity by " + format_double(gap));
  out.note("mu_hat " + format_double(cc.mu_hat) + ", L_hat " + format_double(cc.L_hat) +
           ", |A - I| " + format_double(gap));
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 6: quadratic conjugacy on 50 seeded SPD forms.
Outcome criterion_conjugacy() {
  Outcome out;
  Rng rng(606);
  double worst_residual = 0.0;
  double worst_identity = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform_index(4));
    const QuadraticForm a{random_spd(rng, dim, 100.0)};
    const QuadraticForm b = conjugate_quadratic(a);
    const double residual = inverse_pair_residual(a, b);
    worst_residual = std::max(worst_residual, residual);
    if (residual > 1e-10) {
      out.fail("case " + std::to_string(trial) + " AB-I residual " + format_double(residual));
    }

    // id = (f*)''(f'(xbar)) f''(xbar) via finite differences of both grads.
    const SmoothFunction f = quadratic_fn(a.matrix());
    const SmoothFunction fstar = quadratic_fn(b.matrix());
    Eigen::VectorXd xbar(dim);
    for (int i = 0; i < dim; ++i) xbar[i] = rng.uniform(-1.0, 1.0);
    const Eigen::MatrixXd a_fd = fd_jacobian(f.grad, xbar);
    const Eigen::MatrixXd b_fd = fd_jacobian(fstar.grad, f.grad(xbar));
    const double id_residual =
        (b_fd * a_fd - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    worst_identity = std::max(worst_identity, id_residual);
    if (id_residual > 1e-6) {
      out.fail("case " + std::to_string(trial) + " BA-I fd residual " +
               format_double(id_residual));
    }
  }
  out.note("worst AB-I " + format_double(worst_residual) + ", worst fd BA-I " +
           format_double(worst_identity));
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 7: discrete Legendre-Fenchel transform suite.
Outcome criterion_lf() {
  Outcome out;
  const GridFunction half_sq =
      GridFunction::sample(-4.0, 4.0, 1001, [](double x) { return 0.5 * x * x; });
  const GridFunction gstar = lf_transform(half_sq, -3.0, 3.0, 601);
  double err = 0.0;
  for (int j = 0; j < gstar.size(); ++j) {
    const double s = gstar.node(j);
    err = std::max(err, std::abs(gstar.values[static_cast<std::size_t>(j)] - 0.5 * s * s));
  }
  if (err > 2e-4) out.fail("half-square conjugate error " + format_double(err));
  out.note("half-square error " + format_double(err));

  for (const auto& entry : catalog_grids()) {
    if (!entry.convex) continue;
    const GridFunction back = biconjugate(entry.grid, entry.grid.size() | 1);
    double bi_err = 0.0;
    for (int i = 0; i < entry.grid.size(); ++i) {
      bi_err = std::max(bi_err, std::abs(back.values[static_cast<std::size_t>(i)] -
                                         entry.grid.values[static_cast<std::size_t>(i)]));
    }
    if (bi_err > 2e-4) {
      out.fail("biconjugate of " + entry.name + " error " + format_double(bi_err));
    }
  }

  Rng rng(707);
  long violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> values(64);
    for (auto& v : values) v = rng.uniform(-2.0, 2.0);
    const GridFunction g(-1.0, 1.0, std::move(values));
    GridFunction h = g;
    for (auto& v : h.values) v += rng.uniform(0.0, 1.0);

    const GridFunction gs = lf_transform(g, -2.0, 2.0, 65);
    const GridFunction hs = lf_transform(h, -2.0, 2.0, 65);
    for (int j = 0; j < gs.size(); ++j) {
      if (gs.values[static_cast<std::size_t>(j)] < hs.values[static_cast<std::size_t>(j)]) {
        ++violations;
      }
    }
    const GridFunction back = biconjugate(g, 65);
    for (int i = 0; i < g.size(); ++i) {
      if (back.values[static_cast<std::size_t>(i)] >
          g.values[static_cast<std::size_t>(i)] + 1e-12) {
        ++violations;
      }
    }
  }
  if (violations > 0) {
    out.fail(std::to_string(violations) + " order/domination violations");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 8: descent lemma and 1/L strong convexity.
Outcome criterion_descent() {
  Outcome out;
  Eigen::MatrixXd b(2, 2);
  b << 1.0, 0.0, 0.0, 0.25;
  const SmoothFunction fstar = quadratic_fn(b);
  const auto dual_space = NormedSpace::lp(2, 2.0);
  const Ball dual_ball{Eigen::VectorXd::Zero(2), 2.0, dual_space};

  Rng rng = Rng(808).split("descent-pairs");
  double worst = -std::numeric_limits<double>::infinity();
  long violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const Eigen::VectorXd x = sample_ball(dual_ball, rng);
    const Eigen::VectorXd y = sample_ball(dual_ball, rng);
    const DescentReport report = descent_residual(fstar, dual_space, x, y, 1.0);
    worst = std::max(worst, report.residual);
    if (report.residual > 1e-9) ++violations;
  }
  if (violations > 0) {
    out.fail(std::to_string(violations) + " descent residuals above 1e-9");
  }
  out.note("worst residual " + format_double(worst));

  Eigen::MatrixXd q(2, 2);
  q << 1.0, 0.0, 0.0, 4.0;
  const SmoothFunction f = quadratic_fn(q);
  const Ball ball{Eigen::VectorXd::Zero(2), 1.0, NormedSpace::lp(2, 2.0)};
  const ConvexityCheck valid = strong_convexity_from_conjugate(f, ball, 1.0, 10000, 808);
  if (valid.violations != 0) {
    out.fail("valid mu = 1/L reported " + std::to_string(valid.violations) + " violations");
  }
  const ConvexityCheck invalid = strong_convexity_from_conjugate(f, ball, 0.5, 10000, 808);
  if (invalid.violations < 1) {
    out.fail("invalid L = 0.5 reported no violations");
  }
  if (!(invalid.worst.value < -1e-7)) {
    out.fail("invalid case carries no violating witness");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 9: conditioning growth with dimension via cmd_growth.
Outcome criterion_growth() {
  Outcome out;
  json config;
  config["seed"] = 909;
  config["p"] = 1;
  config["n_list"] = {2, 3, 4, 5, 6, 7, 8};
  config["budgets"] = {{"search", 10000}, {"restarts", 4}, {"probes", 256}};
  const json rows = cmd_growth(config).at("rows");
  for (const auto& row : rows) {
    const int n = row.at("n").get<int>();
    const double identity = row.at("identity_ratio").get<double>();
    if (identity != static_cast<double>(n)) {
      out.fail("identity ratio for n = " + std::to_string(n) + " is " +
               format_double(identity) + ", not exactly n");
    }
    if (n == 2) {
      const double searched = row.at("searched_ratio").get<double>();
      if (std::abs(searched - 2.0) > 1e-2) {
        out.fail("searched ratio at n = 2 is " + format_double(searched));
      }
    }
  }

  json config2;
  config2["seed"] = 909;
  config2["p"] = 2;
  config2["n_list"] = {2, 3};
  config2["budgets"] = {{"search", 2000}, {"restarts", 4}, {"probes", 128}};
  for (const auto& row : cmd_growth(config2).at("rows")) {
    const double searched = row.at("searched_ratio").get<double>();
    if (std::abs(searched - 1.0) > 1e-6) {
      out.fail("Euclidean searched ratio " + format_double(searched) + " not 1 +- 1e-6");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 10: sqrt(min conditioning) dominates family ratios, dim <= 3.
Outcome criterion_cross_module() {
  Outcome out;
  Rng rng(1010);
  long violations = 0;
  for (const auto& entry : catalog_spaces()) {
    const int dim = entry.space.dim();
    if (dim > 3) continue;
    const ConditioningResult cond = min_conditioning(entry.space, 600, 3, 1010);
    const double bound = std::sqrt(cond.ratio) + 1e-6;

    std::vector<VectorFamily> families;
    families.push_back(VectorFamily::basis(dim, dim));
    for (int k = 0; k < 5; ++k) families.push_back(random_family(rng, dim, 2 + k % 3));
    for (const auto& family : families) {
      if (type_ratio(entry.space, family) > bound) ++violations;
      if (cotype_ratio(entry.space, family) > bound) ++violations;
    }
  }
  if (violations > 0) {
    out.fail(std::to_string(violations) + " Rademacher ratios above the quadratic bound");
  }
  return out;
}

struct Criterion {
  int number;
  std::string title;
  double time_limit_s;  // 0 = no limit stated
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "cross-term cancellation (100 seeded cases)", 5.0, criterion_cancellation},
      {2, "type/cotype witness ratios", 5.0, criterion_type_cotype},
      {3, "certification oracle for diag(1,4), 1e5 samples", 30.0, criterion_certify},
      {4, "inner-product extraction on 20 seeded SPD quadratics", 0.0, criterion_extraction},
      {5, "operator symmetrization for [[1,1],[-1,1]]", 0.0, criterion_operator},
      {6, "quadratic conjugacy and id = AB on 50 seeded forms", 0.0, criterion_conjugacy},
      {7, "discrete Legendre-Fenchel transform suite", 10.0, criterion_lf},
      {8, "descent lemma and 1/L strong convexity", 0.0, criterion_descent},
      {9, "Banach-Mazur bound growth for l_p^n", 120.0, criterion_growth},
      {10, "conditioning bound dominates Rademacher ratios", 0.0, criterion_cross_module},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome.fail(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration_cast<std::chrono::duration<double>>(
            std::chrono::steady_clock::now() - start)
            .count();
    if (criterion.time_limit_s > 0.0 && seconds > criterion.time_limit_s) {
      outcome.fail("runtime " + format_double(seconds) + "s exceeds " +
                   format_double(criterion.time_limit_s) + "s");
    }
    if (!outcome.pass) ++failures;
    std::printf("[%s] criterion %2d: %s (%.2fs)%s%s\n", outcome.pass ? "PASS" : "FAIL",
                criterion.number, criterion.title.c_str(), seconds,
                outcome.detail.empty() ? "" : " -- ", outcome.detail.c_str());
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
