#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "normlab/catalog.hpp"
#include "normlab/certify.hpp"
#include "oracles.hpp"

using namespace normlab;

namespace {

// Matrix -> catalog spec text (row-major JSON).
std::string to_string_matrix(const Eigen::MatrixXd& m) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out += i == 0 ? "[" : ",[";
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ",";
      out += std::to_string(m(i, j));
    }
    out += "]";
  }
  out += "]";
  return out;
}

SmoothFunction quadratic_fn(const Eigen::MatrixXd& q) {
  return make_function("quadratic:" + to_string_matrix(q), static_cast<int>(q.rows()));
}

Eigen::MatrixXd diag14() {
  Eigen::MatrixXd q(2, 2);
  q << 1.0, 0.0, 0.0, 4.0;
  return q;
}

Ball euclidean_ball(int dim, double radius) {
  return Ball{Eigen::VectorXd::Zero(dim), radius, NormedSpace::lp(dim, 2.0)};
}

SmoothFunction affine_fn() {
  SmoothFunction f;
  f.dim = 2;
  f.name = "affine";
  f.eval = [](const Eigen::VectorXd& x) { return 0.7 * x[0] - 1.3 * x[1] + 0.5; };
  f.grad = [](const Eigen::VectorXd&) { return (Eigen::VectorXd(2) << 0.7, -1.3).finished(); };
  return f;
}

}  // namespace

TEST_CASE("secant modulus of quadratics and affine functions") {
  const Ball ball = euclidean_ball(2, 1.0);

  // f = (1/2)||x||^2: the secant quotient is identically 1.
  const SmoothFunction half_sq = make_function("pnorm-squared:2", 2);
  CHECK(secant_modulus(half_sq, ball, 2000, 3) == doctest::Approx(1.0).epsilon(1e-9));

  // Oracle: the quotient of a quadratic is the Rayleigh quotient of the
  // difference direction, so the infimum is the smallest eigenvalue.
  const auto [eig_min, eig_max] = oracles::eigen_range(diag14());
  const SmoothFunction f14 = quadratic_fn(diag14());
  CHECK(secant_modulus(f14, ball, 20000, 3) == doctest::Approx(eig_min).epsilon(1e-6));

  CHECK(std::abs(secant_modulus(affine_fn(), ball, 10000, 3)) <= 1e-9);
}

TEST_CASE("gradient monotonicity modulus") {
  const Ball ball = euclidean_ball(2, 1.0);
  const auto [eig_min, eig_max] = oracles::eigen_range(diag14());

  CHECK(gradient_monotonicity_modulus(quadratic_fn(diag14()), ball, 20000, 3) ==
        doctest::Approx(eig_min).epsilon(1e-6));
  CHECK(std::abs(gradient_monotonicity_modulus(affine_fn(), ball, 10000, 3)) <= 1e-9);
  CHECK(gradient_monotonicity_modulus(make_function("pnorm-squared:2", 2), ball, 2000, 3) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lipschitz constant") {
  const Ball ball = euclidean_ball(2, 1.0);
  const auto [eig_min, eig_max] = oracles::eigen_range(diag14());

  CHECK(lipschitz_constant(quadratic_fn(diag14()), ball, 20000, 3) ==
        doctest::Approx(eig_max).epsilon(1e-4 / 4.0));
  CHECK(std::abs(lipschitz_constant(affine_fn(), ball, 5000, 3)) <= 1e-9);
  CHECK(lipschitz_constant(make_function("pnorm-squared:2", 2), ball, 2000, 3) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("certify recovers the eigen range of a quadratic") {
  const Ball ball = euclidean_ball(2, 1.0);
  CertifyConfig config;
  config.samples = 20000;
  config.seed = 3;
  const CertifiedConstants cc = certify(quadratic_fn(diag14()), ball, config);

  const auto [eig_min, eig_max] = oracles::eigen_range(diag14());
  CHECK(cc.mu_hat == doctest::Approx(eig_min).epsilon(1e-4));
  CHECK(cc.L_hat == doctest::Approx(eig_max).epsilon(1e-4));
  CHECK(cc.mu_hat <= cc.L_hat + 1e-9);
  CHECK(cc.secant_mu.has_value());
  CHECK(cc.monotonicity_mu.has_value());

  // Witnesses achieve the reported extremes.
  CHECK(cc.mu_witness.value == cc.mu_hat);
  CHECK(cc.L_witness.value == cc.L_hat);
  CHECK(ball.space.norm(cc.L_witness.x - ball.center) <= ball.radius);
}

TEST_CASE("certify with a single modulus method") {
  const Ball ball = euclidean_ball(2, 1.0);
  CertifyConfig config;
  config.samples = 3000;
  config.seed = 3;
  config.use_monotonicity = false;
  const CertifiedConstants secant_only = certify(quadratic_fn(diag14()), ball, config);
  CHECK(secant_only.method == Method::secant);
  CHECK(secant_only.secant_mu.has_value());
  CHECK(!secant_only.monotonicity_mu.has_value());

  config.use_monotonicity = true;
  config.use_secant = false;
  const CertifiedConstants mono_only = certify(quadratic_fn(diag14()), ball, config);
  CHECK(mono_only.method == Method::gradient_monotonicity);
  CHECK(!mono_only.secant_mu.has_value());

  config.use_monotonicity = false;
  CHECK_THROWS_AS(certify(quadratic_fn(diag14()), ball, config), LabError);
}

TEST_CASE("certify on an off-center l_p ball keeps mu below L") {
  Eigen::VectorXd center(2);
  center << 0.4, -0.3;
  const Ball ball{center, 0.8, NormedSpace::lp(2, 1.5)};
  CertifyConfig config;
  config.samples = 4000;
  config.seed = 11;
  const CertifiedConstants cc = certify(make_function("pnorm-squared:2", 2), ball, config);
  CHECK(cc.mu_hat > 0.0);
  CHECK(cc.mu_hat <= cc.L_hat + 1e-9);
}

TEST_CASE("certify exponential sums against the Hessian range oracle") {
  const Ball ball = euclidean_ball(2, 1.0);
  CertifyConfig config;
  config.samples = 20000;
  config.seed = 5;
  const SmoothFunction f = make_function("expsum", 2);
  const CertifiedConstants cc = certify(f, ball, config);

  // Hessian is diag(exp(x1), exp(x2)); over the closed sampled ball the
  // eigenvalues range over [exp(-r), exp(r)] with r = 0.999.
  CHECK(cc.mu_hat >= std::exp(-1.0) - 1e-3);
  CHECK(cc.L_hat <= std::exp(1.0) + 1e-3);

  // Dense-grid oracle: mu_hat never exceeds the grid minimum by more than
  // 1e-6 (both approach the same infimum from above).
  double grid_min = std::numeric_limits<double>::infinity();
  const double r = kOpenBallShrink * ball.radius;
  for (int a = -50; a <= 50; ++a) {
    for (int b = -50; b <= 50; ++b) {
      Eigen::VectorXd x(2);
      x << r * a / 50.0, r * b / 50.0;
      if (x.norm() > r) continue;
      const auto [lo, hi] = oracles::eigen_range(f.hess(x));
      grid_min = std::min(grid_min, lo);
    }
  }
  CHECK(cc.mu_hat <= grid_min + 1e-6);
}

TEST_CASE("secant and monotonicity agree on quadratics") {
  const Ball ball = euclidean_ball(2, 1.0);
  CertifyConfig config;
  config.samples = 10000;
  config.seed = 21;
  const CertifiedConstants cc = certify(quadratic_fn(diag14()), ball, config);
  CHECK(std::abs(*cc.secant_mu - *cc.monotonicity_mu) <= 0.05 * cc.L_hat);
}

TEST_CASE("certify scaling covariance") {
  const Ball ball = euclidean_ball(2, 0.9);
  const SmoothFunction f = quadratic_fn(diag14());
  const double c = 2.7;
  SmoothFunction scaled;
  scaled.dim = f.dim;
  scaled.eval = [f, c](const Eigen::VectorXd& x) { return c * f.eval(x); };
  scaled.grad = [f, c](const Eigen::VectorXd& x) -> Eigen::VectorXd { return c * f.grad(x); };

  CertifyConfig config;
  config.samples = 3000;
  config.seed = 8;
  const CertifiedConstants base = certify(f, ball, config);
  const CertifiedConstants scal = certify(scaled, ball, config);
  CHECK(scal.mu_hat == doctest::Approx(c * base.mu_hat).epsilon(1e-9));
  CHECK(scal.L_hat == doctest::Approx(c * base.L_hat).epsilon(1e-9));
}

TEST_CASE("certify translation invariance") {
  const SmoothFunction f = quadratic_fn(diag14());
  Eigen::VectorXd shift(2);
  shift << 0.6, -0.2;
  SmoothFunction translated;
  translated.dim = f.dim;
  translated.eval = [f, shift](const Eigen::VectorXd& x) { return f.eval(x - shift); };
  translated.grad = [f, shift](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return f.grad(x - shift);
  };

  CertifyConfig config;
  config.samples = 3000;
  config.seed = 15;
  const Ball ball = euclidean_ball(2, 0.7);
  const Ball moved{ball.center + shift, ball.radius, ball.space};
  const CertifiedConstants base = certify(f, ball, config);
  const CertifiedConstants trans = certify(translated, moved, config);
  CHECK(trans.mu_hat == doctest::Approx(base.mu_hat).epsilon(1e-12));
  CHECK(trans.L_hat == doctest::Approx(base.L_hat).epsilon(1e-12));
}

TEST_CASE("operator certification") {
  const Ball ball = euclidean_ball(2, 1.0);
  CertifyConfig config;
  config.samples = 20000;
  config.seed = 3;

  const CertifiedConstants sym =
      operator_certify(make_operator("linear:[[1,0],[0,4]]", 2), ball, config);
  CHECK(sym.mu_hat == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(sym.L_hat == doctest::Approx(4.0).epsilon(1e-4));
  CHECK(sym.method == Method::operator_field);

  // Rotation-plus-identity: the skew part cancels in the pairing, so
  // mu = 1 exactly, while the singular values give L = sqrt(2).
  const CertifiedConstants skew =
      operator_certify(make_operator("linear:[[1,1],[-1,1]]", 2), ball, config);
  CHECK(skew.mu_hat == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(skew.L_hat == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

  const CertifiedConstants id =
      operator_certify(make_operator("linear:[[1,0],[0,1]]", 2), ball, config);
  CHECK(id.mu_hat == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(id.L_hat == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("operator certification of a gradient field matches certify") {
  const Ball ball = euclidean_ball(2, 1.0);
  const SmoothFunction f = quadratic_fn(diag14());
  CertifyConfig config;
  config.samples = 5000;
  config.seed = 123;

  const CertifiedConstants from_f = certify(f, ball, config);
  const CertifiedConstants from_op = operator_certify(gradient_operator(f), ball, config);
  CHECK(from_op.mu_hat == doctest::Approx(*from_f.monotonicity_mu).epsilon(1e-9));
  CHECK(from_op.L_hat == doctest::Approx(from_f.L_hat).epsilon(1e-9));
}

TEST_CASE("hessian bounds over different unit spheres") {
  const auto euclid = NormedSpace::lp(2, 2.0);
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2);

  const auto [mu14, L14] = hessian_bounds(quadratic_fn(diag14()), euclid, origin, 64, 9);
  CHECK(mu14 == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(L14 == doctest::Approx(4.0).epsilon(1e-8));

  // (1/2)||x||_2^2 over the l_1 sphere: dense-sweep oracle for the extremes
  // of ||h||_2^2 / ||h||_1^2 (min 1/2 at the diagonal, max 1 at vertices).
  const auto l1 = NormedSpace::lp(2, 1.0);
  const auto [sweep_min, sweep_max] =
      oracles::lp_ratio_range_2d(Eigen::MatrixXd::Identity(2, 2), 1.0);
  const auto [mu_l1, L_l1] =
      hessian_bounds(make_function("pnorm-squared:2", 2), l1, origin, 64, 9);
  CHECK(mu_l1 == doctest::Approx(sweep_min).epsilon(1e-9));
  CHECK(L_l1 == doctest::Approx(sweep_max).epsilon(1e-9));
  CHECK(mu_l1 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(L_l1 == doctest::Approx(1.0).epsilon(1e-9));

  // Quadratic form over its own norm's sphere: the ratio is identically 1.
  Eigen::MatrixXd q(2, 2);
  q << 2.0, 0.5, 0.5, 1.0;
  const auto quad_space = NormedSpace::quadratic(QuadraticForm(q));
  const auto [mu_q, L_q] = hessian_bounds(quadratic_fn(q), quad_space, origin, 64, 9);
  CHECK(mu_q == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(L_q == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("sampled mu never exceeds hessian-probed mu by more than 1e-6") {
  const Ball ball = euclidean_ball(2, 1.0);
  CertifyConfig config;
  config.samples = 20000;
  config.seed = 3;
  for (const char* name : {"expsum", "logsumexp"}) {
    const SmoothFunction f = make_function(name, 2);
    const CertifiedConstants cc = certify(f, ball, config);
    // Hessian minimum over sampled interior points of the ball.
    double hess_min = std::numeric_limits<double>::infinity();
    Rng rng(4242);
    Ball probe = ball;
    for (int k = 0; k < 200; ++k) {
      const Eigen::VectorXd x = sample_ball(probe, rng);
      const auto [lo, hi] = oracles::eigen_range(f.hess(x));
      hess_min = std::min(hess_min, lo);
    }
    CHECK(cc.mu_hat <= hess_min + 1e-6);
  }
}

TEST_CASE("catalog derivatives match finite differences") {
  Rng rng(55);
  for (const char* name : {"expsum", "logsumexp", "softplus", "pnorm-squared:3"}) {
    const SmoothFunction f = make_function(name, 3);
    for (int k = 0; k < 20; ++k) {
      Eigen::VectorXd x(3);
      for (int i = 0; i < 3; ++i) x[i] = rng.uniform(-1.5, 1.5);
      const Eigen::VectorXd fd = fd_gradient(f.eval, x);
      const Eigen::VectorXd an = f.grad(x);
      CHECK((fd - an).cwiseAbs().maxCoeff() <= 1e-5 * (1.0 + an.cwiseAbs().maxCoeff()));
      if (f.hess) {
        const Eigen::MatrixXd hd = fd_jacobian(f.grad, x);
        CHECK((hd - f.hess(x)).cwiseAbs().maxCoeff() <= 1e-4);
      }
    }
  }
}

TEST_CASE("degenerate pair sampling errors out") {
  const Ball tiny{Eigen::VectorXd::Zero(2), 1e-13, NormedSpace::lp(2, 2.0)};
  try {
    gradient_monotonicity_modulus(make_function("pnorm-squared:2", 2), tiny, 10, 1);
    FAIL("expected degenerate_pair");
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::degenerate_pair);
  }
}

TEST_CASE("non-finite Hessian entries raise differentiability failure") {
  SmoothFunction f;
  f.dim = 2;
  f.eval = [](const Eigen::VectorXd& x) { return std::exp(2000.0 * x[0]) + x[1] * x[1]; };
  const auto space = NormedSpace::lp(2, 2.0);
  Eigen::VectorXd point(2);
  point << 1.0, 0.0;
  try {
    hessian_bounds(f, space, point, 16, 1);
    FAIL("expected differentiability_failure");
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::differentiability_failure);
  }
}
