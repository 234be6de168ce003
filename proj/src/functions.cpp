#include "normlab/functions.hpp"

#include <cmath>
#include <limits>

namespace normlab {

double fd_step(const Eigen::VectorXd& x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return std::cbrt(eps) * (1.0 + scale);
}

Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x) {
  const double h = fd_step(x);
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& field,
                            const Eigen::VectorXd& x) {
  const double h = fd_step(x);
  Eigen::MatrixXd jac(x.size(), x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const Eigen::VectorXd fp = field(probe);
    probe[j] = x[j] - h;
    const Eigen::VectorXd fm = field(probe);
    probe[j] = x[j];
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

Eigen::MatrixXd fd_hessian_of_eval(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double scale = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  const double h = std::pow(eps, 0.25) * (1.0 + scale);
  const Eigen::Index n = x.size();
  Eigen::MatrixXd hess(n, n);
  const double f0 = f(x);
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    probe[i] = x[i] + h;
    const double fp = f(probe);
    probe[i] = x[i] - h;
    const double fm = f(probe);
    probe[i] = x[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      probe[i] = x[i] + h;
      probe[j] = x[j] + h;
      const double fpp = f(probe);
      probe[j] = x[j] - h;
      const double fpm = f(probe);
      probe[i] = x[i] - h;
      const double fmm = f(probe);
      probe[j] = x[j] + h;
      const double fmp = f(probe);
      probe[i] = x[i];
      probe[j] = x[j];
      const double v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

MonotoneOperator gradient_operator(const SmoothFunction& f) {
  MonotoneOperator op;
  op.dim = f.dim;
  op.name = f.name.empty() ? "gradient-field" : "grad:" + f.name;
  op.apply = [f](const Eigen::VectorXd& x) { return f.gradient(x); };
  return op;
}

}  // namespace normlab
