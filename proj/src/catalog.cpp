#include "normlab/catalog.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include <json.hpp>

namespace normlab {
namespace {

using nlohmann::json;

Eigen::MatrixXd parse_matrix(const std::string& text, int dim) {
  json parsed;
  try {
    parsed = json::parse(text);
  } catch (const json::exception& e) {
    throw LabError(ErrorCode::config_error,
                   std::string("invalid matrix JSON in catalog spec: ") + e.what());
  }
  require(parsed.is_array() && !parsed.empty(), ErrorCode::config_error,
          "matrix spec must be a non-empty JSON array of rows");
  const auto rows = static_cast<int>(parsed.size());
  require(dim == 0 || rows == dim, ErrorCode::config_error,
          "matrix dimension does not match the requested dimension");
  Eigen::MatrixXd m(rows, rows);
  for (int i = 0; i < rows; ++i) {
    const auto& row = parsed[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<int>(row.size()) == rows, ErrorCode::config_error,
            "matrix spec must be square");
    for (int j = 0; j < rows; ++j) m(i, j) = row[static_cast<std::size_t>(j)].get<double>();
  }
  return m;
}

SmoothFunction quadratic_function(Eigen::MatrixXd q) {
  SmoothFunction f;
  f.dim = static_cast<int>(q.rows());
  f.name = "quadratic";
  auto shared = std::make_shared<Eigen::MatrixXd>(std::move(q));
  f.eval = [shared](const Eigen::VectorXd& x) { return 0.5 * x.dot(*shared * x); };
  f.grad = [shared](const Eigen::VectorXd& x) -> Eigen::VectorXd { return *shared * x; };
  f.hess = [shared](const Eigen::VectorXd&) { return *shared; };
  return f;
}

SmoothFunction pnorm_squared_function(double p, int dim) {
  require(p >= 1.0, ErrorCode::config_error, "pnorm-squared requires p >= 1");
  SmoothFunction f;
  f.dim = dim;
  f.name = "pnorm-squared";
  if (p == 2.0) {
    f.eval = [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); };
    f.grad = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x; };
    f.hess = [dim](const Eigen::VectorXd&) -> Eigen::MatrixXd {
      return Eigen::MatrixXd::Identity(dim, dim);
    };
    return f;
  }
  if (std::isinf(p)) {
    f.eval = [](const Eigen::VectorXd& x) {
      const double n = x.cwiseAbs().maxCoeff();
      return 0.5 * n * n;
    };
    return f;  // nonsmooth; finite differences where they exist
  }
  f.eval = [p](const Eigen::VectorXd& x) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]), p);
    const double n = std::pow(acc, 1.0 / p);
    return 0.5 * n * n;
  };
  if (p > 1.0) {
    // grad_i = sign(x_i) |x_i|^(p-1) ||x||_p^(2-p), valid away from kinks.
    f.grad = [p](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      double acc = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) acc += std::pow(std::abs(x[i]), p);
      Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
      if (acc == 0.0) return g;
      const double norm = std::pow(acc, 1.0 / p);
      const double scale = std::pow(norm, 2.0 - p);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (x[i] != 0.0) {
          g[i] = (x[i] > 0.0 ? 1.0 : -1.0) * std::pow(std::abs(x[i]), p - 1.0) * scale;
        }
      }
      return g;
    };
  }
  return f;
}

SmoothFunction logsumexp_function(int dim) {
  SmoothFunction f;
  f.dim = dim;
  f.name = "logsumexp";
  f.eval = [](const Eigen::VectorXd& x) {
    const double m = x.maxCoeff();
    return m + std::log((x.array() - m).exp().sum());
  };
  f.grad = [](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double m = x.maxCoeff();
    Eigen::ArrayXd e = (x.array() - m).exp();
    return (e / e.sum()).matrix();
  };
  f.hess = [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    const double m = x.maxCoeff();
    Eigen::ArrayXd e = (x.array() - m).exp();
    Eigen::VectorXd s = (e / e.sum()).matrix();
    return Eigen::MatrixXd(s.asDiagonal()) - s * s.transpose();
  };
  return f;
}

SmoothFunction expsum_function(int dim) {
  SmoothFunction f;
  f.dim = dim;
  f.name = "expsum";
  f.eval = [](const Eigen::VectorXd& x) { return x.array().exp().sum(); };
  f.grad = [](const Eigen::VectorXd& x) -> Eigen::VectorXd { return x.array().exp().matrix(); };
  f.hess = [](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    return Eigen::VectorXd(x.array().exp().matrix()).asDiagonal();
  };
  return f;
}

SmoothFunction softplus_function(int dim) {
  SmoothFunction f;
  f.dim = dim;
  f.name = "softplus";
  // log(1 + e^t) evaluated stably for large |t|.
  const auto softplus = [](double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); };
  const auto sigmoid = [](double t) { return t > 0.0 ? 1.0 / (1.0 + std::exp(-t)) : std::exp(t) / (1.0 + std::exp(t)); };
  f.eval = [softplus](const Eigen::VectorXd& x) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) acc += softplus(x[i]);
    return acc;
  };
  f.grad = [sigmoid](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) g[i] = sigmoid(x[i]);
    return g;
  };
  f.hess = [sigmoid](const Eigen::VectorXd& x) -> Eigen::MatrixXd {
    Eigen::VectorXd d(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double s = sigmoid(x[i]);
      d[i] = s * (1.0 - s);
    }
    return d.asDiagonal();
  };
  return f;
}

}  // namespace

SmoothFunction make_function(const std::string& spec, int dim) {
  require(dim >= 1, ErrorCode::config_error, "function dimension must be >= 1");
  if (spec.rfind("quadratic:", 0) == 0) {
    return quadratic_function(parse_matrix(spec.substr(10), dim));
  }
  if (spec.rfind("pnorm-squared:", 0) == 0) {
    const std::string arg = spec.substr(14);
    const double p = (arg == "inf") ? std::numeric_limits<double>::infinity() : std::stod(arg);
    return pnorm_squared_function(p, dim);
  }
  if (spec == "logsumexp") return logsumexp_function(dim);
  if (spec == "expsum") return expsum_function(dim);
  if (spec == "softplus") return softplus_function(dim);
  throw LabError(ErrorCode::config_error, "unknown catalog function: " + spec);
}

MonotoneOperator make_operator(const std::string& spec, int dim) {
  require(dim >= 1, ErrorCode::config_error, "operator dimension must be >= 1");
  if (spec.rfind("linear:", 0) == 0) {
    Eigen::MatrixXd m = parse_matrix(spec.substr(7), dim);
    MonotoneOperator op;
    op.dim = static_cast<int>(m.rows());
    op.name = "linear";
    auto shared = std::make_shared<Eigen::MatrixXd>(std::move(m));
    op.apply = [shared](const Eigen::VectorXd& x) -> Eigen::VectorXd { return *shared * x; };
    op.linear_matrix = *shared;
    return op;
  }
  if (spec.rfind("grad:", 0) == 0) {
    return gradient_operator(make_function(spec.substr(5), dim));
  }
  throw LabError(ErrorCode::config_error, "unknown catalog operator: " + spec);
}

std::vector<NamedSpace> catalog_spaces() {
  std::vector<NamedSpace> spaces;
  const double inf = std::numeric_limits<double>::infinity();
  spaces.push_back({"l1-2", NormedSpace::lp(2, 1.0)});
  spaces.push_back({"l1.5-2", NormedSpace::lp(2, 1.5)});
  spaces.push_back({"l2-2", NormedSpace::lp(2, 2.0)});
  spaces.push_back({"l3-2", NormedSpace::lp(2, 3.0)});
  spaces.push_back({"linf-2", NormedSpace::lp(2, inf)});
  spaces.push_back({"l1-3", NormedSpace::lp(3, 1.0)});
  spaces.push_back({"l2-3", NormedSpace::lp(3, 2.0)});
  spaces.push_back({"linf-3", NormedSpace::lp(3, inf)});
  Eigen::VectorXd w(2);
  w << 1.0, 2.0;
  spaces.push_back({"wl2-2", NormedSpace::weighted_lp(2, 2.0, w)});
  Eigen::MatrixXd q(2, 2);
  q << 2.0, 0.5, 0.5, 1.0;
  spaces.push_back({"quad-2", NormedSpace::quadratic(QuadraticForm(q))});
  return spaces;
}

std::vector<NamedGrid> catalog_grids() {
  std::vector<NamedGrid> grids;
  grids.push_back({"half-square",
                   GridFunction::sample(-4.0, 4.0, 1001, [](double x) { return 0.5 * x * x; }),
                   true});
  grids.push_back(
      {"abs", GridFunction::sample(-2.0, 2.0, 801, [](double x) { return std::abs(x); }), true});
  grids.push_back(
      {"exp", GridFunction::sample(-2.0, 2.0, 801, [](double x) { return std::exp(x); }), true});
  grids.push_back({"softplus", GridFunction::sample(-5.0, 5.0, 1001,
                                                    [](double x) {
                                                      return x > 0.0
                                                                 ? x + std::log1p(std::exp(-x))
                                                                 : std::log1p(std::exp(x));
                                                    }),
                   true});
  grids.push_back(
      {"affine", GridFunction::sample(-2.0, 2.0, 5, [](double x) { return 2.0 * x + 3.0; }),
       true});
  grids.push_back({"double-well", GridFunction::sample(-2.0, 2.0, 801,
                                                       [](double x) {
                                                         return x * x * x * x - x * x;
                                                       }),
                   false});
  return grids;
}

}  // namespace normlab
