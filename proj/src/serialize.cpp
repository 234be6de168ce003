#include "normlab/serialize.hpp"

#include <cmath>
#include <limits>

namespace normlab {

json to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXd vector_from_json(const json& j) {
  require(j.is_array(), ErrorCode::config_error, "expected a JSON array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  require(j.is_array() && !j.empty(), ErrorCode::config_error,
          "expected a non-empty JSON array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    require(row.is_array() && static_cast<Eigen::Index>(row.size()) == cols,
            ErrorCode::config_error, "matrix rows must have equal length");
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

namespace {

json p_to_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

double p_from_json(const json& j) {
  if (j.is_string()) {
    require(j.get<std::string>() == "inf", ErrorCode::config_error,
            "p must be a number or \"inf\"");
    return std::numeric_limits<double>::infinity();
  }
  return j.get<double>();
}

}  // namespace

json to_json(const NormedSpace& space) {
  json j;
  switch (space.kind()) {
    case NormKind::p_norm:
      j["dim"] = space.dim();
      j["kind"] = "p";
      j["p"] = p_to_json(space.p());
      break;
    case NormKind::weighted_p_norm:
      j["dim"] = space.dim();
      j["kind"] = "weighted-p";
      j["p"] = p_to_json(space.p());
      j["weights"] = to_json(space.weights());
      break;
    case NormKind::quadratic_norm:
      j["dim"] = space.dim();
      j["kind"] = "quadratic";
      j["matrix"] = to_json(space.form().matrix());
      break;
  }
  return j;
}

NormedSpace space_from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), ErrorCode::config_error,
          "space descriptor requires a \"kind\" field");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "p") {
    require(j.contains("dim") && j.contains("p"), ErrorCode::config_error,
            "p-norm descriptor requires \"dim\" and \"p\"");
    return NormedSpace::lp(j.at("dim").get<int>(), p_from_json(j.at("p")));
  }
  if (kind == "weighted-p") {
    require(j.contains("dim") && j.contains("p") && j.contains("weights"),
            ErrorCode::config_error,
            "weighted-p descriptor requires \"dim\", \"p\", and \"weights\"");
    return NormedSpace::weighted_lp(j.at("dim").get<int>(), p_from_json(j.at("p")),
                                    vector_from_json(j.at("weights")));
  }
  if (kind == "quadratic") {
    require(j.contains("matrix"), ErrorCode::config_error,
            "quadratic descriptor requires \"matrix\"");
    return NormedSpace::quadratic(QuadraticForm(matrix_from_json(j.at("matrix"))));
  }
  throw LabError(ErrorCode::config_error, "unknown space kind: " + kind);
}

json to_json(const VectorFamily& family) {
  json arr = json::array();
  for (const auto& x : family.vectors) arr.push_back(to_json(x));
  return arr;
}

VectorFamily family_from_json(const json& j) {
  require(j.is_array() && !j.empty(), ErrorCode::config_error,
          "family must be a non-empty array of coordinate arrays");
  VectorFamily family;
  for (const auto& row : j) family.vectors.push_back(vector_from_json(row));
  return family;
}

json to_json(const GridFunction& grid) {
  json j;
  j["lo"] = grid.lo;
  j["hi"] = grid.hi;
  json values = json::array();
  for (double v : grid.values) {
    if (std::isinf(v)) {
      values.push_back("inf");
    } else {
      values.push_back(v);
    }
  }
  j["values"] = std::move(values);
  return j;
}

GridFunction grid_from_json(const json& j) {
  require(j.is_object() && j.contains("lo") && j.contains("hi") && j.contains("values"),
          ErrorCode::config_error, "grid requires \"lo\", \"hi\", and \"values\"");
  std::vector<double> values;
  for (const auto& v : j.at("values")) {
    if (v.is_string()) {
      require(v.get<std::string>() == "inf", ErrorCode::config_error,
              "grid values must be numbers or \"inf\"");
      values.push_back(std::numeric_limits<double>::infinity());
    } else {
      values.push_back(v.get<double>());
    }
  }
  return GridFunction(j.at("lo").get<double>(), j.at("hi").get<double>(), std::move(values));
}

json to_json(const Witness& witness) {
  json j;
  j["x"] = to_json(witness.x);
  j["y"] = to_json(witness.y);
  if (!std::isnan(witness.lambda)) j["lambda"] = witness.lambda;
  j["value"] = witness.value;
  return j;
}

json to_json(const CertifiedConstants& constants) {
  json j;
  j["mu_hat"] = constants.mu_hat;
  j["L_hat"] = constants.L_hat;
  j["ratio"] = constants.L_hat / constants.mu_hat;
  j["samples"] = constants.samples;
  j["seed"] = constants.seed;
  j["method"] = to_string(constants.method);
  if (constants.secant_mu) j["secant_mu"] = *constants.secant_mu;
  if (constants.monotonicity_mu) j["monotonicity_mu"] = *constants.monotonicity_mu;
  j["mu_witness"] = to_json(constants.mu_witness);
  j["L_witness"] = to_json(constants.L_witness);
  return j;
}

json to_json(const RademacherReport& report) {
  json j;
  j["mode"] = report.mode == RademacherMode::type2 ? "type2" : "cotype2";
  j["ratio"] = report.ratio;
  j["evaluations"] = report.evaluations;
  j["exact"] = report.exact;
  j["seed"] = report.seed;
  j["best_family"] = to_json(report.best_family);
  return j;
}

json to_json(const InnerProductCertificate& cert) {
  json j;
  j["matrix"] = to_json(cert.form.matrix());
  j["mu"] = cert.mu;
  j["L"] = cert.L;
  j["sqrt_mu"] = std::sqrt(cert.mu);
  j["sqrt_L"] = std::sqrt(cert.L);
  j["cholesky_upper"] = to_json(cert.cholesky_upper);
  j["base_point"] = to_json(cert.base_point.coords);
  j["source"] = cert.source == CertificateSource::function ? "function" : "operator";
  return j;
}

json to_json(const ConditioningResult& result) {
  json j;
  j["matrix"] = to_json(result.form.matrix());
  j["ratio"] = result.ratio;
  j["mu"] = result.mu;
  j["L"] = result.L;
  j["sqrt_ratio"] = std::sqrt(result.ratio);
  j["evaluations"] = result.evaluations;
  return j;
}

json to_json(const ConvexityCheck& check) {
  json j;
  j["violations"] = check.violations;
  j["worst_margin"] = check.worst_margin;
  j["samples"] = check.samples;
  j["worst_witness"] = to_json(check.worst);
  return j;
}

}  // namespace normlab
