#include "normlab/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "normlab/catalog.hpp"
#include "normlab/format.hpp"
#include "normlab/version.hpp"

namespace normlab {
namespace {

std::uint64_t require_seed(const json& config) {
  require(config.is_object() && config.contains("seed"), ErrorCode::config_error,
          "config requires a \"seed\" field (no unseeded runs)");
  return config.at("seed").get<std::uint64_t>();
}

NormedSpace require_space(const json& config) {
  require(config.contains("space"), ErrorCode::config_error,
          "config requires a \"space\" descriptor");
  return space_from_json(config.at("space"));
}

json budgets_of(const json& config) { return config.value("budgets", json::object()); }

Ball ball_from_config(const json& config, const NormedSpace& space) {
  require(config.contains("ball"), ErrorCode::config_error,
          "config requires a \"ball\" {\"center\", \"radius\"}");
  const json& b = config.at("ball");
  Eigen::VectorXd center = b.contains("center") ? vector_from_json(b.at("center"))
                                                : Eigen::VectorXd::Zero(space.dim());
  require(b.contains("radius"), ErrorCode::config_error, "ball requires a \"radius\"");
  Ball ball{std::move(center), b.at("radius").get<double>(), space};
  validate_ball(ball);
  return ball;
}

}  // namespace

json cmd_type_cotype(const json& config) {
  const std::uint64_t seed = require_seed(config);
  const NormedSpace space = require_space(config);
  const json budgets = budgets_of(config);
  const int family_size = budgets.value("family_size", 2);
  const long budget = budgets.value("budget", 10000L);

  const RademacherReport type_report =
      estimate_constant(space, RademacherMode::type2, family_size, budget, seed);
  const RademacherReport cotype_report =
      estimate_constant(space, RademacherMode::cotype2, family_size, budget, seed);

  json results;
  results["space"] = to_json(space);
  results["type2"] = to_json(type_report);
  results["cotype2"] = to_json(cotype_report);
  results["product_lower_bound"] = type_report.ratio * cotype_report.ratio;
  return results;
}

json cmd_certify(const json& config) {
  const std::uint64_t seed = require_seed(config);
  const NormedSpace space = require_space(config);
  const Ball ball = ball_from_config(config, space);
  const json budgets = budgets_of(config);

  CertifyConfig cc;
  cc.samples = budgets.value("samples", 10000L);
  cc.seed = seed;
  if (config.contains("methods")) {
    cc.use_secant = false;
    cc.use_monotonicity = false;
    for (const auto& m : config.at("methods")) {
      const std::string name = m.get<std::string>();
      if (name == "secant") {
        cc.use_secant = true;
      } else if (name == "gradient-monotonicity") {
        cc.use_monotonicity = true;
      } else {
        throw LabError(ErrorCode::config_error, "unknown certify method: " + name);
      }
    }
  }

  CertifiedConstants constants;
  json source;
  if (config.contains("operator")) {
    const MonotoneOperator op = make_operator(config.at("operator").get<std::string>(),
                                              space.dim());
    constants = operator_certify(op, ball, cc);
    source["operator"] = op.name;
  } else {
    require(config.contains("function"), ErrorCode::config_error,
            "certify config requires \"function\" or \"operator\"");
    const SmoothFunction f = make_function(config.at("function").get<std::string>(),
                                           space.dim());
    constants = certify(f, ball, cc);
    source["function"] = f.name;
  }

  json results;
  results["space"] = to_json(space);
  results["source"] = std::move(source);
  results["constants"] = to_json(constants);
  results["ratio"] = constants.L_hat / constants.mu_hat;
  results["sqrt_ratio"] = std::sqrt(constants.L_hat / constants.mu_hat);
  return results;
}

json cmd_extract_ip(const json& config) {
  const std::uint64_t seed = require_seed(config);
  const NormedSpace space = require_space(config);
  const json budgets = budgets_of(config);
  const int probes = budgets.value("probes", 128);
  const int check_probes = budgets.value("check_probes", 1000);

  Eigen::VectorXd point;
  if (config.contains("point")) {
    point = vector_from_json(config.at("point"));
  } else if (config.contains("ball") && config.at("ball").contains("center")) {
    point = vector_from_json(config.at("ball").at("center"));
  } else {
    point = Eigen::VectorXd::Zero(space.dim());
  }

  InnerProductCertificate cert = [&] {
    if (config.contains("operator")) {
      return extract_inner_product(
          make_operator(config.at("operator").get<std::string>(), space.dim()), space, point,
          probes, seed);
    }
    require(config.contains("function"), ErrorCode::config_error,
            "extract-ip config requires \"function\" or \"operator\"");
    return extract_inner_product(
        make_function(config.at("function").get<std::string>(), space.dim()), space, point,
        probes, seed);
  }();

  const auto [sqrt_mu, sqrt_L] = equivalence_constants(cert, space, check_probes, seed);

  json results;
  results["space"] = to_json(space);
  results["certificate"] = to_json(cert);
  results["sqrt_mu"] = sqrt_mu;
  results["sqrt_L"] = sqrt_L;
  return results;
}

namespace {

json conjugate_quadratic_section(const json& section) {
  const QuadraticForm a(matrix_from_json(section.at("matrix")));
  const QuadraticForm b = conjugate_quadratic(a);
  json out;
  out["conjugate_matrix"] = to_json(b.matrix());
  out["inverse_residual"] = inverse_pair_residual(a, b);

  // id = (f*)''(f'(xbar)) f''(xbar): finite differences of the conjugate
  // pair's gradients around a generic point.
  const SmoothFunction f = make_function("quadratic:" + to_json(a.matrix()).dump(), a.dim());
  const SmoothFunction fstar =
      make_function("quadratic:" + to_json(b.matrix()).dump(), b.dim());
  Eigen::VectorXd xbar = Eigen::VectorXd::Ones(a.dim());
  const Eigen::MatrixXd a_fd = fd_jacobian([&](const Eigen::VectorXd& v) { return f.grad(v); }, xbar);
  const Eigen::MatrixXd b_fd = fd_jacobian([&](const Eigen::VectorXd& v) { return fstar.grad(v); },
                                           f.grad(xbar));
  const Eigen::MatrixXd prod = b_fd * a_fd;
  out["fd_identity_residual"] =
      (prod - Eigen::MatrixXd::Identity(a.dim(), a.dim())).cwiseAbs().maxCoeff();
  return out;
}

GridFunction grid_from_section(const json& section) {
  if (section.contains("name")) {
    const std::string name = section.at("name").get<std::string>();
    for (const auto& entry : catalog_grids()) {
      if (entry.name == name) return entry.grid;
    }
    throw LabError(ErrorCode::config_error, "unknown catalog grid: " + name);
  }
  return grid_from_json(section);
}

json conjugate_grid_section(const json& section) {
  const GridFunction g = grid_from_section(section);
  double dual_lo = 0.0;
  double dual_hi = 0.0;
  int m = g.size();
  if (section.contains("dual")) {
    const json& dual = section.at("dual");
    dual_lo = dual.at("lo").get<double>();
    dual_hi = dual.at("hi").get<double>();
    m = dual.value("m", g.size());
  } else {
    const LfResult probe = lf_transform_full(g, -1.0, 1.0, 2);
    dual_lo = probe.slope_lo;
    dual_hi = probe.slope_hi;
  }
  require(dual_lo < dual_hi, ErrorCode::config_error, "degenerate dual range for grid");

  const LfResult full = lf_transform_full(g, dual_lo, dual_hi, m);
  json out;
  out["conjugate"] = to_json(full.grid);
  out["slope_lo"] = full.slope_lo;
  out["slope_hi"] = full.slope_hi;
  long extrapolated = 0;
  for (auto flag : full.extrapolated) extrapolated += flag;
  out["extrapolated_nodes"] = extrapolated;

  if (section.contains("reference") && section.at("reference").get<std::string>() == "half-square") {
    double max_err = 0.0;
    for (int j = 0; j < full.grid.size(); ++j) {
      const double s = full.grid.node(j);
      max_err = std::max(max_err,
                         std::abs(full.grid.values[static_cast<std::size_t>(j)] - 0.5 * s * s));
    }
    out["max_error_vs_reference"] = max_err;
  }

  if (g.convex_on_grid()) {
    const GridFunction back = biconjugate(g, m);
    double max_err = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      max_err = std::max(max_err, std::abs(back.values[static_cast<std::size_t>(i)] -
                                           g.values[static_cast<std::size_t>(i)]));
    }
    out["biconjugate_max_error"] = max_err;
  }
  return out;
}

json conjugate_descent_section(const json& section, std::uint64_t seed) {
  const NormedSpace dual_space = space_from_json(section.at("space"));
  const SmoothFunction fstar =
      make_function(section.at("fstar").get<std::string>(), dual_space.dim());
  const double L = section.at("L").get<double>();
  const long pairs = section.value("pairs", 1000L);

  Ball ball{section.contains("center") ? vector_from_json(section.at("center"))
                                       : Eigen::VectorXd::Zero(dual_space.dim()),
            section.at("radius").get<double>(), dual_space};
  validate_ball(ball);

  Rng rng = Rng(seed).split("descent-pairs");
  long violations = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (long k = 0; k < pairs; ++k) {
    const Eigen::VectorXd x = sample_ball(ball, rng);
    const Eigen::VectorXd y = sample_ball(ball, rng);
    const DescentReport report = descent_residual(fstar, dual_space, x, y, L);
    worst = std::max(worst, report.residual);
    if (report.residual > 1e-9) ++violations;
  }
  json out;
  out["pairs"] = pairs;
  out["violations"] = violations;
  out["worst_residual"] = worst;
  out["L"] = L;
  return out;
}

json conjugate_scv_section(const json& section, std::uint64_t seed) {
  const NormedSpace space = space_from_json(section.at("space"));
  const SmoothFunction f = make_function(section.at("function").get<std::string>(), space.dim());
  const double L_conj = section.at("L_conjugate").get<double>();
  const long samples = section.value("samples", 1000L);

  double radius = 0.0;
  json out;
  if (section.contains("auto_radius")) {
    // Paper-style recipe: min(delta, epsilon L / 4), delta by bisection on
    // ||f'(x)|| <= epsilon/2.
    const double epsilon = section.at("auto_radius").at("epsilon").get<double>();
    radius = descent_ball_radius(f, space, Eigen::VectorXd::Zero(space.dim()), epsilon, L_conj,
                                 64, seed);
    require(radius > 0.0, ErrorCode::invalid_argument,
            "auto radius collapsed to zero: gradient at center exceeds epsilon/2");
    out["auto_radius"] = radius;
  } else {
    radius = section.at("radius").get<double>();
  }

  Ball ball{section.contains("center") ? vector_from_json(section.at("center"))
                                       : Eigen::VectorXd::Zero(space.dim()),
            radius, space};
  const ConvexityCheck check = strong_convexity_from_conjugate(f, ball, L_conj, samples, seed);
  out["mu_used"] = 1.0 / L_conj;
  out["check"] = to_json(check);
  return out;
}

}  // namespace

json cmd_conjugate(const json& config) {
  const std::uint64_t seed = require_seed(config);
  json results;
  bool any = false;
  if (config.contains("quadratic")) {
    results["quadratic"] = conjugate_quadratic_section(config.at("quadratic"));
    any = true;
  }
  if (config.contains("grid")) {
    results["grid"] = conjugate_grid_section(config.at("grid"));
    any = true;
  }
  if (config.contains("descent")) {
    results["descent"] = conjugate_descent_section(config.at("descent"), seed);
    any = true;
  }
  if (config.contains("strong_convexity")) {
    results["strong_convexity"] = conjugate_scv_section(config.at("strong_convexity"), seed);
    any = true;
  }
  require(any, ErrorCode::config_error,
          "conjugate config requires at least one of \"quadratic\", \"grid\", \"descent\", "
          "\"strong_convexity\"");
  return results;
}

json cmd_growth(const json& config) {
  const std::uint64_t seed = require_seed(config);
  require(config.contains("p") && config.contains("n_list"), ErrorCode::config_error,
          "growth config requires \"p\" and \"n_list\"");
  const double p = config.at("p").is_string()
                       ? std::numeric_limits<double>::infinity()
                       : config.at("p").get<double>();
  const json budgets = budgets_of(config);
  const long search = budgets.value("search", 2000L);
  const int restarts = budgets.value("restarts", 4);
  const int probes = budgets.value("probes", 256);

  json rows = json::array();
  for (const auto& n_entry : config.at("n_list")) {
    const int n = n_entry.get<int>();
    require(n >= 1, ErrorCode::config_error, "n_list entries must be >= 1");
    const NormedSpace space = NormedSpace::lp(n, p);
    const ConditioningResult identity = identity_conditioning(space, probes, seed);

    json row;
    row["n"] = n;
    row["identity_ratio"] = identity.ratio;
    double best = identity.ratio;
    if (n <= 6 && search >= 1) {
      const ConditioningResult searched = min_conditioning(space, search, restarts, seed);
      row["searched_ratio"] = searched.ratio;
      best = std::min(best, searched.ratio);
    } else {
      row["searched_ratio"] = nullptr;
    }
    row["sqrt_ratio"] = std::sqrt(best);
    rows.push_back(std::move(row));
  }

  json results;
  results["p"] = config.at("p");
  results["rows"] = std::move(rows);
  return results;
}

json cmd_bm_bound(const json& config) {
  const std::uint64_t seed = require_seed(config);
  const NormedSpace space = require_space(config);
  const json budgets = budgets_of(config);
  const long search = budgets.value("search", 2000L);
  const int restarts = budgets.value("restarts", 4);
  const int family_size = budgets.value("family_size", 2);
  const long budget = budgets.value("budget", 4000L);

  const ConditioningResult conditioning = min_conditioning(space, search, restarts, seed);
  const RademacherReport type_report =
      estimate_constant(space, RademacherMode::type2, family_size, budget, seed);
  const RademacherReport cotype_report =
      estimate_constant(space, RademacherMode::cotype2, family_size, budget, seed);

  json results;
  results["space"] = to_json(space);
  results["conditioning"] = to_json(conditioning);
  results["sqrt_conditioning_bound"] = std::sqrt(conditioning.ratio);
  results["type2"] = to_json(type_report);
  results["cotype2"] = to_json(cotype_report);
  results["t2c2_product_lower_bound"] = type_report.ratio * cotype_report.ratio;
  return results;
}

json run_command(const std::string& command, const json& config) {
  if (config.contains("command")) {
    require(config.at("command").get<std::string>() == command, ErrorCode::config_error,
            "config \"command\" does not match the invoked subcommand");
  }
  const auto start = std::chrono::steady_clock::now();
  json results;
  if (command == "type-cotype") {
    results = cmd_type_cotype(config);
  } else if (command == "certify") {
    results = cmd_certify(config);
  } else if (command == "extract-ip") {
    results = cmd_extract_ip(config);
  } else if (command == "conjugate") {
    results = cmd_conjugate(config);
  } else if (command == "growth") {
    results = cmd_growth(config);
  } else if (command == "bm-bound") {
    results = cmd_bm_bound(config);
  } else {
    throw LabError(ErrorCode::config_error, "unknown command: " + command);
  }
  const auto stop = std::chrono::steady_clock::now();
  const double wall_ms =
      std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start).count();

  json report;
  report["command"] = command;
  report["config"] = config;
  report["version"] = kVersion;
  report["results"] = std::move(results);
  report["wall_time_ms"] = wall_ms;
  return report;
}

std::string report_csv(const std::string& command, const json& results) {
  std::ostringstream out;
  if (command == "growth") {
    out << "n,identity_ratio,searched_ratio,sqrt_ratio\n";
    for (const auto& row : results.at("rows")) {
      out << row.at("n").get<long>() << ','
          << format_double(row.at("identity_ratio").get<double>()) << ',';
      if (!row.at("searched_ratio").is_null()) {
        out << format_double(row.at("searched_ratio").get<double>());
      }
      out << ',' << format_double(row.at("sqrt_ratio").get<double>()) << '\n';
    }
    return out.str();
  }
  if (command == "conjugate" && results.contains("grid")) {
    const GridFunction grid = grid_from_json(results.at("grid").at("conjugate"));
    write_csv(grid, out);
    return out.str();
  }
  throw LabError(ErrorCode::config_error, "csv format is not supported for this command");
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::invalid_argument, "cannot open output file: " + tmp.string());
    out << content;
  }
  fs::rename(tmp, target);
}

}  // namespace normlab
