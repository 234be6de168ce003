// normlab command-line front end: reproducible runs from JSON configs.
//
// Exit codes: 0 success, 2 config error, 3 numeric failure. Errors are
// emitted as a JSON object on stderr.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "normlab/run.hpp"
#include "normlab/version.hpp"

namespace {

using normlab::json;

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

json load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) {
    throw normlab::LabError(normlab::ErrorCode::config_error,
                            "cannot open config file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw normlab::LabError(
        normlab::ErrorCode::config_error,
        "config parse error at " + path + ":" + std::to_string(line_of_offset(text, e.byte)) +
            ": " + e.what());
  }
}

void emit_error(const std::string& code, const std::string& message,
                const normlab::LabError* lab) {
  json err;
  err["error"]["code"] = code;
  err["error"]["message"] = message;
  if (lab && lab->witness()) err["error"]["witness"] = normlab::to_json(*lab->witness());
  std::cerr << err.dump(2) << '\n';
}

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::int64_t seed_override = -1;
  bool has_seed_override = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "JSON config file")->required();
  cmd->add_option("--out", opts.out_path, "output path (default: stdout)");
  cmd->add_option("--format", opts.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--seed", opts.seed_override, "override the config seed")
      ->each([&opts](const std::string&) { opts.has_seed_override = true; });
}

int run(const std::string& command, const CommonOptions& opts) {
  json config = load_config(opts.config_path);
  if (opts.has_seed_override) config["seed"] = static_cast<std::uint64_t>(opts.seed_override);

  const json report = normlab::run_command(command, config);

  std::string payload;
  if (opts.format == "csv") {
    payload = normlab::report_csv(command, report.at("results"));
  } else {
    payload = report.dump(2);
    payload.push_back('\n');
  }

  if (opts.out_path.empty()) {
    std::cout << payload;
  } else {
    normlab::write_atomic(opts.out_path, payload);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normlab: desk-scale laboratory for norms, convexity certification, "
               "Rademacher type/cotype functionals, and Fenchel conjugacy"};
  app.set_version_flag("--version", normlab::kVersion);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"type-cotype", "lower-bound T_2 and C_2 by extremal family search"},
      {"certify", "estimate (mu, L) for a function or operator on a ball"},
      {"extract-ip", "extract the inner product certificate at a point"},
      {"conjugate", "quadratic/grid conjugacy, descent, and 1/L convexity suites"},
      {"growth", "conditioning ratio of l_p^n as n grows"},
      {"bm-bound", "compare sqrt(L/mu) and T2*C2 Banach-Mazur bounds"},
  };

  std::vector<std::unique_ptr<CommonOptions>> option_blocks;
  for (const auto& [name, description] : commands) {
    auto opts = std::make_unique<CommonOptions>();
    CLI::App* sub = app.add_subcommand(name, description);
    add_common(sub, *opts);
    CommonOptions* raw = opts.get();
    const std::string cmd_name = name;
    sub->callback([cmd_name, raw] {
      const int rc = run(cmd_name, *raw);
      if (rc != 0) throw CLI::RuntimeError(rc);
    });
    option_blocks.push_back(std::move(opts));
  }

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const normlab::LabError& e) {
    const bool config = e.code() == normlab::ErrorCode::config_error;
    emit_error(normlab::to_string(e.code()), e.what(), &e);
    return config ? 2 : 3;
  } catch (const std::exception& e) {
    emit_error("internal", e.what(), nullptr);
    return 3;
  }
  return 0;
}
