#pragma once

#include <string>

#include "normlab/serialize.hpp"

namespace normlab {

/// Results payloads for the CLI subcommands. Configs are JSON objects; every
/// config must carry a "seed" (there are no unseeded runs). See README for
/// the per-command schema.
json cmd_type_cotype(const json& config);
json cmd_certify(const json& config);
json cmd_extract_ip(const json& config);
json cmd_conjugate(const json& config);
json cmd_growth(const json& config);
json cmd_bm_bound(const json& config);

/// Dispatches to the command, wrapping the results in a report envelope:
/// {"command", "config" (echo), "version", "results", "wall_time_ms"}.
/// Identical configs produce byte-identical envelopes up to wall_time_ms.
json run_command(const std::string& command, const json& config);

/// CSV rendering ('.' decimal, LF endings) for tabular results; supported
/// for growth reports and for conjugate reports carrying a grid.
std::string report_csv(const std::string& command, const json& results);

/// Writes via a temp file in the target directory plus rename.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace normlab
