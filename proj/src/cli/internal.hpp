#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfdlcq/cli.hpp"

namespace lfdlcq::cli {

using Json = nlohmann::ordered_json;

std::unique_ptr<CLI::App> make_app(RunConfig& cfg);

/// Post-parse fixups: command name, sparsity range, LFDLCQ_THREADS.
void finish_config(RunConfig& cfg, CLI::App& app);

/// %.17g: round-trips every double.
std::string fmt(double v);

/// Tool, version, command and the full configuration.
Json provenance(const RunConfig& cfg);

/// JSON with doubles printed to 17 significant digits.
std::string dump(const Json& j);

/// Opens `path` for writing, creating parent directories. Throws
/// InvalidArgument when that fails.
std::unique_ptr<std::ostream> open_output(const std::string& path);

void execute(const RunConfig& cfg, std::ostream& out);

}  // namespace lfdlcq::cli
