#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "internal.hpp"
#include "lfdlcq/errors.hpp"

namespace lfdlcq::cli {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json provenance(const RunConfig& cfg) {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config"] = cfg.to_json();
  return j;
}

std::string dump(const Json& j) { return j.dump(); }

std::unique_ptr<std::ostream> open_output(const std::string& path) {
  namespace fs = std::filesystem;
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
    if (ec) throw InvalidArgument("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  }
  // binary: LF line endings everywhere
  auto f = std::make_unique<std::ofstream>(p, std::ios::binary | std::ios::trunc);
  if (!*f) throw InvalidArgument("cannot write " + path);
  return f;
}

}  // namespace lfdlcq::cli
