#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lfdlcq {

/// Base for all library failures. `kind()` is a stable machine-readable tag
/// used by the CLI error payload.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error("invalid-argument", what) {}
};

class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what) : Error("resource-limit", what) {}
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual,
                   std::vector<std::string> trace = {})
      : Error("convergence", what), best_residual_(best_residual), trace_(std::move(trace)) {}
  double best_residual() const noexcept { return best_residual_; }
  const std::vector<std::string>& trace() const noexcept { return trace_; }

 private:
  double best_residual_;
  std::vector<std::string> trace_;
};

class InfeasibleSeed : public Error {
 public:
  explicit InfeasibleSeed(const std::string& what) : Error("infeasible-seed", what) {}
};

class DegenerateTruncation : public Error {
 public:
  DegenerateTruncation(const std::string& what, double kept_fraction)
      : Error("degenerate-truncation", what), kept_fraction_(kept_fraction) {}
  double kept_fraction() const noexcept { return kept_fraction_; }

 private:
  double kept_fraction_;
};

}  // namespace lfdlcq
