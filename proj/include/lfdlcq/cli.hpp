#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lfdlcq/hamiltonian.hpp"
#include "lfdlcq/spectrum.hpp"

namespace lfdlcq::cli {

inline constexpr const char* kToolName = "lfdlcq";
inline constexpr const char* kToolVersion = "1.0.0";

/// Parameter bundle shared by all subcommands; each command reads the
/// fields it needs. Validated before any computation.
struct RunConfig {
  std::string command;

  int K = 0;
  std::optional<int> Q;
  int k_min = 3;  // sparsity range
  int k_max = 0;

  // model
  double m_boson = 1.0;
  double m_fermion = 1.0;
  std::optional<double> g;
  std::optional<double> lambda;
  CouplingConvention convention = CouplingConvention::identity;
  int cutoff = 0;
  InertiaForm inertias = InertiaForm::closed_form;

  // renormalization targets
  double m_boson_phys = 1.0;
  double m_fermion_phys = 1.0;
  BosonCondition boson_condition = BosonCondition::lowest;
  double rel_tol = 1e-6;
  int max_sweeps = 50;

  // spectrum / pdf
  std::size_t nev = 1;
  double tol = 1e-9;
  std::string state = "lowest";  // lowest | <index> | mass:<M>
  std::optional<double> qsq;
  std::string mass_convention = "bare";  // masses entering the Q^2 cutoff
  double target_mass = 18.96;
  std::vector<std::string> qsq_list;  // fig2: "max" or numbers

  // resources
  std::string scheme = "compact";
  int lperp = 0;
  int n_flavors = 0;
  int n_colors = 0;

  // io and execution
  std::string out;
  std::string out_dir = ".";
  std::uint64_t seed = 20200117;
  unsigned threads = 1;

  /// Coupling g, converting lambda when that was given.
  double coupling() const;
  ModelParams model() const;
  void validate() const;
  nlohmann::ordered_json to_json() const;
};

/// Parses argv into a RunConfig. Throws CLI::ParseError (and its
/// subclasses) for usage errors.
RunConfig parse_arguments(int argc, const char* const* argv);

/// Executes one subcommand. Exit status 0 on success, 2 on argument errors
/// (usage on `err`), 1 on computation errors (error JSON on `err`).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lfdlcq::cli
