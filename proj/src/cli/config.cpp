#include <cmath>
#include <cstdlib>
#include <map>
#include <string>

#include "internal.hpp"
#include "lfdlcq/encoding.hpp"
#include "lfdlcq/errors.hpp"

namespace lfdlcq::cli {

double RunConfig::coupling() const {
  if (g) return *g;
  if (lambda) return coupling_from_lambda(*lambda, convention);
  return 0.0;
}

ModelParams RunConfig::model() const {
  ModelParams p;
  p.m_boson = m_boson;
  p.m_fermion = m_fermion;
  p.g = coupling();
  p.cutoff = cutoff;
  p.K = K;
  p.Q = Q;
  p.inertias = inertias;
  return p;
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

bool uses_model(const std::string& c) {
  return c == "ham" || c == "spectrum" || c == "pdf" || c == "sparsity" || c == "oracle-check";
}

}  // namespace

void RunConfig::validate() const {
  if (command == "resources") {
    require(K >= 1, "--k must be >= 1");
    if (scheme == "qcd") {
      require(lperp >= 1 && n_flavors >= 1 && n_colors >= 1,
              "--scheme qcd needs --lperp, --nf and --nc >= 1");
    } else {
      parse_scheme(scheme);
    }
    return;
  }
  if (command == "sparsity") {
    require(k_min >= 1 && k_max >= k_min, "sparsity needs 1 <= --k-min <= --k-max");
  } else {
    require(K >= 1, "--k must be >= 1");
  }
  require(cutoff >= std::max(K, k_max), "--cutoff must be >= K");
  require(std::isfinite(m_boson) && m_boson >= 0.0, "--mb must be finite and >= 0");
  require(std::isfinite(m_fermion) && m_fermion >= 0.0, "--mf must be finite and >= 0");
  require(!(g && lambda), "give either --g or --lambda, not both");
  if (g) require(std::isfinite(*g), "--g must be finite");
  if (lambda) require(std::isfinite(*lambda), "--lambda must be finite");
  if (uses_model(command) && command != "sparsity" && command != "oracle-check")
    require(g || lambda, command + " needs --g or --lambda");
  require(tol > 0.0 && tol < 1.0, "--tol must lie in (0, 1)");
  require(threads >= 1, "--threads must be >= 1");
  if (command == "spectrum") require(nev >= 1, "--nev must be >= 1");
  if (command == "renorm" || command == "fig2") {
    require(m_boson_phys > 0.0 && m_fermion_phys > 0.0, "--mbt and --mft must be positive");
    require(lambda.has_value(), command + " needs --lambda");
    require(rel_tol > 0.0 && rel_tol < 1.0, "--rel-tol must lie in (0, 1)");
    require(max_sweeps >= 1, "--max-sweeps must be >= 1");
  }
  if (qsq) require(*qsq > 0.0, "--qsq must be positive");
  require(mass_convention == "bare" || mass_convention == "physical",
          "--mass-convention must be bare or physical");
  if (command == "pdf") require(!out.empty(), "pdf needs --out <csv>");
  if (command == "fig2") {
    require(target_mass > 0.0, "--target-mass must be positive");
    require(!qsq_list.empty(), "--qsq needs at least one value");
    for (const auto& q : qsq_list) {
      if (q == "max") continue;
      char* end = nullptr;
      const double v = std::strtod(q.c_str(), &end);
      require(end != q.c_str() && *end == '\0' && v > 0.0,
              "--qsq values must be positive numbers or 'max'");
    }
  }
}

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  auto opt = [](const auto& o) { return o ? Json(*o) : Json(nullptr); };
  if (command == "resources") {
    j["K"] = K;
    j["scheme"] = scheme;
    if (scheme == "qcd") {
      j["lperp"] = lperp;
      j["n_f"] = n_flavors;
      j["n_c"] = n_colors;
    }
    return j;
  }
  if (command == "basis") {
    j["K"] = K;
    j["Q"] = opt(Q);
    if (!out.empty()) j["out"] = out;
    return j;
  }
  if (command == "sparsity") {
    j["k_min"] = k_min;
    j["k_max"] = k_max;
  } else {
    j["K"] = K;
  }
  j["Q"] = opt(Q);
  j["m_B"] = m_boson;
  j["m_F"] = m_fermion;
  j["g"] = opt(g);
  j["lambda"] = opt(lambda);
  j["coupling_convention"] = to_string(convention);
  j["g_effective"] = coupling();
  j["cutoff"] = cutoff;
  j["inertias"] = inertias == InertiaForm::closed_form ? "closed-form" : "bracket-sum";
  if (command == "renorm" || command == "fig2") {
    j["m_B_phys"] = m_boson_phys;
    j["m_F_phys"] = m_fermion_phys;
    j["boson_condition"] = to_string(boson_condition);
    j["rel_tol"] = rel_tol;
    j["max_sweeps"] = max_sweeps;
  }
  if (command == "spectrum") j["nev"] = nev;
  if (command == "pdf") j["state"] = state;
  if (command == "pdf" || command == "fig2") {
    j["qsq"] = opt(qsq);
    j["mass_convention"] = mass_convention;
  }
  if (command == "fig2") {
    j["target_mass"] = target_mass;
    j["qsq_list"] = qsq_list;
    j["out_dir"] = out_dir;
  }
  j["tol"] = tol;
  j["seed"] = seed;
  j["threads"] = threads;
  if (!out.empty()) j["out"] = out;
  return j;
}

namespace {

const std::map<std::string, CouplingConvention> kConventions{
    {"identity", CouplingConvention::identity}, {"sqrt4pi", CouplingConvention::sqrt4pi}};
const std::map<std::string, BosonCondition> kConditions{
    {"lowest", BosonCondition::lowest}, {"single-boson", BosonCondition::single_boson}};
const std::map<std::string, InertiaForm> kInertias{
    {"closed-form", InertiaForm::closed_form}, {"bracket-sum", InertiaForm::bracket_sum}};

void add_model(CLI::App* sub, RunConfig& c) {
  sub->add_option("--mb", c.m_boson, "bare boson mass")->capture_default_str();
  sub->add_option("--mf", c.m_fermion, "bare fermion mass")->capture_default_str();
  auto* g = sub->add_option("--g", c.g, "Hamiltonian coupling g");
  auto* l = sub->add_option("--lambda", c.lambda, "Lagrangian coupling, converted to g");
  g->excludes(l);
  sub->add_option("--coupling-convention", c.convention, "lambda -> g: identity or sqrt4pi")
      ->transform(CLI::CheckedTransformer(kConventions, CLI::ignore_case).description(""))
      ->option_text("identity|sqrt4pi")
      ->capture_default_str();
  sub->add_option("--cutoff", c.cutoff, "momentum cutoff Lambda")->capture_default_str();
  sub->add_option("--inertias", c.inertias, "closed-form or bracket-sum")
      ->transform(CLI::CheckedTransformer(kInertias, CLI::ignore_case).description(""))
      ->option_text("closed-form|bracket-sum");
}

void add_exec(CLI::App* sub, RunConfig& c) {
  sub->add_option("--threads", c.threads, "worker threads (default $LFDLCQ_THREADS or 1)");
}

void add_solver(CLI::App* sub, RunConfig& c) {
  sub->add_option("--tol", c.tol, "eigen residual tolerance")->capture_default_str();
  sub->add_option("--seed", c.seed, "Lanczos start-vector seed")->capture_default_str();
}

void add_renorm_targets(CLI::App* sub, RunConfig& c) {
  sub->add_option("--mbt", c.m_boson_phys, "physical boson mass")->capture_default_str();
  sub->add_option("--mft", c.m_fermion_phys, "physical fermion mass")->capture_default_str();
  sub->add_option("--boson-condition", c.boson_condition,
                  "Q=0 state matched to the boson mass: lowest or single-boson")
      ->transform(CLI::CheckedTransformer(kConditions, CLI::ignore_case).description(""))
      ->option_text("lowest|single-boson");
  sub->add_option("--rel-tol", c.rel_tol, "relative tolerance on the conditions")->capture_default_str();
  sub->add_option("--max-sweeps", c.max_sweeps, "outer sweeps before giving up")->capture_default_str();
}

}  // namespace

std::unique_ptr<CLI::App> make_app(RunConfig& c) {
  auto app = std::make_unique<CLI::App>("DLCQ of the 1+1D Yukawa model: basis, mass matrix, spectrum, "
                                        "renormalization, PDFs and qubit budgets",
                                        kToolName);
  app->require_subcommand(1);
  app->set_version_flag("--version", kToolVersion);
  c.cutoff = 2048;

  auto* basis = app->add_subcommand("basis", "list the Fock states of a (K, Q) block");
  basis->add_option("--k", c.K, "harmonic resolution")->required();
  basis->add_option("--q", c.Q, "charge (all charges when omitted)");
  basis->add_option("--out", c.out, "output file (stdout when omitted)");

  auto* ham = app->add_subcommand("ham", "write the M^2 matrix in coordinate format");
  ham->add_option("--k", c.K, "harmonic resolution")->required();
  ham->add_option("--q", c.Q, "charge");
  add_model(ham, c);
  add_exec(ham, c);
  ham->add_option("--out", c.out, "output file (stdout when omitted)");

  auto* spec = app->add_subcommand("spectrum", "lowest eigenvalues of M^2");
  spec->add_option("--k", c.K, "harmonic resolution")->required();
  spec->add_option("--q", c.Q, "charge");
  add_model(spec, c);
  add_solver(spec, c);
  add_exec(spec, c);
  spec->add_option("--nev", c.nev, "number of eigenvalues")->capture_default_str();

  auto* renorm = app->add_subcommand("renorm", "bare masses from physical masses");
  renorm->add_option("--k", c.K, "harmonic resolution")->required();
  renorm->add_option("--lambda", c.lambda, "Lagrangian coupling")->required();
  renorm->add_option("--coupling-convention", c.convention, "lambda -> g: identity or sqrt4pi")
      ->transform(CLI::CheckedTransformer(kConventions, CLI::ignore_case).description(""))
      ->option_text("identity|sqrt4pi")
      ->capture_default_str();
  renorm->add_option("--cutoff", c.cutoff, "momentum cutoff Lambda")->capture_default_str();
  renorm->add_option("--inertias", c.inertias, "closed-form or bracket-sum")
      ->transform(CLI::CheckedTransformer(kInertias, CLI::ignore_case).description(""))
      ->option_text("closed-form|bracket-sum");
  add_renorm_targets(renorm, c);
  add_exec(renorm, c);

  auto* pdf = app->add_subcommand("pdf", "parton distributions of one eigenstate");
  pdf->add_option("--k", c.K, "harmonic resolution")->required();
  pdf->add_option("--q", c.Q, "charge")->required();
  add_model(pdf, c);
  add_solver(pdf, c);
  add_exec(pdf, c);
  pdf->add_option("--state", c.state, "lowest, an eigenstate index, or mass:<M>")->capture_default_str();
  pdf->add_option("--qsq", c.qsq, "probing scale Q^2 (no cutoff when omitted)");
  pdf->add_option("--mass-convention", c.mass_convention,
                  "masses in the Q^2 cutoff: bare (--mb/--mf) or physical (--mbt/--mft)")
      ->capture_default_str();
  pdf->add_option("--mbt", c.m_boson_phys, "physical boson mass")->capture_default_str();
  pdf->add_option("--mft", c.m_fermion_phys, "physical fermion mass")->capture_default_str();
  pdf->add_option("--out", c.out, "CSV path; a .json sidecar is written next to it")->required();

  auto* sparsity = app->add_subcommand("sparsity", "nonzeros per row against the analytic bounds");
  sparsity->add_option("--k", c.K, "single K (same as --k-min K --k-max K)");
  sparsity->add_option("--k-min", c.k_min, "first K")->capture_default_str();
  sparsity->add_option("--k-max", c.k_max, "last K");
  sparsity->add_option("--q", c.Q, "charge (default 0)");
  add_model(sparsity, c);
  add_exec(sparsity, c);

  auto* res = app->add_subcommand("resources", "qubit budget of an encoding");
  res->add_option("--scheme", c.scheme, "direct-direct, direct-compact, compact or qcd")
      ->capture_default_str();
  res->add_option("--k", c.K, "harmonic resolution")->required();
  res->add_option("--lperp", c.lperp, "transverse cutoff (qcd)");
  res->add_option("--nf", c.n_flavors, "flavors (qcd)");
  res->add_option("--nc", c.n_colors, "colors (qcd)");

  auto* oracle = app->add_subcommand("oracle-check", "change descriptors against the Hamiltonian");
  oracle->add_option("--k", c.K, "harmonic resolution")->required();
  add_model(oracle, c);

  auto* fig2 = app->add_subcommand("fig2", "renormalized K=14 PDFs at several Q^2 cutoffs");
  c.qsq_list = {"max", "400", "289"};
  fig2->add_option("--k", c.K, "harmonic resolution")->capture_default_str();
  fig2->add_option("--q", c.Q, "charge of the eigenstate");
  fig2->add_option("--lambda", c.lambda, "Lagrangian coupling")->capture_default_str();
  fig2->add_option("--coupling-convention", c.convention, "lambda -> g: identity or sqrt4pi")
      ->transform(CLI::CheckedTransformer(kConventions, CLI::ignore_case).description(""))
      ->option_text("identity|sqrt4pi")
      ->capture_default_str();
  fig2->add_option("--cutoff", c.cutoff, "momentum cutoff Lambda")->capture_default_str();
  add_renorm_targets(fig2, c);
  add_solver(fig2, c);
  add_exec(fig2, c);
  fig2->add_option("--target-mass", c.target_mass, "eigenstate selected by nearest M")
      ->capture_default_str();
  fig2->add_option("--qsq", c.qsq_list, "cutoffs: numbers or 'max'")->capture_default_str();
  fig2->add_option("--mass-convention", c.mass_convention, "masses in the Q^2 cutoff: bare or physical")
      ->capture_default_str();
  fig2->add_option("--out-dir", c.out_dir, "directory for the CSV and JSON files")->capture_default_str();

  // fig2 defaults are the published parameter set
  fig2->preparse_callback([&c](std::size_t) {
    c.K = 14;
    c.Q = 0;
    c.m_boson_phys = 6.7;
    c.m_fermion_phys = 1.0;
    c.lambda = 1.0;
    c.convention = CouplingConvention::sqrt4pi;
    c.boson_condition = BosonCondition::single_boson;
  });
  sparsity->preparse_callback([&c](std::size_t) { c.g = 1.0; });
  oracle->preparse_callback([&c](std::size_t) { c.g = 1.0; });
  return app;
}

void finish_config(RunConfig& c, CLI::App& app) {
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  if (c.command == "sparsity") {
    if (c.K > 0) c.k_min = c.k_max = c.K;
    if (c.k_max == 0) c.k_max = c.k_min;
    if (!c.Q) c.Q = 0;
  }
  CLI::App* sub = app.get_subcommand(c.command);
  auto* threads = sub->get_option_no_throw("--threads");
  if (threads && threads->count() == 0) {
    if (const char* env = std::getenv("LFDLCQ_THREADS"); env && *env) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || v < 1)
        throw InvalidArgument("LFDLCQ_THREADS must be a positive integer");
      c.threads = static_cast<unsigned>(v);
    }
  }
}

RunConfig parse_arguments(int argc, const char* const* argv) {
  RunConfig c;
  auto app = make_app(c);
  app->parse(argc, argv);
  finish_config(c, *app);
  return c;
}

}  // namespace lfdlcq::cli
