#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "internal.hpp"
#include "lfdlcq/encoding.hpp"
#include "lfdlcq/errors.hpp"
#include "lfdlcq/observables.hpp"

namespace lfdlcq::cli {
namespace {

// full diagonalization for mass:<M> selection stays below this dimension
constexpr std::size_t kDenseSelectLimit = 4000;

BuildOptions build_options(const RunConfig& c) {
  BuildOptions o;
  o.threads = c.threads;
  return o;
}

SolverOptions solver_options(const RunConfig& c) {
  SolverOptions o;
  o.seed = c.seed;
  return o;
}

Json nullable(const std::optional<int>& q) { return q ? Json(*q) : Json(nullptr); }

/// Signed mass: sqrt of |M^2| carrying the sign of M^2.
double signed_mass(double m2) { return m2 < 0 ? -std::sqrt(-m2) : std::sqrt(m2); }

struct Selected {
  std::size_t index = 0;
  double eigenvalue = 0.0;
  Eigen::VectorXd vector;
  double residual = 0.0;
};

double residual(const SparseMatrix& m, const Eigen::VectorXd& v, double lambda) {
  return (m.multiply(v) - lambda * v).norm();
}

Selected nearest_mass(const SparseMatrix& m, double mass) {
  if (m.dim() > kDenseSelectLimit)
    throw ResourceLimit("selecting by mass needs the full spectrum; dimension " +
                        std::to_string(m.dim()) + " exceeds " + std::to_string(kDenseSelectLimit));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.to_dense());
  if (es.info() != Eigen::Success) throw ConvergenceError("dense eigensolver failed", INFINITY);
  const auto& ev = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (std::abs(ev[i] - mass * mass) < std::abs(ev[best] - mass * mass)) best = i;
  Selected s;
  s.index = static_cast<std::size_t>(best);
  s.eigenvalue = ev[best];
  s.vector = es.eigenvectors().col(best);
  s.residual = residual(m, s.vector, s.eigenvalue);
  return s;
}

Selected select_state(const SparseMatrix& m, const RunConfig& c) {
  const std::string& st = c.state;
  if (st.rfind("mass:", 0) == 0) {
    const std::string num = st.substr(5);
    char* end = nullptr;
    const double mass = std::strtod(num.c_str(), &end);
    if (num.empty() || *end != '\0' || !(mass > 0.0))
      throw InvalidArgument("--state mass:<M> needs a positive M");
    return nearest_mass(m, mass);
  }
  std::size_t index = 0;
  if (st != "lowest") {
    if (st.empty() || !std::all_of(st.begin(), st.end(), [](unsigned char ch) { return std::isdigit(ch); }))
      throw InvalidArgument("--state must be lowest, an index, or mass:<M>");
    index = std::stoul(st);
  }
  if (index >= m.dim())
    throw InvalidArgument("--state " + st + " exceeds the block dimension " + std::to_string(m.dim()));
  auto r = lowest_eigenpairs(m, index + 1, c.tol, solver_options(c));
  Selected s;
  s.index = index;
  s.eigenvalue = r.eigenvalues[index];
  s.vector = r.eigenvectors[index];
  s.residual = r.residuals[index];
  return s;
}

void write_pdf_csv(std::ostream& os, const PdfTable& t) {
  os << "n,x,f_f,f_a,f_b\n";
  for (const auto& e : t.entries)
    os << e.n << ',' << fmt(e.x) << ',' << fmt(e.fermion) << ',' << fmt(e.antifermion) << ','
       << fmt(e.boson) << '\n';
}

Json sum_rules(const PdfTable& t, int K, int Q) {
  Json j;
  j["momentum_sum"] = t.momentum_sum();
  j["momentum_residual"] = t.momentum_sum() - K;
  j["charge_sum"] = t.charge_sum();
  j["charge_residual"] = t.charge_sum() - Q;
  return j;
}

FreeMasses cutoff_masses(const RunConfig& c, const ModelParams& bare) {
  return c.mass_convention == "physical" ? FreeMasses{c.m_boson_phys, c.m_fermion_phys}
                                         : bare_masses(bare);
}

// ---------------------------------------------------------------------------

void cmd_basis(const RunConfig& c, std::ostream& out) {
  const auto basis = enumerate_basis(c.K, c.Q);
  std::unique_ptr<std::ostream> file;
  std::ostream& os = c.out.empty() ? out : *(file = open_output(c.out));
  Json h = provenance(c);
  h["K"] = c.K;
  h["Q"] = nullable(c.Q);
  h["dimension"] = basis.size();
  os << dump(h) << '\n';
  for (const auto& s : basis) os << to_string(s) << '\n';
}

void cmd_ham(const RunConfig& c, std::ostream& out) {
  const auto params = c.model();
  const auto basis = enumerate_basis(c.K, c.Q);
  const auto m = build_mass_matrix(basis, params, build_options(c));
  std::unique_ptr<std::ostream> file;
  std::ostream& os = c.out.empty() ? out : *(file = open_output(c.out));
  Json h = provenance(c);
  h["dim"] = m.dim();
  h["nonzeros"] = m.nonzeros();
  h["sparsity"] = sparsity(m);
  h["max_element_M2"] = m.max_abs();
  h["max_element_H"] = m.dim() ? max_abs_element(m, c.K) : 0.0;
  os << dump(h) << '\n';
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (const auto& e : m.row(i)) os << i << ' ' << e.col << ' ' << fmt(e.value) << '\n';
}

void cmd_spectrum(const RunConfig& c, std::ostream& out) {
  const auto basis = enumerate_basis(c.K, c.Q);
  if (c.nev > basis.size())
    throw InvalidArgument("--nev " + std::to_string(c.nev) + " exceeds the block dimension " +
                          std::to_string(basis.size()));
  const auto m = build_mass_matrix(basis, c.model(), build_options(c));
  const auto r = lowest_eigenpairs(m, c.nev, c.tol, solver_options(c));
  Json j = provenance(c);
  j["dim"] = basis.size();
  j["method"] = r.used_lanczos ? "lanczos" : "dense";
  j["eigenvalues"] = r.eigenvalues;
  Json masses = Json::array();
  for (double v : r.eigenvalues) masses.push_back(signed_mass(v));
  j["masses"] = masses;
  j["residuals"] = r.residuals;
  out << dump(j) << '\n';
}

RenormTarget renorm_target(const RunConfig& c) {
  RenormTarget t;
  t.m_boson_phys = c.m_boson_phys;
  t.m_fermion_phys = c.m_fermion_phys;
  t.lambda = *c.lambda;
  t.cutoff = c.cutoff;
  t.K = c.K;
  t.convention = c.convention;
  t.inertias = c.inertias;
  t.boson_condition = c.boson_condition;
  return t;
}

RenormSettings renorm_settings(const RunConfig& c) {
  RenormSettings s;
  s.rel_tol = c.rel_tol;
  s.max_sweeps = c.max_sweeps;
  s.threads = c.threads;
  return s;
}

Json renorm_json(const RenormResult& r) {
  Json j;
  j["m_B"] = r.m_boson;
  j["m_F"] = r.m_fermion;
  j["seed_m_B"] = r.seed_m_boson;
  j["constrained_q0"] = r.lowest_q0;
  j["lowest_q1"] = r.lowest_q1;
  j["boson_overlap"] = r.boson_overlap;
  j["sweeps"] = r.sweeps;
  j["eigen_solves"] = r.eigen_solves;
  Json trace = Json::array();
  for (const auto& s : r.trace)
    trace.push_back({{"sweep", s.sweep}, {"m_B", s.m_boson}, {"m_F", s.m_fermion},
                     {"q0", s.lowest_q0}, {"q1", s.lowest_q1}});
  j["trace"] = trace;
  return j;
}

void cmd_renorm(const RunConfig& c, std::ostream& out) {
  const auto r = renormalize(renorm_target(c), renorm_settings(c));
  Json j = provenance(c);
  j["g"] = c.coupling();
  j["result"] = renorm_json(r);
  out << dump(j) << '\n';
}

void cmd_pdf(const RunConfig& c, std::ostream& out) {
  const auto params = c.model();
  const auto basis = enumerate_basis(c.K, c.Q);
  if (basis.empty()) throw InvalidArgument("the (K, Q) block is empty");
  const auto m = build_mass_matrix(basis, params, build_options(c));
  const auto sel = select_state(m, c);
  const FreeMasses masses = cutoff_masses(c, params);

  Eigen::VectorXd v = sel.vector;
  double kept = 1.0;
  std::size_t kept_states = basis.size();
  if (c.qsq) {
    auto t = truncate_state(v, basis, masses, *c.qsq);
    v = std::move(t.vector);
    kept = t.kept_fraction;
    kept_states = t.kept_states;
  }
  auto table = pdf(v, basis);
  table.qsq = c.qsq;

  write_pdf_csv(*open_output(c.out), table);
  Json j = provenance(c);
  j["csv"] = c.out;
  j["dim"] = basis.size();
  j["state_index"] = sel.index;
  j["eigenvalue"] = sel.eigenvalue;
  j["mass"] = signed_mass(sel.eigenvalue);
  j["residual"] = sel.residual;
  j["qmax2"] = qmax2(basis, masses);
  j["qsq"] = c.qsq ? Json(*c.qsq) : Json(nullptr);
  j["kept_fraction"] = kept;
  j["kept_states"] = kept_states;
  j["sum_rules"] = sum_rules(table, c.K, *c.Q);
  const auto sidecar = std::filesystem::path(c.out).replace_extension(".json").string();
  *open_output(sidecar) << dump(j) << '\n';
  out << dump(j) << '\n';
}

void cmd_sparsity(const RunConfig& c, std::ostream& out) {
  Json rows = Json::array();
  bool all_within = true;
  for (int K = c.k_min; K <= c.k_max; ++K) {
    RunConfig ck = c;
    ck.K = K;
    const auto basis = enumerate_basis(K, c.Q);
    const auto m = build_mass_matrix(basis, ck.model(), build_options(c));
    const auto s = sparsity(m);
    const double lo = sparsity_lower_bound(K), hi = sparsity_upper_bound(K);
    const bool within = static_cast<double>(s) >= lo && static_cast<double>(s) <= hi;
    all_within = all_within && within;
    rows.push_back({{"K", K}, {"dim", basis.size()}, {"sparsity", s}, {"lower", lo},
                    {"upper", hi}, {"within", within}});
  }
  Json j = provenance(c);
  j["rows"] = rows;
  j["all_within"] = all_within;
  out << dump(j) << '\n';
}

void cmd_resources(const RunConfig& c, std::ostream& out) {
  const QubitBudget b = c.scheme == "qcd" ? qubit_count_qcd(c.K, c.lperp, c.n_flavors, c.n_colors)
                                          : qubit_count(parse_scheme(c.scheme), c.K);
  Json j = provenance(c);
  j["scheme"] = b.scheme;
  j["K"] = b.K;
  j["total_qubits"] = b.total_qubits;
  Json items = Json::array();
  for (const auto& [name, q] : b.breakdown) items.push_back({{"item", name}, {"qubits", q}});
  j["breakdown"] = items;
  if (c.scheme == "compact") j["register_qubits"] = b.register_qubits;
  if (c.scheme == "qcd" && c.K == 20 && c.lperp == 20 && c.n_flavors == 5 && c.n_colors == 3) {
    j["published_total"] = kPublishedQcdQubits;
    j["delta_vs_published"] = b.total_qubits - kPublishedQcdQubits;
  }
  out << dump(j) << '\n';
}

}  // namespace

/// Thrown by oracle-check on a mismatch so run() reports it as a failure.
class OracleMismatch : public Error {
 public:
  explicit OracleMismatch(const std::string& what) : Error("oracle-mismatch", what) {}
};

namespace {

void cmd_oracle(const RunConfig& c, std::ostream& out) {
  const auto r = check_delta_oracle(c.model());
  Json j = provenance(c);
  j["deltas"] = r.deltas;
  j["invalid_deltas"] = r.invalid_deltas;
  j["states"] = r.states;
  j["mismatches"] = r.mismatches;
  j["counterexamples"] = r.counterexamples;
  j["pass"] = r.passed();
  out << dump(j) << '\n';
  if (!r.passed())
    throw OracleMismatch(std::to_string(r.mismatches) + " states and " +
                         std::to_string(r.invalid_deltas) + " descriptors disagree");
}

void cmd_fig2(const RunConfig& c, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto target = renorm_target(c);
  const auto r = renormalize(target, renorm_settings(c));
  ModelParams params = r.params(target);
  params.Q = c.Q;
  const auto basis = enumerate_basis(c.K, c.Q);
  const auto m = build_mass_matrix(basis, params, build_options(c));
  const auto sel = nearest_mass(m, c.target_mass);
  const FreeMasses masses = cutoff_masses(c, params);
  const double qmax = qmax2(basis, masses);
  const int Q = c.Q.value_or(0);

  namespace fs = std::filesystem;
  Json cuts = Json::array();
  for (const auto& label : c.qsq_list) {
    const double qsq = label == "max" ? qmax : std::stod(label);
    auto t = truncate_state(sel.vector, basis, masses, qsq);
    auto table = pdf(t.vector, basis);
    table.qsq = qsq;
    const auto path = (fs::path(c.out_dir) / ("fig2_q2_" + label + ".csv")).string();
    write_pdf_csv(*open_output(path), table);
    Json cj{{"label", label}, {"qsq", qsq}, {"csv", path}, {"kept_fraction", t.kept_fraction},
            {"kept_states", t.kept_states}};
    cj["sum_rules"] = sum_rules(table, c.K, Q);
    cuts.push_back(cj);
  }

  Json j = provenance(c);
  j["g"] = c.coupling();
  j["renormalization"] = renorm_json(r);
  j["dim"] = basis.size();
  j["state_index"] = sel.index;
  j["eigenvalue"] = sel.eigenvalue;
  j["mass"] = signed_mass(sel.eigenvalue);
  j["mass_rel_deviation"] = std::abs(signed_mass(sel.eigenvalue) - c.target_mass) / c.target_mass;
  j["residual"] = sel.residual;
  j["qmax2"] = qmax;
  j["qmax"] = std::sqrt(qmax);
  j["cutoffs"] = cuts;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // wall time goes to stdout only so the summary file stays reproducible
  *open_output((fs::path(c.out_dir) / "fig2_summary.json").string()) << dump(j) << '\n';
  j["seconds"] = secs;
  out << dump(j) << '\n';
}

}  // namespace

void execute(const RunConfig& c, std::ostream& out) {
  const std::string& cmd = c.command;
  if (cmd == "basis") return cmd_basis(c, out);
  if (cmd == "ham") return cmd_ham(c, out);
  if (cmd == "spectrum") return cmd_spectrum(c, out);
  if (cmd == "renorm") return cmd_renorm(c, out);
  if (cmd == "pdf") return cmd_pdf(c, out);
  if (cmd == "sparsity") return cmd_sparsity(c, out);
  if (cmd == "resources") return cmd_resources(c, out);
  if (cmd == "oracle-check") return cmd_oracle(c, out);
  if (cmd == "fig2") return cmd_fig2(c, out);
  throw InvalidArgument("unknown command " + cmd);
}

}  // namespace lfdlcq::cli
