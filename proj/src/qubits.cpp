#include <string>

#include "lfdlcq/encoding.hpp"
#include "lfdlcq/errors.hpp"

namespace lfdlcq {

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::direct_direct: return "direct-direct";
    case Scheme::direct_compact: return "direct-compact";
    case Scheme::compact: return "compact";
  }
  return "?";
}

Scheme parse_scheme(const std::string& text) {
  if (text == "direct-direct") return Scheme::direct_direct;
  if (text == "direct-compact") return Scheme::direct_compact;
  if (text == "compact") return Scheme::compact;
  throw InvalidArgument("unknown scheme '" + text + "' (direct-direct|direct-compact|compact)");
}

int ceil_log2(std::int64_t x) {
  int b = 0;
  while (x > 1 && (std::int64_t{1} << b) < x) ++b;
  return b;
}

namespace {

void finish(QubitBudget& q) {
  q.total_qubits = 0;
  for (const auto& [label, count] : q.breakdown) q.total_qubits += count;
}

}  // namespace

QubitBudget qubit_count(Scheme scheme, int K) {
  if (K < 1) throw InvalidArgument("qubit_count: K must be >= 1");
  QubitBudget q;
  q.scheme = to_string(scheme);
  q.K = K;
  switch (scheme) {
    case Scheme::direct_direct: {
      std::int64_t bosons = 0;
      for (int n = 1; n <= K; ++n) bosons += K / n;
      q.breakdown = {{"fermion modes", K}, {"antifermion modes", K}, {"boson occupancy (unary)", bosons}};
      break;
    }
    case Scheme::direct_compact: {
      std::int64_t bosons = 0;
      for (int n = 1; n <= K; ++n) bosons += ceil_log2(K / n);
      q.breakdown = {{"fermion modes", K}, {"antifermion modes", K}, {"boson occupancy (binary)", bosons}};
      break;
    }
    case Scheme::compact: {
      const std::int64_t I = max_distinct_parts(K);
      const std::int64_t b = ceil_log2(K);
      q.register_qubits = 2 * b;
      q.breakdown = {{"fermion momenta", I * b},
                     {"antifermion momenta", I * b},
                     {"boson (momentum, occupancy) registers", I * 2 * b}};
      break;
    }
  }
  finish(q);
  return q;
}

QubitBudget qubit_count_qcd(int K, int lperp, int n_flavors, int n_colors) {
  if (K < 1 || lperp < 1 || n_flavors < 1 || n_colors < 1)
    throw InvalidArgument("qubit_count_qcd: all arguments must be >= 1");
  const std::int64_t lk = ceil_log2(K);
  const std::int64_t ll = ceil_log2(lperp);
  const std::int64_t colors_adj =
      n_colors == 1 ? 0 : ceil_log2(static_cast<std::int64_t>(n_colors) * n_colors - 1);
  const std::int64_t fermion_mode = lk + 2 * ll + 1 + ceil_log2(n_flavors) + ceil_log2(n_colors);
  const std::int64_t boson_mode = lk + 2 * ll + lk + 1 + colors_adj;
  QubitBudget q;
  q.scheme = "qcd-compact";
  q.K = K;
  q.breakdown = {{"fermion and antifermion modes", 2 * static_cast<std::int64_t>(K) * fermion_mode},
                 {"boson modes", static_cast<std::int64_t>(K) * boson_mode}};
  finish(q);
  return q;
}

double time_evolution_gate_scaling(int K, double t, double constant) {
  if (K < 1 || t < 0.0) throw InvalidArgument("time_evolution_gate_scaling: need K >= 1, t >= 0");
  const double k = K;
  return constant * t * k * k * k * k;
}

double adiabatic_gate_scaling(int K, double T, double constant) {
  if (K < 1 || T < 0.0) throw InvalidArgument("adiabatic_gate_scaling: need K >= 1, T >= 0");
  const double k = K;
  return constant * T * k * k * k * k;
}

std::int64_t delta_count_bound(int K) {
  const std::int64_t k = K;
  return 324 * k * k * k;
}

}  // namespace lfdlcq
