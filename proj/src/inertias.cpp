#include <cmath>
#include <string>

#include "lfdlcq/errors.hpp"
#include "lfdlcq/hamiltonian.hpp"

namespace lfdlcq {

double bracket(int n, int m) {
  if (n == 0 || m == 0) return 0.0;
  return (m == -n) ? 1.0 / n : 0.0;
}

double harmonic_number(int n) {
  // smallest terms first
  double h = 0.0;
  for (int i = n; i >= 1; --i) h += 1.0 / i;
  return h;
}

namespace {

void check_mode(int n, int cutoff) {
  if (n < 1 || n > cutoff)
    throw InvalidArgument("self-induced inertia requires 1 <= n <= cutoff (n=" + std::to_string(n) +
                          ", cutoff=" + std::to_string(cutoff) + ")");
}

}  // namespace

InertiaTriple self_induced_inertias(int n, int cutoff) {
  check_mode(n, cutoff);
  const double hn = harmonic_number(n);
  const double hl = harmonic_number(cutoff);
  const double hl_minus = harmonic_number(cutoff - n);
  InertiaTriple t;
  t.alpha = -1.0 / n - hl_minus - harmonic_number(2 * n) + 2.0 * hn;
  t.beta = -2.0 / n + hn + hl - hl_minus;
  t.gamma = -1.0 / (2.0 * n) + hn + hl - harmonic_number(cutoff + n);
  return t;
}

InertiaTriple inertia_bracket_sums(int n, int cutoff) {
  check_mode(n, cutoff);
  InertiaTriple t;
  for (int m = 1; m <= cutoff; ++m) {
    const double same = bracket(n - m, m - n);
    const double opposite = bracket(n + m, -m - n);
    t.alpha += same - opposite;
    t.beta += static_cast<double>(n) / m * same;
    t.gamma += static_cast<double>(n) / m * opposite;
  }
  return t;
}

InertiaBounds inertia_bounds(int n, int cutoff) {
  check_mode(n, cutoff);
  if (n == cutoff) throw InvalidArgument("inertia_bounds: requires n < cutoff");
  const double dn = n;
  const double L = cutoff;
  const double la = std::log(dn / (2.0 * (L - dn)));
  const double lb = std::log(L * dn / (L - dn));
  const double lg = std::log(dn * L / (L + dn));
  InertiaBounds b;
  b.lower.alpha = la - 2.0 + 1.0 / dn;
  b.upper.alpha = la + 2.0 - 3.0 / (2.0 * dn) - 1.0 / (L - dn);
  b.lower.beta = lb - 1.0 - 1.0 / dn + 1.0 / L;
  b.upper.beta = lb + 2.0 - 2.0 / dn - 1.0 / (L - dn);
  b.lower.gamma = lg - 1.0 + 1.0 / (2.0 * dn) + 1.0 / (L + dn);
  b.upper.gamma = lg + 2.0 - 1.0 / (2.0 * dn) - 1.0 / (L + dn);
  return b;
}

}  // namespace lfdlcq
