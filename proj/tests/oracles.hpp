#pragma once

// Reference implementations used only by the tests. They share the state
// type with the library but none of its algorithms: the Hamiltonian is
// applied by summing every index tuple of every line on occupation arrays.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "lfdlcq/fock_basis.hpp"

namespace oracle {

using lfdlcq::FockState;

inline double bracket(int n, int m) {
  if (n == 0 || m == 0) return 0.0;
  return m == -n ? 1.0 / n : 0.0;
}

/// p(K) by the coin-change recurrence.
inline std::uint64_t partitions(int K) {
  std::vector<std::uint64_t> p(static_cast<std::size_t>(K) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= K; ++part)
    for (int s = part; s <= K; ++s) p[static_cast<std::size_t>(s)] += p[static_cast<std::size_t>(s - part)];
  return p[static_cast<std::size_t>(K)];
}

struct Occ {
  std::vector<int> f, a, b;  // indexed by momentum
  explicit Occ(int size) : f(size, 0), a(size, 0), b(size, 0) {}
};

inline FockState to_state(const Occ& o) {
  FockState s;
  for (std::size_t n = 1; n < o.f.size(); ++n) {
    if (o.f[n]) s.fermions.push_back(static_cast<int>(n));
    if (o.a[n]) s.antifermions.push_back(static_cast<int>(n));
    if (o.b[n]) s.bosons.push_back({static_cast<int>(n), o.b[n]});
  }
  return s;
}

inline Occ to_occ(const FockState& s, int size) {
  Occ o(size);
  for (int n : s.fermions) o.f[static_cast<std::size_t>(n)] = 1;
  for (int n : s.antifermions) o.a[static_cast<std::size_t>(n)] = 1;
  for (const auto& bm : s.bosons) o.b[static_cast<std::size_t>(bm.n)] = bm.w;
  return o;
}

/// Every occupation of total momentum K, by depth-first choice per mode.
inline std::vector<FockState> basis(int K) {
  std::vector<FockState> out;
  Occ o(K + 1);
  std::function<void(int, int)> go = [&](int n, int left) {
    if (left == 0) {
      out.push_back(to_state(o));
      return;
    }
    if (n == 0) return;
    for (int f = 0; f <= 1; ++f)
      for (int a = 0; a <= 1; ++a)
        for (int w = 0; (f + a + w) * n <= left; ++w) {
          o.f[static_cast<std::size_t>(n)] = f;
          o.a[static_cast<std::size_t>(n)] = a;
          o.b[static_cast<std::size_t>(n)] = w;
          go(n - 1, left - (f + a + w) * n);
        }
    o.f[static_cast<std::size_t>(n)] = o.a[static_cast<std::size_t>(n)] = o.b[static_cast<std::size_t>(n)] = 0;
  };
  go(K, K);
  return out;
}

/// Inertias as their defining sums, in long double.
struct Inertias {
  long double alpha = 0, beta = 0, gamma = 0;
};

inline Inertias inertia_sums(int n, int cutoff) {
  Inertias r;
  for (int m = 1; m <= cutoff; ++m) {
    const long double p = bracket(n - m, m - n), q = bracket(n + m, -m - n);
    r.alpha += p - q;
    r.beta += static_cast<long double>(n) / m * p;
    r.gamma += static_cast<long double>(n) / m * q;
  }
  return r;
}

inline long double harmonic(int n) {
  long double h = 0;
  for (int i = n; i >= 1; --i) h += 1.0L / i;
  return h;
}

// -- ladder operators --------------------------------------------------------

enum Sp { F, A, B };

struct Op {
  Sp sp;
  bool dag;
  int k;
};

inline Op bd(int k) { return {F, true, k}; }
inline Op b(int k) { return {F, false, k}; }
inline Op dd(int k) { return {A, true, k}; }
inline Op d(int k) { return {A, false, k}; }
inline Op cd(int k) { return {B, true, k}; }
inline Op c(int k) { return {B, false, k}; }

/// Applies the product (rightmost first). Returns the amplitude; 0 when the
/// state is annihilated. Fermion sign: (-1)^(occupied same-species modes
/// below the target).
inline double apply(std::vector<Op> ops, Occ& o) {
  double amp = 1.0;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
    const auto k = static_cast<std::size_t>(it->k);
    if (it->sp == B) {
      int& w = o.b[k];
      if (it->dag) {
        ++w;
        amp *= std::sqrt(static_cast<double>(w));
      } else {
        if (w == 0) return 0.0;
        amp *= std::sqrt(static_cast<double>(w));
        --w;
      }
      amp /= std::sqrt(static_cast<double>(it->k));
      continue;
    }
    auto& occ = it->sp == F ? o.f : o.a;
    int below = 0;
    for (std::size_t j = 1; j < k; ++j) below += occ[j];
    if (occ[k] == (it->dag ? 1 : 0)) return 0.0;
    occ[k] = it->dag ? 1 : 0;
    if (below % 2) amp = -amp;
  }
  return amp;
}

struct Params {
  double mb = 1, mf = 1, g = 0;
  int cutoff = 64;
  int K = 1;
};

enum Lines : unsigned {
  mass = 1,
  vertex = 2,
  seagull_fb = 4,  // b+ b c+ c only
  seagull_rest = 8,
  fork = 16,
  all = 31,
};

/// H|s> as a map from image to amplitude, restricted to the chosen lines.
inline std::map<FockState, double> apply_h(const FockState& s, const Params& p, unsigned lines = all) {
  std::map<FockState, double> out;
  const int K = p.K, size = 2 * K + 2;
  const Occ base = to_occ(s, size);
  auto term = [&](double coef, std::vector<Op> ops) {
    if (coef == 0.0) return;
    Occ o = base;
    const double amp = apply(std::move(ops), o);
    if (amp != 0.0) out[to_state(o)] += coef * amp;
  };

  if (lines & mass) {
    double h = 0;
    for (int n = 1; n <= K; ++n) {
      const auto in = inertia_sums(n, p.cutoff);
      const auto un = static_cast<std::size_t>(n);
      h += base.b[un] * (p.mb * p.mb + p.g * p.g * static_cast<double>(in.alpha)) / n;
      h += base.f[un] * (p.mf * p.mf + p.g * p.g * static_cast<double>(in.beta)) / n;
      h += base.a[un] * (p.mf * p.mf + p.g * p.g * static_cast<double>(in.gamma)) / n;
    }
    term(h, {});
  }
  const double gv = p.g * p.mf, g2 = p.g * p.g;
  for (int k = 1; k <= K; ++k)
    for (int l = 1; l <= K; ++l)
      for (int m = 1; m <= K; ++m) {
        if (lines & vertex) {
          const double c1 = gv * (bracket(k + l, -m) + bracket(k, l - m));
          term(c1, {bd(k), b(m), cd(l)});
          term(c1, {bd(m), b(k), c(l)});
          term(c1, {dd(k), d(m), cd(l)});
          term(c1, {dd(m), d(k), c(l)});
          const double c2 = gv * (bracket(k - l, m) + bracket(k, -l + m));
          term(c2, {b(k), d(m), cd(l)});
          term(c2, {dd(m), bd(k), c(l)});
        }
        for (int n = 1; n <= K; ++n) {
          const double cs = g2 * (bracket(k - n, l - m) + bracket(k + l, -m - n));
          if (lines & seagull_fb) term(cs, {bd(k), b(m), cd(l), c(n)});
          if (lines & seagull_rest) {
            term(cs, {dd(k), d(m), cd(l), c(n)});
            const double cp = g2 * bracket(l - k, n - m);
            term(cp, {d(k), b(m), cd(l), cd(n)});
            term(cp, {bd(m), dd(k), c(n), c(l)});
          }
          if (lines & fork) {
            const double cf = g2 * bracket(k + l, n - m);
            term(cf, {bd(k), b(m), cd(l), cd(n)});
            term(cf, {bd(m), b(k), c(n), c(l)});
            term(cf, {dd(k), d(m), cd(l), cd(n)});
            term(cf, {dd(m), d(k), c(n), c(l)});
            const double cx = g2 * (bracket(k - n, m + l) + bracket(k + l, m - n));
            term(cx, {bd(k), dd(m), cd(l), c(n)});
            term(cx, {d(m), b(k), cd(n), c(l)});
          }
        }
      }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

/// Free invariant mass K sum w m^2 / n.
inline double free_mass2(const FockState& s, int K, double mb, double mf) {
  double h = 0;
  for (int n : s.fermions) h += mf * mf / n;
  for (int n : s.antifermions) h += mf * mf / n;
  for (const auto& bm : s.bosons) h += bm.w * mb * mb / bm.n;
  return K * h;
}

}  // namespace oracle
