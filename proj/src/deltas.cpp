#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "lfdlcq/encoding.hpp"
#include "lfdlcq/errors.hpp"

namespace lfdlcq {

int Delta::used_slots() const {
  return static_cast<int>(std::count_if(slots.begin(), slots.end(),
                                        [](const DeltaSlot& s) { return s.k != 0; }));
}

namespace {

int type_code(Particle p) { return static_cast<int>(p); }

bool slot_order(const DeltaSlot& a, const DeltaSlot& b) {
  if (a.raise != b.raise) return a.raise;
  if (a.type != b.type) return type_code(a.type) < type_code(b.type);
  return a.k < b.k;
}

char type_letter(Particle p) {
  switch (p) {
    case Particle::fermion: return 'f';
    case Particle::antifermion: return 'a';
    case Particle::boson: return 'b';
  }
  return '?';
}

}  // namespace

bool is_valid_delta(const Delta& d) {
  const int used = d.used_slots();
  if (used == 0) return true;
  if (used != 3 && used != 4) return false;
  for (int i = 0; i < 4; ++i) {
    const auto& s = d.slots[static_cast<std::size_t>(i)];
    if (i >= used && s.k != 0) return false;  // unused slots trail
    if (i < used && s.k < 1) return false;
  }
  if (!d.slots[0].raise || d.slots[static_cast<std::size_t>(used - 1)].raise) return false;
  for (int i = 0; i + 1 < used; ++i)
    if (slot_order(d.slots[static_cast<std::size_t>(i + 1)], d.slots[static_cast<std::size_t>(i)]))
      return false;

  int bosons = 0, up = 0, down = 0;
  for (int i = 0; i < used; ++i) {
    const auto& s = d.slots[static_cast<std::size_t>(i)];
    if (s.type == Particle::boson) ++bosons;
    (s.raise ? up : down) += s.k;
  }
  if (bosons != used - 2) return false;
  // Pauli: a fermionic mode appears at most once per direction
  for (int i = 0; i + 1 < used; ++i) {
    const auto& a = d.slots[static_cast<std::size_t>(i)];
    const auto& b = d.slots[static_cast<std::size_t>(i + 1)];
    if (a.type != Particle::boson && a == b) return false;
  }
  return up == down;
}

std::string to_string(const Delta& d) {
  if (d.used_slots() == 0) return "[]";
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (const auto& s : d.slots) {
    if (s.k == 0) continue;
    if (!first) os << ',';
    first = false;
    os << type_letter(s.type) << s.k << (s.raise ? '+' : '-');
  }
  os << ']';
  return os.str();
}

std::pair<int, int> tuple_from_index(std::int64_t n) {
  if (n < 1) throw InvalidArgument("tuple_from_index: index must be >= 1");
  auto k = static_cast<std::int64_t>((3.0 + std::sqrt(8.0 * static_cast<double>(n) - 7.0)) / 2.0);
  // guard the floating-point floor against rounding at large n
  auto first = [](std::int64_t kk) { return (kk - 1) * (kk - 2) / 2 + 1; };
  while (k > 2 && first(k) > n) --k;
  while (first(k + 1) <= n) ++k;
  const std::int64_t l = n - (k - 1) * (k - 2) / 2;
  return {static_cast<int>(k), static_cast<int>(l)};
}

std::int64_t index_from_tuple(int k, int l) {
  if (l < 1 || k <= l) throw InvalidArgument("index_from_tuple: need k > l >= 1");
  return static_cast<std::int64_t>(k - 1) * (k - 2) / 2 + l;
}

namespace {

using Slot = DeltaSlot;
constexpr auto F = Particle::fermion;
constexpr auto A = Particle::antifermion;
constexpr auto B = Particle::boson;

Slot up(Particle t, int k) { return {k, true, t}; }
Slot down(Particle t, int k) { return {k, false, t}; }

class Collector {
 public:
  explicit Collector(TermFamily family) : family_(family) {}

  void add(std::initializer_list<Slot> slots, double coefficient) {
    Delta d;
    d.family = family_;
    std::vector<Slot> v(slots);
    std::sort(v.begin(), v.end(), slot_order);
    for (std::size_t i = 0; i < v.size(); ++i) d.slots[i] = v[i];
    d.coefficient = coefficient;
    auto [it, inserted] = where_.try_emplace(d.slots, out_.size());
    if (inserted) {
      out_.push_back(d);
    } else {
      auto& prev = out_[it->second];
      prev.coefficient += coefficient;
      ++prev.multiplicity;
    }
  }

  void flush_into(std::vector<Delta>& all) {
    for (auto& d : out_)
      if (std::abs(d.coefficient) > 1e-12) all.push_back(d);
  }

 private:
  TermFamily family_;
  std::vector<Delta> out_;
  std::map<std::array<Slot, 4>, std::size_t> where_;
};

/// Calls f(T, s) over pairs T > s >= 1 with T <= K in pair-index order.
template <class Fn>
void for_pairs(int K, Fn f) {
  for (std::int64_t n = 1;; ++n) {
    const auto [T, s] = tuple_from_index(n);
    if (T > K) break;
    f(T, s);
  }
}

}  // namespace

std::vector<Delta> enumerate_deltas(int K) {
  if (K < 1) throw InvalidArgument("enumerate_deltas: K must be >= 1");
  std::vector<Delta> all;
  all.push_back(Delta{});  // diagonal

  Collector vertex(TermFamily::vertex);
  for (Particle x : {F, A}) {
    // x+_k x_m c+_l and its conjugate
    for_pairs(K, [&](int m, int k) {
      const int l = m - k;
      vertex.add({up(x, k), up(B, l), down(x, m)}, bracket(k + l, -m) + bracket(k, l - m));
    });
    for_pairs(K, [&](int m, int k) {
      const int l = m - k;
      vertex.add({up(x, m), down(x, k), down(B, l)}, bracket(k + l, -m) + bracket(k, l - m));
    });
  }
  // b_k d_m c+_l and d+_m b+_k c_l
  for_pairs(K, [&](int l, int k) {
    const int m = l - k;
    vertex.add({up(B, l), down(F, k), down(A, m)}, bracket(k - l, m) + bracket(k, -l + m));
  });
  for_pairs(K, [&](int l, int k) {
    const int m = l - k;
    vertex.add({up(F, k), up(A, m), down(B, l)}, bracket(k - l, m) + bracket(k, -l + m));
  });
  vertex.flush_into(all);

  Collector seagull(TermFamily::seagull);
  for (Particle x : {F, A}) {
    // x+_k x_m c+_l c_n with k + l = m + n; k = m is diagonal
    for_pairs(K, [&](int T, int k) {
      const int l = T - k;
      for (int m = 1; m < T; ++m) {
        if (m == k) continue;
        const int n = T - m;
        seagull.add({up(x, k), up(B, l), down(x, m), down(B, n)},
                    bracket(k - n, l - m) + bracket(k + l, -m - n));
      }
    });
  }
  // d_k b_m c+_l c+_n
  for_pairs(K, [&](int T, int l) {
    const int n = T - l;
    for (int k = 1; k < T; ++k) {
      const int m = T - k;
      seagull.add({up(B, l), up(B, n), down(F, m), down(A, k)}, bracket(l - k, n - m));
    }
  });
  // b+_m d+_k c_n c_l
  for_pairs(K, [&](int T, int l) {
    const int n = T - l;
    for (int k = 1; k < T; ++k) {
      const int m = T - k;
      seagull.add({up(F, m), up(A, k), down(B, l), down(B, n)}, bracket(l - k, n - m));
    }
  });
  seagull.flush_into(all);

  Collector fork(TermFamily::fork);
  for (Particle x : {F, A}) {
    // x+_k x_m c+_l c+_n with m = k + l + n, and its conjugate
    for_pairs(K, [&](int m, int k) {
      for (int l = 1; k + l < m; ++l) {
        const int n = m - k - l;
        fork.add({up(x, k), up(B, l), up(B, n), down(x, m)}, bracket(k + l, n - m));
      }
    });
    for_pairs(K, [&](int m, int k) {
      for (int l = 1; k + l < m; ++l) {
        const int n = m - k - l;
        fork.add({up(x, m), down(x, k), down(B, l), down(B, n)}, bracket(k + l, n - m));
      }
    });
  }
  auto fork_coef = [](int k, int l, int m, int n) {
    return bracket(k - n, m + l) + bracket(k + l, m - n);
  };
  // b+_k d+_m c+_l c_n
  for_pairs(K, [&](int n, int k) {
    for (int l = 1; k + l < n; ++l) {
      const int m = n - k - l;
      fork.add({up(F, k), up(A, m), up(B, l), down(B, n)}, fork_coef(k, l, m, n));
    }
  });
  // d_m b_k c+_n c_l
  for_pairs(K, [&](int n, int k) {
    for (int l = 1; k + l < n; ++l) {
      const int m = n - k - l;
      fork.add({up(B, n), down(F, k), down(A, m), down(B, l)}, fork_coef(k, l, m, n));
    }
  });
  fork.flush_into(all);
  return all;
}

std::optional<FockState> apply_delta(const FockState& state, const Delta& d) {
  FockState out = state;
  std::map<int, int> boson_change;
  for (const auto& s : d.slots) {
    if (s.k == 0) continue;
    switch (s.type) {
      case Particle::fermion:
      case Particle::antifermion: {
        auto& list = s.type == Particle::fermion ? out.fermions : out.antifermions;
        const bool occupied = s.type == Particle::fermion ? has_fermion(state, s.k)
                                                          : has_antifermion(state, s.k);
        if (s.raise == occupied) return std::nullopt;
        if (s.raise)
          list.insert(std::lower_bound(list.begin(), list.end(), s.k), s.k);
        else
          list.erase(std::lower_bound(list.begin(), list.end(), s.k));
        break;
      }
      case Particle::boson:
        boson_change[s.k] += s.raise ? 1 : -1;
        break;
    }
  }
  for (const auto& [n, dw] : boson_change) {
    auto it = std::lower_bound(out.bosons.begin(), out.bosons.end(), n,
                               [](const BosonMode& b, int v) { return b.n < v; });
    const int w = (it != out.bosons.end() && it->n == n) ? it->w : 0;
    if (w + dw < 0) return std::nullopt;
    if (w == 0) {
      if (dw > 0) out.bosons.insert(it, BosonMode{n, dw});
    } else if (w + dw == 0) {
      out.bosons.erase(it);
    } else {
      it->w = w + dw;
    }
  }
  return out;
}

OracleReport check_delta_oracle(const ModelParams& params, std::size_t max_examples) {
  params.validate();
  OracleReport r;
  r.K = params.K;
  const auto deltas = enumerate_deltas(params.K);
  r.deltas = deltas.size();
  r.invalid_deltas = static_cast<std::size_t>(
      std::count_if(deltas.begin(), deltas.end(), [](const Delta& d) { return !is_valid_delta(d); }));
  const MassOperator h(params);
  const auto basis = enumerate_basis(params.K);
  r.states = basis.size();
  for (const auto& s : basis) {
    std::set<FockState> via_delta{s}, via_h{s};
    for (const auto& d : deltas)
      if (auto t = apply_delta(s, d)) via_delta.insert(std::move(*t));
    for (auto& im : h.apply(s)) via_h.insert(std::move(im.state));
    if (via_delta == via_h) continue;
    if (r.counterexamples.size() < max_examples)
      r.counterexamples.push_back(to_string(s) + " (descriptors reach " +
                                  std::to_string(via_delta.size()) + ", H reaches " +
                                  std::to_string(via_h.size()) + ")");
    ++r.mismatches;
  }
  return r;
}

}  // namespace lfdlcq
