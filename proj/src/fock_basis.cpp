#include "lfdlcq/fock_basis.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "lfdlcq/errors.hpp"

namespace lfdlcq {

int charge(const FockState& s) {
  return static_cast<int>(s.fermions.size()) - static_cast<int>(s.antifermions.size());
}

int momentum(const FockState& s) {
  int total = std::accumulate(s.fermions.begin(), s.fermions.end(), 0);
  total = std::accumulate(s.antifermions.begin(), s.antifermions.end(), total);
  for (const auto& b : s.bosons) total += b.n * b.w;
  return total;
}

int boson_occupancy(const FockState& s, int n) {
  auto it = std::lower_bound(s.bosons.begin(), s.bosons.end(), n,
                             [](const BosonMode& b, int v) { return b.n < v; });
  return (it != s.bosons.end() && it->n == n) ? it->w : 0;
}

bool has_fermion(const FockState& s, int n) {
  return std::binary_search(s.fermions.begin(), s.fermions.end(), n);
}

bool has_antifermion(const FockState& s, int n) {
  return std::binary_search(s.antifermions.begin(), s.antifermions.end(), n);
}

bool is_angel_state(const FockState& s) {
  return s.fermions.empty() && s.antifermions.empty() && s.bosons.size() == 1 &&
         s.bosons.front().n == 1;
}

bool is_well_formed(const FockState& s, int K) {
  auto strictly_increasing_in_range = [K](const std::vector<int>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 1 || v[i] > K) return false;
      if (i > 0 && v[i] <= v[i - 1]) return false;
    }
    return true;
  };
  if (!strictly_increasing_in_range(s.fermions)) return false;
  if (!strictly_increasing_in_range(s.antifermions)) return false;
  for (std::size_t i = 0; i < s.bosons.size(); ++i) {
    const auto& b = s.bosons[i];
    if (b.n < 1 || b.n > K || b.w < 1 || b.w > K / b.n) return false;
    if (i > 0 && b.n <= s.bosons[i - 1].n) return false;
  }
  return momentum(s) == K;
}

bool canonical_less(const FockState& a, const FockState& b) {
  const int qa = charge(a);
  const int qb = charge(b);
  if (qa != qb) return qa < qb;
  return a < b;
}

std::string to_string(const FockState& s) {
  std::ostringstream os;
  auto list = [&os](const std::vector<int>& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
  };
  os << "f:";
  list(s.fermions);
  os << ";a:";
  list(s.antifermions);
  os << ";b:[";
  for (std::size_t i = 0; i < s.bosons.size(); ++i)
    os << (i ? "," : "") << '(' << s.bosons[i].n << ',' << s.bosons[i].w << ')';
  os << ']';
  return os.str();
}

namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view t) : t_(t) {}

  void expect(std::string_view lit) {
    skip_ws();
    if (t_.substr(pos_, lit.size()) != lit)
      throw InvalidArgument("parse_state: expected '" + std::string(lit) + "' at offset " +
                            std::to_string(pos_));
    pos_ += lit.size();
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < t_.size() && t_[pos_] == c;
  }
  int integer() {
    skip_ws();
    int v = 0;
    auto [ptr, ec] = std::from_chars(t_.data() + pos_, t_.data() + t_.size(), v);
    if (ec != std::errc())
      throw InvalidArgument("parse_state: expected integer at offset " + std::to_string(pos_));
    pos_ = static_cast<std::size_t>(ptr - t_.data());
    return v;
  }
  bool done() {
    skip_ws();
    return pos_ == t_.size();
  }

 private:
  void skip_ws() {
    while (pos_ < t_.size() && (t_[pos_] == ' ' || t_[pos_] == '\t')) ++pos_;
  }
  std::string_view t_;
  std::size_t pos_ = 0;
};

std::vector<int> parse_list(Cursor& c) {
  std::vector<int> v;
  c.expect("[");
  if (!c.peek(']')) {
    v.push_back(c.integer());
    while (c.peek(',')) {
      c.expect(",");
      v.push_back(c.integer());
    }
  }
  c.expect("]");
  return v;
}

}  // namespace

FockState parse_state(std::string_view text) {
  Cursor c(text);
  FockState s;
  c.expect("f:");
  s.fermions = parse_list(c);
  c.expect(";a:");
  s.antifermions = parse_list(c);
  c.expect(";b:[");
  if (!c.peek(']')) {
    do {
      if (c.peek(',')) c.expect(",");
      c.expect("(");
      BosonMode b;
      b.n = c.integer();
      c.expect(",");
      b.w = c.integer();
      c.expect(")");
      s.bosons.push_back(b);
    } while (c.peek(','));
  }
  c.expect("]");
  if (!c.done()) throw InvalidArgument("parse_state: trailing characters");
  auto strictly_increasing = [](const std::vector<int>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] < 1 || (i > 0 && v[i] <= v[i - 1])) return false;
    return true;
  };
  bool ok = strictly_increasing(s.fermions) && strictly_increasing(s.antifermions);
  for (std::size_t i = 0; i < s.bosons.size(); ++i)
    ok = ok && s.bosons[i].n >= 1 && s.bosons[i].w >= 1 && (i == 0 || s.bosons[i].n > s.bosons[i - 1].n);
  if (!ok)
    throw InvalidArgument("parse_state: modes must be positive and strictly increasing, occupancies >= 1");
  return s;
}

std::size_t FockStateHash::operator()(const FockState& s) const noexcept {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
  for (int n : s.fermions) mix(static_cast<std::size_t>(n));
  mix(0xf1);
  for (int n : s.antifermions) mix(static_cast<std::size_t>(n));
  mix(0xa2);
  for (const auto& b : s.bosons) mix(static_cast<std::size_t>(b.n) * 1315423911u + b.w);
  return h;
}

Basis::Basis(int K, std::optional<int> Q, std::vector<FockState> states)
    : K_(K), Q_(Q), states_(std::move(states)) {
  index_.reserve(states_.size());
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!index_.emplace(states_[i], i).second)
      throw InvalidArgument("Basis: duplicate state " + to_string(states_[i]));
  }
}

std::optional<std::size_t> Basis::find(const FockState& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Basis enumerate_basis(int K, std::optional<int> Q) {
  if (K < 1) throw InvalidArgument("enumerate_basis: K must be >= 1, got " + std::to_string(K));

  // distinct-part sets for every sub-budget, shared by both fermion species
  std::vector<std::vector<std::vector<int>>> distinct(static_cast<std::size_t>(K) + 1);
  std::vector<std::vector<std::vector<BosonMode>>> bosonic(static_cast<std::size_t>(K) + 1);
  for (int k = 0; k <= K; ++k) {
    distinct[k] = distinct_part_sets(k);
    bosonic[k] = boson_partitions(k);
  }

  std::vector<FockState> states;
  for (int kf = 0; kf <= K; ++kf) {
    for (int ka = 0; kf + ka <= K; ++ka) {
      const int kb = K - kf - ka;
      for (const auto& f : distinct[kf]) {
        for (const auto& a : distinct[ka]) {
          if (Q && static_cast<int>(f.size()) - static_cast<int>(a.size()) != *Q) continue;
          for (const auto& b : bosonic[kb]) states.push_back(FockState{f, a, b});
        }
      }
    }
  }
  std::sort(states.begin(), states.end(), canonical_less);
  return Basis(K, Q, std::move(states));
}

}  // namespace lfdlcq
