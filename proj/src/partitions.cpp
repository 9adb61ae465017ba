#include <cmath>
#include <vector>

#include "lfdlcq/errors.hpp"
#include "lfdlcq/fock_basis.hpp"

namespace lfdlcq {

std::uint64_t partition_count(int K) {
  if (K < 0) throw InvalidArgument("partition_count: K must be >= 0");
  std::vector<std::uint64_t> p(static_cast<std::size_t>(K) + 1, 0);
  p[0] = 1;
  for (int n = 1; n <= K; ++n) {
    std::int64_t acc = 0;
    for (int j = 1;; ++j) {
      const int g1 = j * (3 * j - 1) / 2;
      const int g2 = j * (3 * j + 1) / 2;
      if (g1 > n) break;
      const std::int64_t sign = (j % 2 == 1) ? 1 : -1;
      acc += sign * static_cast<std::int64_t>(p[n - g1]);
      if (g2 <= n) acc += sign * static_cast<std::int64_t>(p[n - g2]);
    }
    p[n] = static_cast<std::uint64_t>(acc);
  }
  return p[K];
}

int max_distinct_parts(int K) {
  if (K < 1) throw InvalidArgument("max_distinct_parts: K must be >= 1");
  int I = static_cast<int>(std::floor(std::sqrt(2.0 * K + 0.25) - 0.5));
  // guard the floating floor against round-off near triangular numbers
  while ((I + 1) * (I + 2) / 2 <= K) ++I;
  while (I * (I + 1) / 2 > K) --I;
  return I;
}

namespace {

void boson_rec(int remaining, int max_part, std::vector<BosonMode>& cur,
               std::vector<std::vector<BosonMode>>& out) {
  if (remaining == 0) {
    // built largest part first; store ascending
    out.emplace_back(cur.rbegin(), cur.rend());
    return;
  }
  for (int n = std::min(remaining, max_part); n >= 1; --n) {
    for (int w = remaining / n; w >= 1; --w) {
      cur.push_back({n, w});
      boson_rec(remaining - n * w, n - 1, cur, out);
      cur.pop_back();
    }
  }
}

void distinct_rec(int remaining, int min_part, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (int n = min_part; n <= remaining; ++n) {
    // the next part must leave room for strictly larger parts or nothing
    if (remaining - n != 0 && remaining - n <= n) continue;
    cur.push_back(n);
    distinct_rec(remaining - n, n + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<std::vector<BosonMode>> boson_partitions(int total) {
  std::vector<std::vector<BosonMode>> out;
  if (total < 0) return out;
  std::vector<BosonMode> cur;
  boson_rec(total, total, cur, out);
  return out;
}

std::vector<std::vector<int>> distinct_part_sets(int total) {
  std::vector<std::vector<int>> out;
  if (total < 0) return out;
  std::vector<int> cur;
  distinct_rec(total, 1, cur, out);
  return out;
}

}  // namespace lfdlcq
