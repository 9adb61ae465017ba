#include <cmath>
#include <string>

#include "lfdlcq/encoding.hpp"
#include "lfdlcq/errors.hpp"

namespace lfdlcq {

namespace {

void check_distribution(const std::vector<WeightedState>& distribution, int n, int K) {
  if (n < 1 || n > K) throw InvalidArgument("measure_occupation: mode n must lie in [1, K]");
  if (distribution.empty()) throw InvalidArgument("measure_occupation: empty distribution");
  double total = 0.0;
  for (const auto& ws : distribution) {
    if (ws.probability < 0.0) throw InvalidArgument("measure_occupation: negative probability");
    total += ws.probability;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw InvalidArgument("measure_occupation: probabilities sum to " + std::to_string(total));
}

// the flag t of the cutoff step
bool kept(const FockState& s, int K, const FreeMasses& masses, std::optional<double> qsq) {
  return !qsq || invariant_mass_free(s, K, masses) <= *qsq;
}

}  // namespace

OccupationEstimate measure_occupation(const std::vector<WeightedState>& distribution, int n, int K,
                                      const FreeMasses& masses, std::optional<double> qsq) {
  check_distribution(distribution, n, K);
  double weight = 0.0, sum = 0.0;
  for (const auto& ws : distribution) {
    if (!kept(ws.state, K, masses, qsq)) continue;
    weight += ws.probability;
    sum += ws.probability * total_occupation(ws.state, n);
  }
  if (weight <= 0.0)
    throw DegenerateTruncation("measure_occupation: every state fails the cutoff", 0.0);
  return {sum / weight, weight};
}

OccupationEstimate sample_occupation(const std::vector<WeightedState>& distribution, int n, int K,
                                     const FreeMasses& masses, std::optional<double> qsq,
                                     std::size_t shots, std::mt19937_64& rng) {
  check_distribution(distribution, n, K);
  if (shots == 0) throw InvalidArgument("sample_occupation: shots must be positive");
  std::vector<double> weights;
  weights.reserve(distribution.size());
  for (const auto& ws : distribution) weights.push_back(ws.probability);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());

  std::size_t accepted = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < shots; ++i) {
    const auto& s = distribution[pick(rng)].state;
    if (!kept(s, K, masses, qsq)) continue;
    ++accepted;
    sum += total_occupation(s, n);
  }
  if (accepted == 0)
    throw DegenerateTruncation("sample_occupation: every shot failed the cutoff", 0.0);
  return {sum / static_cast<double>(accepted),
          static_cast<double>(accepted) / static_cast<double>(shots)};
}

}  // namespace lfdlcq
