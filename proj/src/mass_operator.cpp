#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <string>

#include "lfdlcq/errors.hpp"
#include "lfdlcq/hamiltonian.hpp"

namespace lfdlcq {

void ModelParams::validate() const {
  if (K < 1) throw InvalidArgument("ModelParams: K must be >= 1");
  if (cutoff < K)
    throw InvalidArgument("ModelParams: cutoff (" + std::to_string(cutoff) + ") must be >= K (" +
                          std::to_string(K) + ")");
  if (!std::isfinite(m_boson) || !std::isfinite(m_fermion) || !std::isfinite(g))
    throw InvalidArgument("ModelParams: masses and coupling must be finite");
}

namespace {

enum class Species { fermion, antifermion, boson };

/// One ladder operator; `c` bosons carry the 1/sqrt(n) normalization.
struct Ladder {
  Species species;
  bool create;
  int mode;
};

constexpr Ladder bd(int k) { return {Species::fermion, true, k}; }
constexpr Ladder b(int k) { return {Species::fermion, false, k}; }
constexpr Ladder dd(int k) { return {Species::antifermion, true, k}; }
constexpr Ladder d(int k) { return {Species::antifermion, false, k}; }
constexpr Ladder cd(int k) { return {Species::boson, true, k}; }
constexpr Ladder c(int k) { return {Species::boson, false, k}; }

/// Fermionic ladder on a sorted mode list. Returns the sign picked up from
/// occupied modes below `k`, or 0 when the action vanishes.
double fermion_ladder(std::vector<int>& modes, bool create, int k) {
  auto it = std::lower_bound(modes.begin(), modes.end(), k);
  const bool occupied = it != modes.end() && *it == k;
  const double sign = ((it - modes.begin()) % 2 == 0) ? 1.0 : -1.0;
  if (create) {
    if (occupied) return 0.0;
    modes.insert(it, k);
  } else {
    if (!occupied) return 0.0;
    modes.erase(it);
  }
  return sign;
}

/// Bosonic ladder. Multiplies the occupancy factor into `num` and the mode
/// into `den` so the amplitude sqrt(num / den) does not depend on the order
/// of commuting operators. Returns false when the action vanishes.
bool boson_ladder(std::vector<BosonMode>& modes, bool create, int n, std::int64_t& num,
                  std::int64_t& den) {
  auto it = std::lower_bound(modes.begin(), modes.end(), n,
                             [](const BosonMode& m, int v) { return m.n < v; });
  const bool occupied = it != modes.end() && it->n == n;
  den *= n;
  if (create) {
    if (occupied) {
      num *= ++it->w;
    } else {
      modes.insert(it, BosonMode{n, 1});
    }
    return true;
  }
  if (!occupied) return false;
  num *= it->w;
  if (--it->w == 0) modes.erase(it);
  return true;
}

/// Applies `coef * ops` (written left to right, acting right to left) and
/// appends the image when nonvanishing.
void emit(const FockState& state, double coef, std::initializer_list<Ladder> ops,
          std::vector<Image>& out) {
  if (coef == 0.0) return;
  FockState s = state;
  double sign = 1.0;
  std::int64_t num = 1, den = 1;
  for (auto it = std::rbegin(ops); it != std::rend(ops); ++it) {
    switch (it->species) {
      case Species::fermion: sign *= fermion_ladder(s.fermions, it->create, it->mode); break;
      case Species::antifermion: sign *= fermion_ladder(s.antifermions, it->create, it->mode); break;
      case Species::boson:
        if (!boson_ladder(s.bosons, it->create, it->mode, num, den)) sign = 0.0;
        break;
    }
    if (sign == 0.0) return;
  }
  const double amp = coef * sign * std::sqrt(static_cast<double>(num) / static_cast<double>(den));
  out.push_back({std::move(s), amp});
}

void merge_images(std::vector<Image>& images) {
  std::sort(images.begin(), images.end(),
            [](const Image& a, const Image& b) { return a.state < b.state; });
  std::vector<Image> merged;
  merged.reserve(images.size());
  for (auto& im : images) {
    if (!merged.empty() && merged.back().state == im.state)
      merged.back().amplitude += im.amplitude;
    else
      merged.push_back(std::move(im));
  }
  std::erase_if(merged, [](const Image& im) { return im.amplitude == 0.0; });
  images = std::move(merged);
}

std::vector<int> boson_modes(const FockState& s) {
  std::vector<int> v;
  v.reserve(s.bosons.size());
  for (const auto& bm : s.bosons) v.push_back(bm.n);
  return v;
}

// Vertex lines 1 and 2 share their structure: (x+_k x_m c+_l + x+_m x_k c_l).
void vertex_same_species(const FockState& s, const std::vector<int>& occupied, bool anti,
                         const std::vector<int>& bosons, double pre, std::vector<Image>& out) {
  auto create = [anti](int k) { return anti ? dd(k) : bd(k); };
  auto destroy = [anti](int k) { return anti ? d(k) : b(k); };
  auto coef = [](int k, int l, int m) { return bracket(k + l, -m) + bracket(k, l - m); };
  for (int m : occupied)
    for (int k = 1; k < m; ++k) {
      const int l = m - k;
      emit(s, pre * coef(k, l, m), {create(k), destroy(m), cd(l)}, out);
    }
  for (int k : occupied)
    for (int l : bosons) {
      const int m = k + l;
      emit(s, pre * coef(k, l, m), {create(m), destroy(k), c(l)}, out);
    }
}

void seagull_same_species(const FockState& s, const std::vector<int>& occupied, bool anti,
                          const std::vector<int>& bosons, double pre, std::vector<Image>& out) {
  auto create = [anti](int k) { return anti ? dd(k) : bd(k); };
  auto destroy = [anti](int k) { return anti ? d(k) : b(k); };
  for (int m : occupied)
    for (int n : bosons)
      for (int k = 1; k < m + n; ++k) {
        const int l = m + n - k;
        const double coef = bracket(k - n, l - m) + bracket(k + l, -m - n);
        emit(s, pre * coef, {create(k), destroy(m), cd(l), c(n)}, out);
      }
}

void fork_same_species(const FockState& s, const std::vector<int>& occupied, bool anti,
                       const std::vector<int>& bosons, double pre, std::vector<Image>& out) {
  auto create = [anti](int k) { return anti ? dd(k) : bd(k); };
  auto destroy = [anti](int k) { return anti ? d(k) : b(k); };
  for (int m : occupied)
    for (int k = 1; k + 1 < m; ++k)
      for (int l = 1; k + l < m; ++l) {
        const int n = m - k - l;
        emit(s, pre * bracket(k + l, n - m), {create(k), destroy(m), cd(l), cd(n)}, out);
      }
  for (int k : occupied)
    for (int l : bosons)
      for (int n : bosons) {
        const int m = k + l + n;
        emit(s, pre * bracket(k + l, n - m), {create(m), destroy(k), c(n), c(l)}, out);
      }
}

}  // namespace

MassOperator::MassOperator(const ModelParams& params) : params_(params) {
  params_.validate();
  inertia_.resize(static_cast<std::size_t>(params_.K) + 1);
  for (int n = 1; n <= params_.K; ++n)
    inertia_[static_cast<std::size_t>(n)] = params_.inertias == InertiaForm::closed_form
                                                ? self_induced_inertias(n, params_.cutoff)
                                                : inertia_bracket_sums(n, params_.cutoff);
}

double MassOperator::mass_term(const FockState& s) const {
  const double mb2 = params_.m_boson * params_.m_boson;
  const double mf2 = params_.m_fermion * params_.m_fermion;
  const double g2 = params_.g * params_.g;
  double h = 0.0;
  for (const auto& bm : s.bosons) h += bm.w * (mb2 + g2 * inertias(bm.n).alpha) / bm.n;
  for (int n : s.fermions) h += (mf2 + g2 * inertias(n).beta) / n;
  for (int n : s.antifermions) h += (mf2 + g2 * inertias(n).gamma) / n;
  return h;
}

void MassOperator::apply_seagull_fermion_boson(const FockState& s, std::vector<Image>& out) const {
  const double g2 = params_.g * params_.g;
  seagull_same_species(s, s.fermions, false, boson_modes(s), g2, out);
}

void MassOperator::apply_family(TermFamily family, const FockState& s,
                                std::vector<Image>& out) const {
  const double g = params_.g;
  const double g2 = g * g;
  const auto bosons = boson_modes(s);
  switch (family) {
    case TermFamily::mass:
      out.push_back({s, mass_term(s)});
      break;

    case TermFamily::vertex: {
      const double pre = g * params_.m_fermion;
      if (pre == 0.0) break;
      vertex_same_species(s, s.fermions, false, bosons, pre, out);
      vertex_same_species(s, s.antifermions, true, bosons, pre, out);
      auto coef = [](int k, int l, int m) { return bracket(k - l, m) + bracket(k, -l + m); };
      // b_k d_m c+_l
      for (int k : s.fermions)
        for (int m : s.antifermions) {
          const int l = k + m;
          emit(s, pre * coef(k, l, m), {b(k), d(m), cd(l)}, out);
        }
      // d+_m b+_k c_l
      for (int l : bosons)
        for (int k = 1; k < l; ++k) {
          const int m = l - k;
          emit(s, pre * coef(k, l, m), {dd(m), bd(k), c(l)}, out);
        }
      break;
    }

    case TermFamily::seagull: {
      if (g2 == 0.0) break;
      seagull_same_species(s, s.fermions, false, bosons, g2, out);
      seagull_same_species(s, s.antifermions, true, bosons, g2, out);
      // d_k b_m c+_l c+_n
      for (int k : s.antifermions)
        for (int m : s.fermions)
          for (int l = 1; l < k + m; ++l) {
            const int n = k + m - l;
            emit(s, g2 * bracket(l - k, n - m), {d(k), b(m), cd(l), cd(n)}, out);
          }
      // b+_m d+_k c_n c_l
      for (int l : bosons)
        for (int n : bosons)
          for (int k = 1; k < l + n; ++k) {
            const int m = l + n - k;
            emit(s, g2 * bracket(l - k, n - m), {bd(m), dd(k), c(n), c(l)}, out);
          }
      break;
    }

    case TermFamily::fork: {
      if (g2 == 0.0) break;
      fork_same_species(s, s.fermions, false, bosons, g2, out);
      fork_same_species(s, s.antifermions, true, bosons, g2, out);
      auto coef = [](int k, int l, int m, int n) {
        return bracket(k - n, m + l) + bracket(k + l, m - n);
      };
      // b+_k d+_m c+_l c_n
      for (int n : bosons)
        for (int k = 1; k + 1 < n; ++k)
          for (int l = 1; k + l < n; ++l) {
            const int m = n - k - l;
            emit(s, g2 * coef(k, l, m, n), {bd(k), dd(m), cd(l), c(n)}, out);
          }
      // d_m b_k c+_n c_l
      for (int k : s.fermions)
        for (int m : s.antifermions)
          for (int l : bosons) {
            const int n = k + m + l;
            emit(s, g2 * coef(k, l, m, n), {d(m), b(k), cd(n), c(l)}, out);
          }
      break;
    }
  }
}

std::vector<Image> MassOperator::apply(const FockState& state) const {
  std::vector<Image> out;
  out.reserve(64);
  for (auto family : {TermFamily::mass, TermFamily::vertex, TermFamily::seagull, TermFamily::fork})
    apply_family(family, state, out);
  merge_images(out);
  return out;
}

std::vector<Image> apply_hamiltonian(const FockState& state, const ModelParams& params) {
  return MassOperator(params).apply(state);
}

}  // namespace lfdlcq
