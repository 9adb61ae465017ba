#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "lfdlcq/errors.hpp"
#include "lfdlcq/observables.hpp"
#include "lfdlcq/spectrum.hpp"
#include "oracles.hpp"

using namespace lfdlcq;

namespace {

Eigen::VectorXd random_unit(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = g(rng);
  return v.normalized();
}

Eigen::VectorXd basis_vector(const Basis& b, const std::string& state) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(b.size()));
  v[static_cast<Eigen::Index>(*b.find(parse_state(state)))] = 1.0;
  return v;
}

ModelParams params(int K, int Q, double mb, double mf, double g) {
  ModelParams p;
  p.K = K;
  p.Q = Q;
  p.m_boson = mb;
  p.m_fermion = mf;
  p.g = g;
  p.cutoff = 256;
  return p;
}

}  // namespace

TEST_CASE("single free boson") {
  const auto b = enumerate_basis(2, 0);
  const auto t = pdf(basis_vector(b, "f:[];a:[];b:[(2,1)]"), b);
  REQUIRE(t.entries.size() == 2);
  CHECK(t.entries[0].x == doctest::Approx(0.5));
  CHECK(t.entries[1].x == doctest::Approx(1.0));
  CHECK(t.entries[1].boson == doctest::Approx(1.0));
  CHECK(t.entries[0].boson == 0.0);
  CHECK(t.entries[0].fermion == 0.0);
  CHECK(t.momentum_sum() == doctest::Approx(2.0));
}

TEST_CASE("equal superposition at K=2") {
  const auto b = enumerate_basis(2, 0);
  const Eigen::VectorXd v =
      (basis_vector(b, "f:[];a:[];b:[(1,2)]") + basis_vector(b, "f:[1];a:[1];b:[]")) / std::sqrt(2.0);
  const auto t = pdf(v, b);
  CHECK(t.entries[0].boson == doctest::Approx(1.0));
  CHECK(t.entries[0].fermion == doctest::Approx(0.5));
  CHECK(t.entries[0].antifermion == doctest::Approx(0.5));
  CHECK(t.momentum_sum() == doctest::Approx(2.0));
  CHECK(t.charge_sum() == doctest::Approx(0.0));
}

TEST_CASE("pdf against the direct expectation") {
  std::mt19937_64 rng(5);
  const auto b = enumerate_basis(9, 1);
  const auto v = random_unit(b.size(), rng);
  const auto t = pdf(v, b);
  for (int n = 1; n <= 9; ++n) {
    double f = 0, a = 0, w = 0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double p = v[static_cast<Eigen::Index>(i)] * v[static_cast<Eigen::Index>(i)];
      const auto o = oracle::to_occ(b[i], 10);
      f += p * o.f[static_cast<std::size_t>(n)];
      a += p * o.a[static_cast<std::size_t>(n)];
      w += p * o.b[static_cast<std::size_t>(n)];
    }
    const auto& e = t.entries[static_cast<std::size_t>(n - 1)];
    CHECK(e.n == n);
    CHECK(e.fermion == doctest::Approx(f).epsilon(1e-13));
    CHECK(e.antifermion == doctest::Approx(a).epsilon(1e-13));
    CHECK(e.boson == doctest::Approx(w).epsilon(1e-13));
  }
  CHECK(t.momentum_sum() == doctest::Approx(9.0).epsilon(1e-12));
}

TEST_CASE("pdf rejects bad input") {
  const auto b = enumerate_basis(4, 0);
  Eigen::VectorXd v = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(b.size()));
  CHECK_THROWS_AS(pdf(v, b), InvalidArgument);
  CHECK_THROWS_AS(pdf(Eigen::VectorXd::Ones(1), b), InvalidArgument);
}

TEST_CASE("sum rules and positivity on eigenvectors") {
  for (int K = 1; K <= 8; ++K)
    for (int Q = -2; Q <= 2; ++Q) {
      const auto b = enumerate_basis(K, Q);
      if (b.empty()) continue;
      const auto m = build_mass_matrix(b, params(K, Q, 1.2, 0.9, 1.1));
      const auto r = lowest_eigenpairs(m, b.size());
      bool ok = true;
      for (const auto& v : r.eigenvectors) {
        const auto t = pdf(v, b);
        ok = ok && std::abs(t.momentum_sum() - K) <= 1e-8 && std::abs(t.charge_sum() - Q) <= 1e-8;
        for (const auto& e : t.entries) ok = ok && e.fermion >= 0 && e.antifermion >= 0 && e.boson >= 0;
      }
      CHECK_MESSAGE(ok, "K=" << K << " Q=" << Q);
    }
}

TEST_CASE("pdf is linear in the probabilities") {
  std::mt19937_64 rng(9);
  const auto b = enumerate_basis(7, 0);
  for (int trial = 0; trial < 5; ++trial) {
    // two vectors on disjoint supports mix without interference
    Eigen::VectorXd u = random_unit(b.size(), rng), w = random_unit(b.size(), rng);
    for (Eigen::Index i = 0; i < u.size(); ++i) (i % 2 ? u : w)[i] = 0;
    u.normalize();
    w.normalize();
    const double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    const auto mix = pdf((std::sqrt(p) * u + std::sqrt(1 - p) * w).eval(), b);
    const auto tu = pdf(u, b), tw = pdf(w, b);
    for (std::size_t n = 0; n < mix.entries.size(); ++n) {
      CHECK(mix.entries[n].boson == doctest::Approx(p * tu.entries[n].boson + (1 - p) * tw.entries[n].boson));
      CHECK(mix.entries[n].fermion == doctest::Approx(p * tu.entries[n].fermion + (1 - p) * tw.entries[n].fermion));
    }
  }
}

TEST_CASE("free invariant mass and its maximum") {
  const FreeMasses m{2.0, 0.7};
  CHECK(invariant_mass_free(parse_state("f:[];a:[];b:[(5,1)]"), 5, m) == doctest::Approx(4.0));
  CHECK(invariant_mass_free(parse_state("f:[1];a:[1];b:[]"), 2, m) == doctest::Approx(4 * 0.49));
  CHECK(qmax2(enumerate_basis(1, 0), m) == doctest::Approx(4.0));

  const FreeMasses free{2.0, 1.0};
  const auto b = enumerate_basis(4, 0);
  double want = 0;
  for (const auto& s : b) want = std::max(want, oracle::free_mass2(s, 4, 2.0, 1.0));
  CHECK(qmax2(b, free) == doctest::Approx(want));
  CHECK(qmax2(b, params(4, 0, 2.0, 1.0, 0.5)) == doctest::Approx(want));
}

TEST_CASE("truncation") {
  const auto b = enumerate_basis(10, 0);
  const auto p = params(10, 0, 1.5, 1.0, 1.3);
  const auto r = lowest_eigenpairs(build_mass_matrix(b, p), 3);
  const auto& v = r.eigenvectors[2];
  const FreeMasses masses = bare_masses(p);

  const auto all = truncate_state(v, b, masses, qmax2(b, masses));
  CHECK(all.kept_fraction == 1.0);
  CHECK(all.kept_states == b.size());
  CHECK((all.vector - v).norm() < 1e-14);

  double lightest = 1e300;
  for (const auto& s : b) lightest = std::min(lightest, invariant_mass_free(s, 10, masses));
  CHECK_THROWS_AS(truncate_state(v, b, masses, 0.5 * lightest), DegenerateTruncation);

  double prev = 0;
  for (double q : {20.0, 40.0, 80.0, 160.0, 320.0, 640.0}) {
    double kept = 0;
    try {
      const auto t = truncate_state(v, b, masses, q);
      kept = t.kept_fraction;
      CHECK(t.vector.norm() == doctest::Approx(1.0));
      const auto table = pdf(t.vector, b);
      CHECK(table.momentum_sum() == doctest::Approx(10.0).epsilon(1e-10));
      CHECK(std::abs(table.charge_sum()) < 1e-10);
    } catch (const DegenerateTruncation&) {
    }
    CHECK(kept >= prev);
    prev = kept;
  }
}
