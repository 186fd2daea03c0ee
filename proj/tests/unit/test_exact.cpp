#include <cmath>

#include "doctest.h"
#include "levy/errors.hpp"
#include "levy/exact.hpp"
#include "levy/heavy_tail.hpp"
#include "oracles.hpp"

using namespace levy;

namespace {

DisorderMatrix draw(int N, std::uint64_t seed, double alpha = 1.5) {
  Rng rng(seed);
  return sample_disorder(HeavyTailSpec::canonical(alpha), N, rng, true);
}

}  // namespace

TEST_CASE("Gray-code partition function matches naive enumeration") {
  for (int N = 1; N <= 12; ++N)
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto m = draw(N, 1000 * N + s);
      for (double beta : {0.0, 0.3, 2.0}) {
        auto t = exact_log_partition(m, beta);
        CHECK(std::fabs(t.log_Z - oracle::log_Z(m, beta)) < 1e-9);
        CHECK(t.log_Z_hat == doctest::Approx(t.log_Z - t.log_Z_bar));
      }
    }
}

TEST_CASE("split Z = Zbar * Zhat against the direct tanh product") {
  for (int N : {3, 6, 9}) {
    auto m = draw(N, 77 + N);
    auto t = exact_log_partition(m, 0.8);
    CHECK(std::fabs(t.log_Z_hat - oracle::log_Z_hat_product(m, 0.8)) < 1e-9);
    double zb = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) zb += std::log(std::cosh(0.8 * m(i, j)));
    CHECK(t.log_Z_bar == doctest::Approx(zb).epsilon(1e-12));
  }
}

TEST_CASE("beta = 0 and large beta limits") {
  auto m = draw(10, 5);
  CHECK(exact_log_partition(m, 0.0).log_Z == doctest::Approx(10 * std::log(2.0)).epsilon(1e-14));
  auto g = ground_state(m);
  CHECK(g.energy == doctest::Approx(oracle::ground_energy(m)).epsilon(1e-12));
  CHECK(hamiltonian(m, g.sigma, 1.0) == doctest::Approx(-g.energy).epsilon(1e-12));
  // ln Z / β -> -E_min, with the degeneracy 2 of the flip symmetry.
  double b = 200.0;
  CHECK((exact_log_partition(m, b).log_Z - std::log(2.0)) / b == doctest::Approx(-g.energy).epsilon(1e-6));
}

TEST_CASE("results do not depend on the worker count") {
  auto m = draw(16, 3);
  auto a = exact_log_partition(m, 0.7, 1), b = exact_log_partition(m, 0.7, 3);
  CHECK(a.log_Z == b.log_Z);
  auto ca = pair_correlations(m, 0.7, 1), cb = pair_correlations(m, 0.7, 4);
  CHECK(ca == cb);
}

TEST_CASE("correlations and overlap moments from explicit replicas") {
  for (int N : {4, 6, 7}) {
    auto m = draw(N, 40 + N);
    const double beta = 0.9;
    auto c = pair_correlations(m, beta);
    auto o = oracle::correlations(m, beta);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(std::fabs(c[i] - o[i]) < 1e-12);
    CHECK(site_overlap_moment(c, N, 2) == doctest::Approx(oracle::replica_R2_squared(m, beta)).epsilon(1e-12));
    CHECK(site_overlap_moment(m, beta, 2) == doctest::Approx(oracle::replica_R2_squared(m, beta)).epsilon(1e-12));
    for (double K : {0.3, 1.0, 100.0}) {
      double q = oracle::replica_Q(m, beta, K);
      CHECK(bond_overlap_mean(c, m, K) == doctest::Approx(q).epsilon(1e-12));
      CHECK(bond_overlap_stats(m, beta, K).mean == doctest::Approx(q).epsilon(1e-12));
    }
  }
  auto m = draw(5, 1);
  CHECK(bond_overlap_stats(m, 1.0, 1e9).strong_edges == 0);
  CHECK(bond_overlap_stats(m, 1.0, 1e9).mean == 0.0);
}

TEST_CASE("Gibbs alignment against enumeration") {
  auto m = draw(8, 12, 0.5);
  const double beta = 1.0;
  auto w = oracle::gibbs_weights(m, beta);
  for (int R : {1, 2, 3}) {
    double p = 0.0;
    for (unsigned s = 0; s < w.size(); ++s) {
      bool ok = true;
      for (int r = 0; r < R; ++r) {
        auto e = m.edge(m.by_rank()[r]);
        ok &= m(e.i, e.j) * oracle::spin_of(s, e.i) * oracle::spin_of(s, e.j) > 0;
      }
      if (ok) p += w[s];
    }
    CHECK(gibbs_alignment(m, beta, R) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(gibbs_alignment(m, 0.0, 1) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("resource guards") {
  DisorderMatrix big(kMaxLogPartitionN + 1);
  CHECK_THROWS_AS(exact_log_partition(big, 1.0), ResourceGuardError);
  DisorderMatrix mid(kMaxCorrelationN + 1);
  CHECK_THROWS_AS(pair_correlations(mid, 1.0), ResourceGuardError);
  DisorderMatrix four(kMaxFourPointN + 1);
  CHECK_THROWS_AS(bond_overlap_stats(four, 1.0, 1.0), ResourceGuardError);
  DisorderMatrix unranked(5);
  CHECK_THROWS_AS(gibbs_alignment(unranked, 1.0, 1), ConfigError);
}

TEST_CASE("spin configurations") {
  auto s = SpinConfig::from_spins({1, -1, -1, 1});
  CHECK(s.n == 4);
  CHECK(s.spin(1) == -1);
  CHECK(s.spin(3) == 1);
  CHECK(s.flipped().spin(0) == -1);
  CHECK(s.flipped().flipped().bits == s.bits);
}
