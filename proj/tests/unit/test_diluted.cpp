#include <cmath>
#include <sstream>

#include "doctest.h"
#include "levy/diluted.hpp"
#include "levy/errors.hpp"
#include "levy/exact.hpp"
#include "levy/stats.hpp"

using namespace levy;

TEST_CASE("PVB edge count and weight law") {
  Rng rng(1);
  const int N = 20;
  const double alpha = 1.5, eps = 0.7;
  const double gamma = std::pow(eps, -alpha);
  std::vector<double> counts;
  double over = 0, total = 0;
  for (int r = 0; r < 4000; ++r) {
    auto p = sample_pvb(N, alpha, eps, rng);
    CHECK(p.gamma == doctest::Approx(gamma));
    counts.push_back(static_cast<double>(p.edges.size()));
    for (const auto& e : p.edges) {
      CHECK(e.i < e.j);
      CHECK(std::fabs(e.w) >= eps);
      over += std::fabs(e.w) > 2 * eps;
      total += 1;
    }
  }
  auto ms = mean_stderr(counts);
  CHECK(std::fabs(ms.mean - gamma * N) < 4 * ms.stderr_);
  double p2 = std::pow(2.0, -alpha);
  CHECK(std::fabs(over / total - p2) < 4 * std::sqrt(p2 * (1 - p2) / total));
}

TEST_CASE("PVB multigraph keeps repeated pairs and sums couplings") {
  PvbInstance p;
  p.n_sites = 3;
  p.edges = {{0, 1, 1.0}, {0, 1, -0.25}, {1, 2, 2.0}};
  CHECK(p.multiplicity(0, 1) == 2);
  CHECK(p.multiplicity(0, 2) == 0);
  auto m = p.couplings();
  CHECK(m(0, 1) == doctest::Approx(0.75));
  CHECK(m(2, 1) == doctest::Approx(2.0));
}

TEST_CASE("PVB text format round-trips") {
  Rng rng(2);
  auto p = sample_pvb(12, 1.5, 0.8, rng);
  std::stringstream ss;
  write_pvb_instance(ss, p, 0.4, 99);
  auto q = read_pvb_instance(ss);
  REQUIRE(q.edges.size() == p.edges.size());
  for (std::size_t e = 0; e < p.edges.size(); ++e) {
    CHECK(q.edges[e].i == p.edges[e].i);
    CHECK(q.edges[e].w == p.edges[e].w);
  }
  CHECK(q.gamma == p.gamma);
  std::stringstream bad("levy_instance 3 1.5 1 0\n");
  CHECK_THROWS(read_pvb_instance(bad));
}

TEST_CASE("VB instances and truncation") {
  Rng rng(3);
  auto v = sample_vb(30, 1.5, 1.0, rng);
  for (const auto& e : v.edges) CHECK(std::fabs(e.w) >= 1.0);
  CHECK_THROWS_AS(sample_vb(2, 1.5, 0.1, rng), ConfigError);
  DisorderMatrix m(3);
  m.set(0, 1, 0.2);
  m.set(1, 2, -3.0);
  auto t = truncate_weak(m, 0.5);
  CHECK(t(0, 1) == 0.0);
  CHECK(t(1, 2) == -3.0);
}

TEST_CASE("coupled Levy/PVB draw has the right marginals") {
  Rng rng(4);
  const int N = 10;
  const double alpha = 1.5, eps = 0.6, gamma = 0.5 * std::pow(eps, -alpha);
  std::vector<double> counts, big;
  double agree = 0, present = 0;
  for (int r = 0; r < 4000; ++r) {
    auto d = sample_levy_pvb_coupled(N, alpha, eps, gamma, rng);
    counts.push_back(static_cast<double>(d.pvb.edges.size()));
    for (const auto& e : d.pvb.edges) CHECK(std::fabs(e.w) >= eps);
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        big.push_back(std::fabs(d.levy(i, j)) * std::pow(N, 1 / alpha) > 3.0);
        bool l = std::fabs(d.levy(i, j)) >= eps, p = d.pvb.multiplicity(i, j) > 0;
        present += l || p;
        agree += l == p;
      }
  }
  auto c = mean_stderr(counts);
  CHECK(std::fabs(c.mean - gamma * N) < 4 * c.stderr_);
  auto b = mean_stderr(big);
  CHECK(std::fabs(b.mean - std::pow(3.0, -alpha)) < 4 * b.stderr_);
  CHECK(agree / (present + 1e-300) > 0.0);
}

TEST_CASE("truncation gap report") {
  auto r = truncation_gap(1.5, 1.0, 1.0, 8, 60, 11, 1);
  CHECK(r.pvb_gamma == doctest::Approx(0.5));
  CHECK(r.truncation_bound == doctest::Approx(1.5 / 0.5));
  CHECK(r.gap_truncated == doctest::Approx(r.F_levy - r.F_truncated).epsilon(1e-12));
  CHECK(r.gap_pvb == doctest::Approx(r.F_levy - r.F_pvb).epsilon(1e-12));
  auto again = truncation_gap(1.5, 1.0, 1.0, 8, 60, 11, 3);
  CHECK(again.pvb_values == r.pvb_values);
  CHECK_THROWS_AS(truncation_gap(1.5, 1.0, 1.0, 21, 10, 1), ConfigError);
}

TEST_CASE("superadditivity at beta = 0 is exact and sizes are guarded") {
  auto z = superadditivity_experiment(DilutedModel::levy, 1.5, 0.0, {{3, 4}, {5, 5}}, 3, 1.0, 1);
  for (const auto& r : z) CHECK(std::fabs(r.defect) < 1e-12);
  auto p = superadditivity_experiment(DilutedModel::pvb, 1.5, 0.0, {{4, 4}}, 3, 1.0, 1);
  CHECK(std::fabs(p[0].defect) < 1e-12);
  CHECK(p[0].pvb_bound == 0.0);
  CHECK_THROWS_AS(superadditivity_experiment(DilutedModel::levy, 1.5, 0.1, {{13, 12}}, 2, 1.0, 1), ResourceGuardError);
}
