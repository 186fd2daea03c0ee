#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "levy/errors.hpp"
#include "levy/stats.hpp"

using namespace levy;

TEST_CASE("mean and standard error") {
  auto m = mean_stderr({1, 2, 3, 4});
  CHECK(m.mean == 2.5);
  CHECK(m.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(m.n == 4);
}

TEST_CASE("KS: identical samples, shifted samples, ties") {
  Rng rng(1);
  std::vector<double> a(300), b(300);
  for (auto& x : a) x = rng.normal();
  for (auto& x : b) x = rng.normal() + 1.0;
  auto same = ks_two_sample({a, "a"}, {a, "a"}, rng, 500);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  auto shift = ks_two_sample({a, "a"}, {b, "b"}, rng, 500);
  CHECK(shift.p_value == doctest::Approx(1.0 / 501));
  std::vector<double> t1 = {0, 0, 0, 1, 1}, t2 = {0, 1, 1, 1, 1};
  auto ties = ks_two_sample({t1, "t"}, {t2, "u"}, rng, 200);
  CHECK(ties.statistic == doctest::Approx(0.4));
  CHECK_THROWS_AS(ks_two_sample({{}, "e"}, {a, "a"}, rng, 10), ConfigError);
}

TEST_CASE("KS p-values are calibrated under the null") {
  Rng rng(2);
  int small = 0;
  for (int t = 0; t < 200; ++t) {
    std::vector<double> a(60), b(80);
    for (auto& x : a) x = rng.exponential();
    for (auto& x : b) x = rng.exponential();
    small += ks_two_sample({a, "a"}, {b, "b"}, rng, 199).p_value < 0.05;
  }
  CHECK(small >= 2);
  CHECK(small <= 24);
}

TEST_CASE("bootstrap intervals cover the mean") {
  Rng rng(3);
  int cover = 0;
  auto mean = [](const std::vector<double>& v) { return mean_stderr(v).mean; };
  for (int t = 0; t < 100; ++t) {
    std::vector<double> s(80);
    for (auto& x : s) x = rng.exponential();
    auto ci = bootstrap_ci({s, "s"}, mean, 0.95, rng, 400);
    CHECK(ci.lo <= ci.estimate);
    CHECK(ci.estimate <= ci.hi);
    cover += ci.lo <= 1.0 && 1.0 <= ci.hi;
  }
  CHECK(cover >= 90);
}

TEST_CASE("autocorrelation of an AR(1) series") {
  Rng rng(4);
  const double phi = 0.8;
  std::vector<double> x(200000);
  double v = 0.0;
  for (auto& s : x) s = v = phi * v + rng.normal();
  auto r = autocorr_stderr(x);
  double tau = 0.5 * (1 + phi) / (1 - phi);
  CHECK(r.tau_int == doctest::Approx(tau).epsilon(0.1));
  CHECK(r.stderr_ == doctest::Approx(std::sqrt(2 * r.tau_int * r.variance / x.size())).epsilon(1e-9));
  std::vector<double> iid(5000);
  for (auto& s : iid) s = rng.normal();
  CHECK(autocorr_stderr(iid).tau_int < 0.7);
  CHECK(std::fabs(geweke_z(iid)) < 4.0);
  CHECK_THROWS_AS(autocorr_stderr(std::vector<double>(50, 1.0)), ConfigError);
}

TEST_CASE("log-log slope and Hill estimator") {
  Rng rng(5);
  std::vector<double> x = {10, 20, 40, 80}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.7));
  auto f = loglog_slope(x, y, rng);
  CHECK(f.slope == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  std::vector<double> pareto(100000);
  for (auto& v : pareto) v = std::pow(rng.uniform_pos(), -1.0 / 1.3);
  CHECK(hill_estimator(pareto, 5000) == doctest::Approx(1.3).epsilon(0.06));
  std::vector<double> s = {1, 2, 3, 4, 5};
  CHECK(quantile_sorted(s, 0.5) == 3.0);
  CHECK(quantile_sorted(s, 0.0) == 1.0);
  CHECK(quantile_sorted(s, 1.0) == 5.0);
}
