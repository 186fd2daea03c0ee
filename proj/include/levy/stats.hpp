#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "levy/rng.hpp"

namespace levy {

struct Sample {
  std::vector<double> values;
  std::string label;
};

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};
MeanStderr mean_stderr(const std::vector<double>& v);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int permutations = 0;
};
// Two-sample KS distance with a permutation p-value (1 + #{D* >= D}) / (1 + B).
KsResult ks_two_sample(const Sample& a, const Sample& b, Rng& rng, int permutations = 10000);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double estimate = 0.0;
};
using StatisticFn = std::function<double(const std::vector<double>&)>;
// Percentile bootstrap interval.
Interval bootstrap_ci(const Sample& s, const StatisticFn& statistic, double level, Rng& rng, int resamples = 1000);

struct AutocorrResult {
  double stderr_ = 0.0;
  double tau_int = 0.5;  // 1/2 + Σ_{t=1}^{W} ρ(t), floored at 1/2
  int window = 0;
  double mean = 0.0;
  double variance = 0.0;
};
// Windowed τ_int: W is the first lag with W >= 5 τ(W).
AutocorrResult autocorr_stderr(const std::vector<double>& series);

// (mean of first 10%) - (mean of last 50%) over their combined
// autocorrelation-corrected error.
double geweke_z(const std::vector<double>& series, double first = 0.1, double last = 0.5);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};
// Least squares on (ln x, ln y) with a pairs-bootstrap interval.
SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y, Rng& rng,
                      double level = 0.95, int resamples = 1000);

// Hill estimate of the tail index from the top k order statistics.
double hill_estimator(std::vector<double> values, std::size_t k);

double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace levy
