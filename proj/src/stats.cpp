#include "levy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "levy/errors.hpp"

namespace levy {

MeanStderr mean_stderr(const std::vector<double>& v) {
  MeanStderr r;
  r.n = v.size();
  if (v.empty()) return r;
  double m = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double d = v[i] - m;
    m += d / static_cast<double>(i + 1);
    m2 += d * (v[i] - m);
  }
  r.mean = m;
  r.stderr_ = v.size() > 1 ? std::sqrt(m2 / static_cast<double>(v.size() - 1) / static_cast<double>(v.size())) : 0.0;
  return r;
}

namespace {

// Unbiased bounded integer in [0, n) (Lemire).
inline std::uint64_t bounded(Rng& rng, std::uint64_t n) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng.next_u64()) * n;
  std::uint64_t low = static_cast<std::uint64_t>(m);
  if (low < n) {
    std::uint64_t t = (0 - n) % n;
    while (low < t) {
      m = static_cast<unsigned __int128>(rng.next_u64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

// Max |F_a - F_b| over the pooled sorted order; only tie-group ends count.
double ks_distance(const std::vector<std::uint8_t>& label, const std::vector<std::uint8_t>& group_end,
                   double na, double nb) {
  double ca = 0.0, cb = 0.0, d = 0.0;
  const double ia = 1.0 / na, ib = 1.0 / nb;
  for (std::size_t k = 0; k < label.size(); ++k) {
    if (label[k]) cb += ib; else ca += ia;
    if (group_end[k]) d = std::max(d, std::fabs(ca - cb));
  }
  return d;
}

}  // namespace

KsResult ks_two_sample(const Sample& a, const Sample& b, Rng& rng, int permutations) {
  require(!a.values.empty() && !b.values.empty(), "ks_two_sample: empty sample");
  require(permutations >= 1, "ks_two_sample: permutations must be >= 1");
  const std::size_t n = a.values.size() + b.values.size();
  std::vector<std::pair<double, std::uint8_t>> pooled;
  pooled.reserve(n);
  for (double v : a.values) pooled.push_back({v, 0});
  for (double v : b.values) pooled.push_back({v, 1});
  std::sort(pooled.begin(), pooled.end());
  std::vector<std::uint8_t> label(n), group_end(n);
  for (std::size_t k = 0; k < n; ++k) {
    label[k] = pooled[k].second;
    group_end[k] = (k + 1 == n || pooled[k + 1].first != pooled[k].first) ? 1 : 0;
  }
  const double na = static_cast<double>(a.values.size()), nb = static_cast<double>(b.values.size());
  KsResult r;
  r.statistic = ks_distance(label, group_end, na, nb);
  r.permutations = permutations;
  const double thresh = r.statistic - 1e-12;
  std::int64_t exceed = 0;
  for (int p = 0; p < permutations; ++p) {
    for (std::size_t k = n - 1; k > 0; --k) std::swap(label[k], label[bounded(rng, k + 1)]);
    if (ks_distance(label, group_end, na, nb) >= thresh) ++exceed;
  }
  r.p_value = static_cast<double>(1 + exceed) / static_cast<double>(1 + permutations);
  return r;
}

double quantile_sorted(const std::vector<double>& s, double q) {
  require(!s.empty(), "quantile of empty sample");
  double pos = q * static_cast<double>(s.size() - 1);
  std::size_t i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= s.size()) return s.back();
  double f = pos - static_cast<double>(i);
  return s[i] + f * (s[i + 1] - s[i]);
}

Interval bootstrap_ci(const Sample& s, const StatisticFn& statistic, double level, Rng& rng, int resamples) {
  require(s.values.size() >= 20, "bootstrap_ci needs at least 20 values");
  require(level > 0.0 && level < 1.0, "level must lie in (0,1)");
  require(resamples >= 10, "bootstrap_ci needs at least 10 resamples");
  Interval out;
  out.estimate = statistic(s.values);
  std::vector<double> stats(resamples), buf(s.values.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& x : buf) x = s.values[bounded(rng, s.values.size())];
    stats[r] = statistic(buf);
  }
  std::sort(stats.begin(), stats.end());
  double tail = 0.5 * (1.0 - level);
  out.lo = std::min(quantile_sorted(stats, tail), out.estimate);
  out.hi = std::max(quantile_sorted(stats, 1.0 - tail), out.estimate);
  return out;
}

namespace {

AutocorrResult autocorr_impl(const std::vector<double>& x) {
  AutocorrResult r;
  const std::size_t n = x.size();
  r.mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = x[i] - r.mean;
  double c0 = 0.0;
  for (double v : d) c0 += v * v;
  c0 /= static_cast<double>(n);
  r.variance = c0;
  if (c0 <= 0.0 || n < 2) {
    r.tau_int = 0.5;
    r.stderr_ = 0.0;
    return r;
  }
  double tau = 0.5;
  std::size_t t = 1;
  for (; t < n / 2; ++t) {
    double c = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) c += d[i] * d[i + t];
    c /= static_cast<double>(n);
    tau += c / c0;
    if (static_cast<double>(t) >= 5.0 * tau) break;
  }
  r.window = static_cast<int>(t);
  r.tau_int = std::max(0.5, tau);
  r.stderr_ = std::sqrt(2.0 * r.tau_int * c0 / static_cast<double>(n));
  return r;
}

}  // namespace

AutocorrResult autocorr_stderr(const std::vector<double>& series) {
  require(series.size() >= 100, "autocorr_stderr needs a series of length >= 100");
  return autocorr_impl(series);
}

double geweke_z(const std::vector<double>& series, double first, double last) {
  require(series.size() >= 100, "geweke_z needs a series of length >= 100");
  require(first > 0.0 && last > 0.0 && first + last <= 1.0, "geweke_z: bad segment fractions");
  std::size_t na = static_cast<std::size_t>(first * series.size());
  std::size_t nb = static_cast<std::size_t>(last * series.size());
  std::vector<double> a(series.begin(), series.begin() + na);
  std::vector<double> b(series.end() - nb, series.end());
  AutocorrResult ra = autocorr_impl(a), rb = autocorr_impl(b);
  double se = std::sqrt(ra.stderr_ * ra.stderr_ + rb.stderr_ * rb.stderr_);
  if (se == 0.0) return ra.mean == rb.mean ? 0.0 : INFINITY;
  return (ra.mean - rb.mean) / se;
}

namespace {
bool ols(const std::vector<double>& lx, const std::vector<double>& ly, const std::vector<std::size_t>& idx,
         double* slope, double* intercept) {
  double mx = 0.0, my = 0.0;
  for (auto i : idx) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= idx.size();
  my /= idx.size();
  double sxx = 0.0, sxy = 0.0;
  for (auto i : idx) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 1e-300) return false;
  *slope = sxy / sxx;
  *intercept = my - *slope * mx;
  return true;
}
}  // namespace

SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y, Rng& rng, double level,
                      int resamples) {
  require(x.size() == y.size(), "loglog_slope: size mismatch");
  require(x.size() >= 3, "loglog_slope needs at least 3 points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0.0 && y[i] > 0.0, "loglog_slope needs positive values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  std::vector<std::size_t> all(x.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  SlopeFit fit;
  require(ols(lx, ly, all, &fit.slope, &fit.intercept), "loglog_slope: x values are all equal");
  std::vector<double> slopes;
  std::vector<std::size_t> idx(x.size());
  for (int r = 0; r < resamples; ++r) {
    for (auto& i : idx) i = bounded(rng, x.size());
    double s, c;
    if (ols(lx, ly, idx, &s, &c)) slopes.push_back(s);
  }
  if (slopes.empty()) {
    fit.ci_lo = fit.ci_hi = fit.slope;
    return fit;
  }
  std::sort(slopes.begin(), slopes.end());
  double tail = 0.5 * (1.0 - level);
  fit.ci_lo = std::min(quantile_sorted(slopes, tail), fit.slope);
  fit.ci_hi = std::max(quantile_sorted(slopes, 1.0 - tail), fit.slope);
  return fit;
}

double hill_estimator(std::vector<double> v, std::size_t k) {
  require(k >= 2 && k < v.size(), "hill_estimator: need 2 <= k < n");
  std::nth_element(v.begin(), v.begin() + k, v.end(), std::greater<>());
  double threshold = v[k];
  require(threshold > 0.0, "hill_estimator needs positive order statistics");
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(v[i] / threshold);
  return static_cast<double>(k) / s;
}

}  // namespace levy
