#include "levy/heavy_tail.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>

#include "levy/errors.hpp"

namespace levy {

void HeavyTailSpec::validate() const {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  if (family == TailFamily::log_power)
    require(power >= 0.0 && power <= alpha, "log_power(p) needs 0 <= p <= alpha for a monotone tail");
}

double HeavyTailSpec::log_tail_exponent(double y) const {
  if (is_canonical()) return alpha * y;
  return alpha * y - power * std::log1p(y);
}

double HeavyTailSpec::tail(double x) const {
  if (x <= 1.0) return 1.0;
  return std::exp(-log_tail_exponent(std::log(x)));
}

std::string HeavyTailSpec::name() const {
  if (is_canonical()) return "canonical";
  char buf[48];
  std::snprintf(buf, sizeof buf, "log_power(%g)", power);
  return buf;
}

namespace {

// Solves log_tail_exponent(y) = t on y >= 0 by safeguarded Newton inside
// [lo, hi]. The exponent is increasing with derivative α - p/(1+y).
double solve_exponent(const HeavyTailSpec& s, double t, double lo, double hi, double guess) {
  double y = std::clamp(guess, lo, hi);
  for (int it = 0; it < 200; ++it) {
    double f = s.log_tail_exponent(y) - t;
    if (f > 0.0) hi = y; else lo = y;
    if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
    double d = s.alpha - s.power / (1.0 + y);
    double next = d > 0.0 ? y - f / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - y) <= 1e-15 * std::max(1.0, y)) {
      y = next;
      break;
    }
    y = next;
  }
  return y;
}

double upper_bracket(const HeavyTailSpec& s, double t) {
  double hi = std::max(1.0, t / s.alpha);
  int guard = 0;
  while (s.log_tail_exponent(hi) < t) {
    hi *= 2.0;
    if (++guard > 200) throw ConvergenceError("tail inversion: no upper bracket");
  }
  return hi;
}

}  // namespace

double compute_a_N(const HeavyTailSpec& spec, double N) {
  spec.validate();
  require(N >= 1.0, "compute_a_N needs N >= 1");
  if (spec.is_canonical()) return std::pow(N, 1.0 / spec.alpha);
  double t = std::log(N);
  if (t == 0.0) return 1.0;
  double y = solve_exponent(spec, t, 0.0, upper_bracket(spec, t), t / spec.alpha);
  return std::exp(y);
}

CouplingSampler::CouplingSampler(const HeavyTailSpec& spec, std::int64_t n_sites)
    : spec_(spec), a_n_(compute_a_N(spec, static_cast<double>(n_sites))), inv_alpha_(1.0 / spec.alpha) {
  if (spec_.is_canonical()) return;
  // y on a uniform grid; t(y) is increasing so (t_i, y_i) is a monotone table.
  const int n = 4096;
  const double y_max = 64.0 / spec_.alpha;
  grid_dy_ = y_max / (n - 1);
  grid_t_.resize(n);
  grid_y_.resize(n);
  for (int i = 0; i < n; ++i) {
    grid_y_[i] = i * grid_dy_;
    grid_t_[i] = spec_.log_tail_exponent(grid_y_[i]);
  }
}

double CouplingSampler::solve_y(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= grid_t_.back()) {
    double lo = grid_y_.back();
    return solve_exponent(spec_, t, lo, upper_bracket(spec_, t), t * inv_alpha_);
  }
  auto it = std::upper_bound(grid_t_.begin(), grid_t_.end(), t);
  std::size_t k = static_cast<std::size_t>(it - grid_t_.begin());
  double t0 = grid_t_[k - 1], t1 = grid_t_[k];
  double y0 = grid_y_[k - 1], y1 = grid_y_[k];
  double guess = y0 + (t - t0) / (t1 - t0) * (y1 - y0);
  return solve_exponent(spec_, t, y0, y1, guess);
}

double CouplingSampler::tail_inverse(double u) const {
  if (spec_.is_canonical()) return std::pow(u, -inv_alpha_);
  return std::exp(solve_y(-std::log(u)));
}

double sample_coupling(const HeavyTailSpec& spec, std::int64_t n_sites, Rng& rng) {
  require(n_sites >= 1, "n_sites must be >= 1");
  if (spec.is_canonical()) {
    spec.validate();
    double u = rng.uniform_pos();
    return rng.sign() * std::pow(static_cast<double>(n_sites) * u, -1.0 / spec.alpha);
  }
  thread_local std::unique_ptr<CouplingSampler> cached;
  thread_local std::int64_t cached_n = -1;
  if (!cached || cached_n != n_sites || cached->spec().alpha != spec.alpha ||
      cached->spec().power != spec.power || cached->spec().family != spec.family) {
    cached = std::make_unique<CouplingSampler>(spec, n_sites);
    cached_n = n_sites;
  }
  return (*cached)(rng);
}

double sample_g_eps(double alpha, double eps, Rng& rng) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  require(eps > 0.0, "eps must be positive");
  double u = rng.uniform_pos();
  return rng.sign() * eps * std::pow(u, -1.0 / alpha);
}

void PppSequence::extend(std::size_t count, Rng& rng) {
  double g = last();
  points.reserve(points.size() + count);
  for (std::size_t k = 0; k < count; ++k) {
    g += rng.exponential();
    points.push_back(g);
  }
}

PppSequence sample_gamma_sequence(std::size_t count, Rng& rng) {
  require(count >= 1, "count must be >= 1");
  PppSequence s;
  s.extend(count, rng);
  return s;
}

std::vector<double> order_stats_via_ppp(int n, double alpha, Rng& rng) {
  require(n >= 1, "n must be >= 1");
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  PppSequence g = sample_gamma_sequence(static_cast<std::size_t>(n) + 1, rng);
  double ia = 1.0 / alpha;
  double scale = std::pow(g.points[n] / n, ia);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = scale * std::pow(g.points[j], -ia);
  return out;
}

std::vector<double> order_stats_direct(int n, double alpha, Rng& rng) {
  require(n >= 1, "n must be >= 1");
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  double ia = 1.0 / alpha;
  double scale = std::pow(static_cast<double>(n), -ia);
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = scale * std::pow(rng.uniform_pos(), -ia);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<std::size_t> rank_edges(const DisorderMatrix& m, Rng& rng) {
  std::vector<std::size_t> ids(m.n_edges());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::shuffle(ids.begin(), ids.end(), rng.engine());
  std::vector<double> mag(m.n_edges());
  for (std::size_t e = 0; e < mag.size(); ++e) mag[e] = std::fabs(m.edge_value(e));
  std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
  return ids;
}

DisorderMatrix sample_disorder(const CouplingSampler& sampler, int n_sites, Rng& rng, bool ranked) {
  DisorderMatrix m(n_sites);
  for (std::size_t e = 0; e < m.n_edges(); ++e) {
    auto [i, j] = m.edge(e);
    m.set(i, j, sampler(rng));
  }
  if (ranked) m.set_rank(rank_edges(m, rng));
  return m;
}

DisorderMatrix sample_disorder(const HeavyTailSpec& spec, int n_sites, Rng& rng, bool ranked) {
  spec.validate();
  return sample_disorder(CouplingSampler(spec, n_sites), n_sites, rng, ranked);
}

}  // namespace levy
