#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "levy/disorder.hpp"
#include "levy/rng.hpp"

namespace levy {

enum class TailFamily { canonical, log_power };

// Law of X̃: P(|X̃| > x) = L(x) x^{-α} for x >= 1 and 1 below, symmetric sign.
// canonical: L = 1.  log_power(p): L(x) = (1 + ln x)^p, with 0 <= p <= α so
// that the tail is monotone on [1, ∞).
struct HeavyTailSpec {
  double alpha = 1.5;
  TailFamily family = TailFamily::canonical;
  double power = 0.0;

  static HeavyTailSpec canonical(double alpha) { return {alpha, TailFamily::canonical, 0.0}; }
  static HeavyTailSpec log_power(double alpha, double p) { return {alpha, TailFamily::log_power, p}; }

  void validate() const;
  bool is_canonical() const { return family == TailFamily::canonical || power == 0.0; }
  double tail(double x) const;
  // -ln P(|X̃| > e^y) for y >= 0.
  double log_tail_exponent(double y) const;
  std::string name() const;
};

// inf{x >= 1 : P(|X̃| > x) <= 1/N}; N is real so that a_{N choose 2} is direct.
double compute_a_N(const HeavyTailSpec& spec, double N);

// Inversion sampler for J̃ = X̃ / a_N at a fixed N. Holds the inversion grid,
// so build once per (spec, N) and reuse.
class CouplingSampler {
 public:
  CouplingSampler(const HeavyTailSpec& spec, std::int64_t n_sites);

  const HeavyTailSpec& spec() const { return spec_; }
  double scale() const { return a_n_; }
  // x with P(|X̃| > x) = u, u in (0,1].
  double tail_inverse(double u) const;
  double magnitude(double u) const { return tail_inverse(u) / a_n_; }
  // Consumes one uniform then one sign, in that order.
  double operator()(Rng& rng) const {
    double u = rng.uniform_pos();
    return rng.sign() * magnitude(u);
  }

 private:
  double solve_y(double t) const;

  HeavyTailSpec spec_;
  double a_n_;
  double inv_alpha_;
  std::vector<double> grid_t_;
  std::vector<double> grid_y_;
  double grid_dy_ = 0.0;
};

double sample_coupling(const HeavyTailSpec& spec, std::int64_t n_sites, Rng& rng);

// Symmetric g_ε: |g| = ε U^{-1/α}.
double sample_g_eps(double alpha, double eps, Rng& rng);

struct PppSequence {
  std::vector<double> points;

  std::size_t length() const { return points.size(); }
  double last() const { return points.empty() ? 0.0 : points.back(); }
  void extend(std::size_t count, Rng& rng);
};

PppSequence sample_gamma_sequence(std::size_t count, Rng& rng);

// (γ_{n+1}/n)^{1/α} (γ_1^{-1/α}, ..., γ_n^{-1/α}).
std::vector<double> order_stats_via_ppp(int n, double alpha, Rng& rng);
// n^{-1/α} |X|_(1) >= ... >= |X|_(n) for X with density (α/2)|x|^{-α-1} on |x| >= 1.
std::vector<double> order_stats_direct(int n, double alpha, Rng& rng);

// Edge ids sorted by |J| descending; ties in uniformly random order.
std::vector<std::size_t> rank_edges(const DisorderMatrix& m, Rng& rng);

// Couplings drawn edge by edge in lexicographic order, then ranked.
DisorderMatrix sample_disorder(const CouplingSampler& sampler, int n_sites, Rng& rng, bool ranked = true);
DisorderMatrix sample_disorder(const HeavyTailSpec& spec, int n_sites, Rng& rng, bool ranked = true);

}  // namespace levy
