#include "levy/asymptotics.hpp"

#include <cmath>
#include <limits>

#include "levy/errors.hpp"
#include "levy/heavy_tail.hpp"
#include "levy/math_util.hpp"

namespace levy {

namespace {

// Per-draw point budget for compound-Poisson samplers.
constexpr double kMaxPoissonPoints = 1e8;

}  // namespace

void LimitLawSpec::validate() const {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  require(beta >= 0.0, "beta must be >= 0");
  require(cutoff_eps > 0.0, "cutoff_eps must be positive");
  require(max_cycle_len >= 3, "max_cycle_len must be >= 3");
  require(ppp_trunc >= 1, "ppp_trunc must be >= 1");
  require(lambda > 0.0, "lambda must be positive");
}

double sample_Y_alpha(double alpha, const LimitLawSpec& spec, Rng& rng) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  require(spec.cutoff_eps > 0.0 && spec.cutoff_eps <= 1.0, "Y_alpha cutoff must lie in (0,1]");
  const double c = spec.cutoff_eps;
  const double ia = 1.0 / alpha;
  // Points above c are γ_j^{-1/α} with γ_j < c^{-α}.
  const double g_max = std::pow(c, -alpha);
  if (g_max > kMaxPoissonPoints) throw ResourceGuardError("Y_alpha: cutoff too small, more than 1e8 jumps per draw");
  double sum = 0.0, g = 0.0;
  for (;;) {
    g += rng.exponential();
    if (g >= g_max) break;
    sum += std::pow(g, -ia);
  }
  double drift;
  if (spec.compensate) {
    drift = alpha == 1.0 ? std::log(c) : -alpha * (1.0 - std::pow(c, 1.0 - alpha)) / (1.0 - alpha);
  } else {
    require(alpha < 1.0, "uncompensated Y_alpha needs alpha < 1");
    drift = alpha * std::pow(c, 1.0 - alpha) / (1.0 - alpha);
  }
  double sd = std::sqrt(alpha * std::pow(c, 2.0 - alpha) / (2.0 - alpha));
  return sum + drift + sd * rng.normal();
}

ScalarFluctuationSampler::ScalarFluctuationSampler(double alpha, double beta, int N)
    : alpha_(alpha), beta_(beta), N_(N) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  require(N >= 2, "N must be >= 2");
  centering_ = centering_integral(alpha, beta, N).value;
  scale_ = std::pow(static_cast<double>(N), -1.0 / alpha);
}

double ScalarFluctuationSampler::operator()(Rng& rng) const {
  const std::int64_t edges = static_cast<std::int64_t>(N_) * (N_ - 1) / 2;
  const double ia = 1.0 / alpha_;
  const double bs = beta_ * scale_;
  double s = 0.0;
  for (std::int64_t e = 0; e < edges; ++e) {
    double u = rng.uniform_pos();
    rng.sign();
    s += log_cosh(bs * std::pow(u, -ia));
  }
  return (s - centering_) * scale_;
}

double lnZbar_fluct_sample(double alpha, double beta, int N, Rng& rng) {
  return ScalarFluctuationSampler(alpha, beta, N)(rng);
}

double sample_X_alpha_beta(double alpha, double beta, const LimitLawSpec& spec, Rng& rng) {
  spec.validate();
  if (beta == 0.0) return 1.0;
  const double eps = spec.cutoff_eps;
  const int m = spec.max_cycle_len;
  if (spec.small_cycle_correction)
    require(beta < beta_alpha(alpha).value, "small-cycle correction needs beta < beta_alpha");
  double expected = 0.0;
  for (int k = 3; k <= m; ++k) expected += std::pow(eps, -alpha * k) / (2.0 * k);
  if (expected > kMaxPoissonPoints)
    throw ResourceGuardError("X_alpha_beta: expected cycle count per draw exceeds 1e8; raise eps or lower m");
  std::vector<double> y(m);
  double log_x = 0.0;
  for (int k = 3; k <= m; ++k) {
    std::int64_t cycles = rng.poisson(std::pow(eps, -alpha * k) / (2.0 * k));
    for (std::int64_t c = 0; c < cycles; ++c) {
      for (int i = 0; i < k; ++i) y[i] = beta * sample_g_eps(alpha, eps, rng);
      log_x += log1p_tanh_product(y.data(), k);
    }
  }
  if (spec.small_cycle_correction) {
    // Cycles through at least one edge below ε, and all cycles longer than m,
    // enter as a Gaussian with the Campbell variance Σ_k (A_0^k - A_ε^k)/2k
    // (A_ε^k dropped for k > m) and mean -variance/2.
    double a0 = expectation_limit({LimitIntegrand::tanh_sq, beta, 1}, alpha).value;
    double ae = 2.0 * bond_overlap_limit(alpha, beta, eps).c_k.value;
    auto series = [](double a, int from, int to) {
      double s = 0.0, p = std::pow(a, from);
      for (int k = from; k <= to; ++k, p *= a) s += p / (2.0 * k);
      return s;
    };
    // Σ_{k>m} a^k/2k = (-ln(1-a) - Σ_{k<=m} a^k/k) / 2
    double full_tail = 0.5 * (-std::log1p(-a0) - 2.0 * series(a0, 1, m));
    double var = series(a0, 3, m) - series(ae, 3, m) + full_tail;
    log_x += -0.5 * var + std::sqrt(var) * rng.normal();
  }
  return std::exp(log_x);
}

std::vector<double> cycle_term_magnitudes(double alpha, double beta, double eps, int kmax, std::int64_t draws,
                                          Rng& rng) {
  require(kmax >= 3 && draws >= 1, "cycle_term_magnitudes: bad arguments");
  require(eps > 0.0, "eps must be positive");
  if (std::pow(eps, -alpha * kmax) / (2.0 * kmax) > kMaxPoissonPoints)
    throw ResourceGuardError("cycle_term_magnitudes: more than 1e8 cycles per draw");
  std::vector<double> out;
  std::vector<double> y(kmax);
  for (int k = 3; k <= kmax; ++k) {
    double acc = 0.0;
    for (std::int64_t d = 0; d < draws; ++d) {
      double t = 0.0;
      std::int64_t cycles = rng.poisson(std::pow(eps, -alpha * k) / (2.0 * k));
      for (std::int64_t c = 0; c < cycles; ++c) {
        for (int i = 0; i < k; ++i) y[i] = beta * sample_g_eps(alpha, eps, rng);
        t += log1p_tanh_product(y.data(), k);
      }
      acc += std::fabs(t);
    }
    out.push_back(acc / draws);
  }
  return out;
}

double sub1_free_energy_limit_sample(double alpha, double beta, const LimitLawSpec& spec, Rng& rng,
                                     Sub1Scale scale) {
  spec.validate();
  require(alpha < 1.0, "the sub-1 free energy limit needs alpha < 1");
  const double ia = 1.0 / alpha;
  double g = 0.0, s = 0.0;
  for (std::int64_t j = 0; j < spec.ppp_trunc; ++j) {
    g += rng.exponential();
    s += std::pow(g, -ia);
  }
  if (spec.tail_correction) {
    double J = static_cast<double>(spec.ppp_trunc);
    s += std::pow(J, 1.0 - ia) / (ia - 1.0);
  }
  double pref = scale == Sub1Scale::canonical ? beta * std::pow(2.0, -ia) : beta;
  return pref * s;
}

FormulaResult rs_functional_Q(double alpha, double beta, const LimitLawSpec& spec, Rng& rng, std::int64_t n_outer) {
  spec.validate();
  require(alpha > 1.0 && alpha < 2.0, "rs_functional_Q needs alpha in (1,2)");
  require(n_outer >= 2, "rs_functional_Q needs n_outer >= 2");
  const double ln2 = std::log(2.0);
  if (beta == 0.0) return {ln2, 0.0};
  const double c = spec.cutoff_eps;
  const double mass = std::pow(c, -alpha);  // μ(|x| > c)
  if (mass > kMaxPoissonPoints) throw ResourceGuardError("rs_functional_Q: cutoff too small, more than 1e8 points per draw");
  const double ia = 1.0 / alpha;
  FormulaResult small = power_integral(PowerKernel::log_cosh, 0, alpha + 1.0, beta, 0.0, c);
  const double campbell = (1.0 - 0.5 * spec.lambda) * alpha * small.value;
  double m = 0.0, m2 = 0.0;
  for (std::int64_t d = 0; d < n_outer; ++d) {
    double a = 0.0, b = 0.0;
    std::int64_t n1 = rng.poisson(mass);
    for (std::int64_t k = 0; k < n1; ++k) a += log_cosh(beta * c * std::pow(rng.uniform_pos(), -ia));
    std::int64_t n2 = rng.poisson(0.5 * spec.lambda * mass);
    for (std::int64_t k = 0; k < n2; ++k) b += log_cosh(beta * c * std::pow(rng.uniform_pos(), -ia));
    double q = a - b;
    double delta = q - m;
    m += delta / (d + 1);
    m2 += delta * (q - m);
  }
  double se = std::sqrt(m2 / (n_outer - 1) / n_outer);
  return {ln2 + campbell + m, std::hypot(se, small.error_estimate)};
}

}  // namespace levy
