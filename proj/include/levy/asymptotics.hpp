#pragma once

#include <cstdint>
#include <vector>

#include "levy/quadrature.hpp"
#include "levy/rng.hpp"

namespace levy {

struct LimitLawSpec {
  double alpha = 1.5;
  double beta = 1.0;
  double cutoff_eps = 1e-3;        // Lévy-measure truncation (Y_α, Q) or cycle weight cutoff ε (X)
  int max_cycle_len = 9;           // m
  std::int64_t ppp_trunc = 10000;  // γ points kept in Σ γ_j^{-1/α}
  bool tail_correction = true;
  bool compensate = true;          // Y_α: compensate jumps below 1
  bool small_cycle_correction = false;  // X: Gaussian stand-in for cycles through an edge below ε
  double lambda = 1.0;             // rate of the second PPP in Q is λμ/2

  void validate() const;
};

// One draw of Y_α: Σ_{x_j > c} x_j - ∫_c^1 αx^{-α}dx + N(0, αc^{2-α}/(2-α)).
// With compensate = false the compensator is replaced by the small-jump
// mean αc^{1-α}/(1-α) (α < 1 only).
double sample_Y_alpha(double alpha, const LimitLawSpec& spec, Rng& rng);

// (ln Z̄_N - centering) / N^{1/α} with canonical couplings. Holds the
// centering integral for its (α, β, N).
class ScalarFluctuationSampler {
 public:
  ScalarFluctuationSampler(double alpha, double beta, int N);
  double operator()(Rng& rng) const;
  double centering() const { return centering_; }

 private:
  double alpha_, beta_;
  int N_;
  double centering_;
  double scale_;
};
double lnZbar_fluct_sample(double alpha, double beta, int N, Rng& rng);

// exp(Σ_{k=3}^{m} T_k), T_k a Poisson(ε^{-αk}/2k) sum of ln(1 + Π tanh(βg_ε)).
double sample_X_alpha_beta(double alpha, double beta, const LimitLawSpec& spec, Rng& rng);

// E|T_k| per cycle length from `draws` samples, k = 3..kmax.
std::vector<double> cycle_term_magnitudes(double alpha, double beta, double eps, int kmax, std::int64_t draws,
                                          Rng& rng);

enum class Sub1Scale {
  canonical,   // N^{-1/α} ln Z_N -> (β / 2^{1/α}) Σ γ_j^{-1/α}
  pair_count,  // ln Z_N / b_N -> β Σ γ_j^{-1/α}, b_N = a_{N choose 2} / a_N
};

double sub1_free_energy_limit_sample(double alpha, double beta, const LimitLawSpec& spec, Rng& rng,
                                     Sub1Scale scale = Sub1Scale::canonical);

// Q at the product σ. Each outer draw takes PPPs ξ ~ μ and ξ' ~ λμ/2
// restricted to |x| > cutoff, μ(dx) = α/(2|x|^{1+α}) dx, and adds the
// Campbell term (1 - λ/2) α ∫_0^c ln cosh(βx) x^{-1-α} dx for the rest.
// error_estimate is the Monte Carlo standard error.
FormulaResult rs_functional_Q(double alpha, double beta, const LimitLawSpec& spec, Rng& rng, std::int64_t n_outer);

}  // namespace levy
