#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "levy/heavy_tail.hpp"

namespace levy {

struct QuadratureSettings {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;

  void validate() const;
};

struct FormulaResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Adaptive Gauss–Kronrod on a finite interval. Throws ConvergenceError when
// the tolerance is not met.
FormulaResult integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSettings& settings = {});

enum class PowerKernel { tanh_power, log_cosh };

// ∫_lo^hi g(βx) x^{-p} dx with g = tanh^ℓ or ln cosh, hi may be +inf.
// Split at min(1, 50/β): x = b·e^{-t} near 0, x = e^s on the middle range,
// closed form beyond 50/β.
FormulaResult power_integral(PowerKernel kernel, int ell, double p, double beta, double lo, double hi,
                             const QuadratureSettings& settings = {});

FormulaResult beta_alpha(double alpha, const QuadratureSettings& settings = {});
double beta_from_fraction(double alpha, double fraction);

FormulaResult free_energy_limit(double alpha, double beta, const QuadratureSettings& settings = {});
FormulaResult centering_integral(double alpha, double beta, std::int64_t N,
                                 const QuadratureSettings& settings = {});

struct BondOverlapLimit {
  FormulaResult value;  // 2 K^α C_K
  FormulaResult c_k;    // (α/2) ∫_K^∞ tanh²(βx) x^{-1-α} dx
};
BondOverlapLimit bond_overlap_limit(double alpha, double beta, double K,
                                    const QuadratureSettings& settings = {});

// γ_ℓ = α ∫_0^∞ tanh^ℓ(βx) x^{-α} dx.
FormulaResult gamma_ell(double alpha, double beta, int ell, const QuadratureSettings& settings = {});
// P(L = 2k) from the direct form α∫tanh^{2k}(βx)x^{-α-1} / (2kβ ∫tanh(βx)x^{-α}).
FormulaResult L_pmf(double alpha, double beta, int k, const QuadratureSettings& settings = {});
// Same probability as (γ_{2k-1} - γ_{2k+1}) / γ_1.
FormulaResult L_pmf_telescoping(double alpha, double beta, int k, const QuadratureSettings& settings = {});

enum class LimitIntegrand { tanh_sq, log_cosh, x_tanh_pow, odd_identity };

struct LimitIntegrandSpec {
  LimitIntegrand kind = LimitIntegrand::tanh_sq;
  double beta = 1.0;
  int ell = 1;

  double operator()(double x) const;
  std::string name() const;
};

struct ExpectationRow {
  double N = 0.0;
  double estimate = 0.0;  // N E f(J̃)
  double stderr_ = 0.0;
  double limit = 0.0;
  double gap = 0.0;       // estimate - limit
};

// α ∫_0^∞ f̄(x) x^{-1-α} dx with f̄ the even part of f.
FormulaResult expectation_limit(const LimitIntegrandSpec& f, double alpha, const QuadratureSettings& settings = {});

// N E f(J̃) by Monte Carlo with the draws stratified over geometric bands of
// the tail probability, so the O(1/N) region carrying the mass is resolved.
std::vector<ExpectationRow> expectation_limit_check(const LimitIntegrandSpec& f, const HeavyTailSpec& spec,
                                                    const std::vector<double>& N_grid, std::int64_t draws,
                                                    Rng& rng);

}  // namespace levy
