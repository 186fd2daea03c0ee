#include "levy/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "levy/errors.hpp"
#include "levy/math_util.hpp"

namespace levy {

namespace {
constexpr double kLn2 = 0.6931471805599453;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

void QuadratureSettings::validate() const {
  require(abs_tol > 0.0 && rel_tol > 0.0, "quadrature tolerances must be positive");
  require(max_subdivisions >= 1, "max_subdivisions must be >= 1");
}

FormulaResult integrate(const std::function<double(double)>& f, double a, double b,
                        const QuadratureSettings& settings) {
  settings.validate();
  if (!(b > a)) return {0.0, 0.0};
  unsigned depth = 1;
  while ((1u << depth) < static_cast<unsigned>(settings.max_subdivisions) && depth < 30) ++depth;
  double err = 0.0, l1 = 0.0;
  double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, depth, settings.rel_tol,
                                                                          &err, &l1);
  if (!std::isfinite(v) || err > std::max(settings.abs_tol, settings.rel_tol * l1) * 10.0)
    throw ConvergenceError("quadrature did not converge on [" + std::to_string(a) + ", " +
                           std::to_string(b) + "]");
  return {v, err};
}

namespace {

double kernel_value(PowerKernel k, int ell, double y) {
  if (k == PowerKernel::log_cosh) return log_cosh(y);
  if (ell == 1) return std::tanh(y);
  if (ell == 2) {
    double t = std::tanh(y);
    return t * t;
  }
  double t = std::tanh(y);
  if (t == 0.0) return 0.0;
  double m = std::pow(std::fabs(t), ell);
  return (t < 0.0 && (ell & 1)) ? -m : m;
}

// ∫_A^B x^{-s} dx, B may be +inf.
double pow_integral(double A, double B, double s) {
  if (s == 1.0) return std::log(B / A);
  if (std::isinf(B)) return std::pow(A, 1.0 - s) / (s - 1.0);
  return (std::pow(A, 1.0 - s) - std::pow(B, 1.0 - s)) / (s - 1.0);
}

}  // namespace

FormulaResult power_integral(PowerKernel kernel, int ell, double p, double beta, double lo, double hi,
                             const QuadratureSettings& settings) {
  settings.validate();
  require(beta >= 0.0, "beta must be >= 0");
  require(lo >= 0.0, "lower limit must be >= 0");
  if (!(hi > lo) || beta == 0.0) return {0.0, 0.0};
  require(kernel == PowerKernel::log_cosh || ell >= 1, "tanh power must be >= 1");
  // Near 0 the integrand is bounded by C x^q.
  double q = (kernel == PowerKernel::log_cosh ? 2.0 : ell) - p;
  double log_c = kernel == PowerKernel::log_cosh ? std::log(0.5 * beta * beta) : ell * std::log(beta);
  if (lo == 0.0) require(q > -1.0, "integrand not integrable at 0");

  const double X = 50.0 / beta;
  if (std::isinf(hi)) {
    double growth = kernel == PowerKernel::log_cosh ? p - 1.0 : p;
    require(growth > 1.0, "integrand not integrable at infinity");
  }

  auto f = [&](double x) { return kernel_value(kernel, ell, beta * x) * std::pow(x, -p); };
  QuadratureSettings piece = settings;
  piece.abs_tol = settings.abs_tol * 0.25;

  FormulaResult total{0.0, 0.0};
  auto accumulate = [&](FormulaResult r) {
    total.value += r.value;
    total.error_estimate += r.error_estimate;
  };

  const double c = std::min(hi, X);
  const double split = std::min(c, 1.0);

  if (lo < split) {
    if (lo == 0.0) {
      // x = split·e^{-t}; truncate t where the C x^q bound drops below tol.
      double log_x0 = (std::log(piece.abs_tol * 1e-3 * (q + 1.0)) - log_c) / (q + 1.0);
      double T = std::max(1.0, std::log(split) - log_x0);
      auto g = [&](double t) {
        double x = split * std::exp(-t);
        // Leading-order form where x^{-p} could overflow; relative error O((βx)²).
        if (beta * x < 1e-8) return std::exp(log_c + (q + 1.0) * std::log(x));
        return f(x) * x;
      };
      FormulaResult r = integrate(g, 0.0, T, piece);
      double x_end = split * std::exp(-T);
      r.error_estimate += std::exp(log_c + (q + 1.0) * std::log(x_end)) / (q + 1.0);
      accumulate(r);
    } else {
      auto g = [&](double s) {
        double x = std::exp(s);
        return f(x) * x;
      };
      accumulate(integrate(g, std::log(lo), std::log(split), piece));
    }
  }
  const double mid_lo = std::max(lo, split);
  if (c > mid_lo) {
    auto g = [&](double s) {
      double x = std::exp(s);
      return f(x) * x;
    };
    accumulate(integrate(g, std::log(mid_lo), std::log(c), piece));
  }
  if (hi > X) {
    // Beyond 50/β: tanh^ℓ = 1 and ln cosh(βx) = βx - ln 2 up to O(ℓ e^{-100}).
    double A = std::max(lo, X);
    double base = pow_integral(A, hi, p);
    double r = 0.0;
    if (kernel == PowerKernel::log_cosh) {
      r = beta * pow_integral(A, hi, p - 1.0) - kLn2 * base;
    } else {
      r = base;
    }
    double err = 2.0 * std::max(1, ell) * std::exp(-2.0 * beta * A) * base;
    accumulate({r, err});
  }
  if (total.error_estimate > std::max(settings.abs_tol, settings.rel_tol * std::fabs(total.value)))
    throw ConvergenceError("power_integral: error estimate above tolerance");
  return total;
}

FormulaResult beta_alpha(double alpha, const QuadratureSettings& settings) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  FormulaResult I = power_integral(PowerKernel::tanh_power, 2, alpha + 1.0, 1.0, 0.0, kInf, settings);
  double v = std::pow(alpha * I.value, -1.0 / alpha);
  return {v, v * I.error_estimate / (alpha * I.value)};
}

double beta_from_fraction(double alpha, double fraction) {
  require(fraction >= 0.0, "beta_fraction must be >= 0");
  return fraction * beta_alpha(alpha).value;
}

FormulaResult free_energy_limit(double alpha, double beta, const QuadratureSettings& settings) {
  require(alpha > 1.0 && alpha < 2.0, "free_energy_limit needs alpha in (1,2)");
  require(beta >= 0.0, "beta must be >= 0");
  FormulaResult I = power_integral(PowerKernel::log_cosh, 0, alpha + 1.0, beta, 0.0, kInf, settings);
  return {kLn2 + 0.5 * alpha * I.value, 0.5 * alpha * I.error_estimate};
}

FormulaResult centering_integral(double alpha, double beta, std::int64_t N, const QuadratureSettings& settings) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  require(N >= 2, "centering_integral needs N >= 2");
  double n = static_cast<double>(N);
  double lo = std::pow(n, -1.0 / alpha);
  double hi = std::pow(0.5 * (n - 1.0), 1.0 / alpha);
  FormulaResult I = power_integral(PowerKernel::log_cosh, 0, alpha + 1.0, beta, lo, hi, settings);
  double s = 0.5 * alpha * n;
  return {s * I.value, s * I.error_estimate};
}

BondOverlapLimit bond_overlap_limit(double alpha, double beta, double K, const QuadratureSettings& settings) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  require(K > 0.0, "K must be positive");
  FormulaResult I = power_integral(PowerKernel::tanh_power, 2, alpha + 1.0, beta, K, kInf, settings);
  BondOverlapLimit out;
  out.c_k = {0.5 * alpha * I.value, 0.5 * alpha * I.error_estimate};
  double s = 2.0 * std::pow(K, alpha);
  out.value = {s * out.c_k.value, s * out.c_k.error_estimate};
  return out;
}

FormulaResult gamma_ell(double alpha, double beta, int ell, const QuadratureSettings& settings) {
  require(alpha > 1.0 && alpha < 2.0, "gamma_ell needs alpha in (1,2)");
  require(ell >= 1 && (ell & 1), "ell must be an odd integer >= 1");
  FormulaResult I = power_integral(PowerKernel::tanh_power, ell, alpha, beta, 0.0, kInf, settings);
  return {alpha * I.value, alpha * I.error_estimate};
}

FormulaResult L_pmf(double alpha, double beta, int k, const QuadratureSettings& settings) {
  require(alpha > 1.0 && alpha < 2.0, "L_pmf needs alpha in (1,2)");
  require(k >= 1, "k must be >= 1");
  require(beta > 0.0, "L_pmf needs beta > 0");
  FormulaResult num = power_integral(PowerKernel::tanh_power, 2 * k, alpha + 1.0, beta, 0.0, kInf, settings);
  FormulaResult den = power_integral(PowerKernel::tanh_power, 1, alpha, beta, 0.0, kInf, settings);
  double v = alpha * num.value / (2.0 * k * beta * den.value);
  double rel = num.error_estimate / num.value + den.error_estimate / den.value;
  return {v, std::fabs(v) * rel};
}

FormulaResult L_pmf_telescoping(double alpha, double beta, int k, const QuadratureSettings& settings) {
  FormulaResult g1 = gamma_ell(alpha, beta, 1, settings);
  FormulaResult a = gamma_ell(alpha, beta, 2 * k - 1, settings);
  FormulaResult b = gamma_ell(alpha, beta, 2 * k + 1, settings);
  double v = (a.value - b.value) / g1.value;
  double err = (a.error_estimate + b.error_estimate) / g1.value + std::fabs(v) * g1.error_estimate / g1.value;
  return {v, err};
}

double LimitIntegrandSpec::operator()(double x) const {
  switch (kind) {
    case LimitIntegrand::tanh_sq: {
      double t = std::tanh(beta * x);
      return t * t;
    }
    case LimitIntegrand::log_cosh:
      return log_cosh(beta * x);
    case LimitIntegrand::x_tanh_pow:
      return x * std::pow(std::tanh(beta * x), ell);
    case LimitIntegrand::odd_identity:
      return x;
  }
  return 0.0;
}

std::string LimitIntegrandSpec::name() const {
  switch (kind) {
    case LimitIntegrand::tanh_sq: return "tanh_sq";
    case LimitIntegrand::log_cosh: return "log_cosh";
    case LimitIntegrand::x_tanh_pow: return "x_tanh_pow";
    case LimitIntegrand::odd_identity: return "odd_identity";
  }
  return "?";
}

namespace {

void check_integrand_conditions(const LimitIntegrandSpec& f, double alpha) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  switch (f.kind) {
    case LimitIntegrand::tanh_sq:
      return;
    case LimitIntegrand::log_cosh:
      require(alpha > 1.0, "log_cosh grows linearly: needs alpha > 1");
      return;
    case LimitIntegrand::x_tanh_pow:
      require(f.ell >= 1, "x_tanh_pow needs ell >= 1");
      require(alpha > 1.0, "x_tanh_pow grows linearly: needs alpha > 1");
      return;
    case LimitIntegrand::odd_identity:
      require(alpha > 1.0, "odd_identity needs a finite first moment: alpha > 1");
      return;
  }
}

}  // namespace

FormulaResult expectation_limit(const LimitIntegrandSpec& f, double alpha, const QuadratureSettings& settings) {
  check_integrand_conditions(f, alpha);
  FormulaResult I{0.0, 0.0};
  switch (f.kind) {
    case LimitIntegrand::tanh_sq:
      I = power_integral(PowerKernel::tanh_power, 2, alpha + 1.0, f.beta, 0.0, kInf, settings);
      break;
    case LimitIntegrand::log_cosh:
      I = power_integral(PowerKernel::log_cosh, 0, alpha + 1.0, f.beta, 0.0, kInf, settings);
      break;
    case LimitIntegrand::x_tanh_pow:
      if (f.ell % 2 == 0) return {0.0, 0.0};
      I = power_integral(PowerKernel::tanh_power, f.ell, alpha, f.beta, 0.0, kInf, settings);
      break;
    case LimitIntegrand::odd_identity:
      return {0.0, 0.0};
  }
  return {alpha * I.value, alpha * I.error_estimate};
}

std::vector<ExpectationRow> expectation_limit_check(const LimitIntegrandSpec& f, const HeavyTailSpec& spec,
                                                    const std::vector<double>& N_grid, std::int64_t draws,
                                                    Rng& rng) {
  spec.validate();
  check_integrand_conditions(f, spec.alpha);
  require(!N_grid.empty(), "N_grid must be nonempty");
  require(draws >= 1000, "expectation_limit_check needs at least 1000 draws");
  const double limit = expectation_limit(f, spec.alpha).value;
  std::vector<ExpectationRow> rows;
  for (double N : N_grid) {
    require(N >= 1.0, "N must be >= 1");
    CouplingSampler sampler(spec, static_cast<std::int64_t>(N));
    // Bands (u_{s+1}, u_s] with u_0 = 1 and ratio 1/10 down to 1e-8/N; the
    // last band is (0, u_S].
    std::vector<double> edges{1.0};
    while (edges.back() > 1e-8 / N) edges.push_back(edges.back() * 0.1);
    edges.push_back(0.0);
    const std::size_t bands = edges.size() - 1;
    const std::int64_t per_band = std::max<std::int64_t>(2, draws / static_cast<std::int64_t>(bands));
    double mean = 0.0, var = 0.0;
    for (std::size_t s = 0; s < bands; ++s) {
      double hi = edges[s], lo = edges[s + 1], w = hi - lo;
      double m = 0.0, m2 = 0.0;
      for (std::int64_t d = 0; d < per_band; ++d) {
        double u = hi - w * rng.uniform();
        double x = rng.sign() * sampler.magnitude(u);
        double y = f(x);
        double delta = y - m;
        m += delta / (d + 1);
        m2 += delta * (y - m);
      }
      mean += w * m;
      var += w * w * (m2 / (per_band - 1)) / per_band;
    }
    ExpectationRow row;
    row.N = N;
    row.estimate = N * mean;
    row.stderr_ = N * std::sqrt(var);
    row.limit = limit;
    row.gap = row.estimate - limit;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace levy
