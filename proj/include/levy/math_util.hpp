#pragma once

#include <cmath>
#include <cstddef>

namespace levy {

// ln cosh(y) with full relative accuracy near 0 and no overflow for large |y|.
inline double log_cosh(double y) {
  double a = std::fabs(y);
  if (a < 1.0) {
    double s = std::sinh(0.5 * a);
    return std::log1p(2.0 * s * s);
  }
  return a + std::log1p(std::exp(-2.0 * a)) - 0.6931471805599453;
}

// 1 - |tanh(y)|, accurate when |tanh(y)| is close to 1.
inline double tanh_complement(double y) {
  double e = std::exp(-2.0 * std::fabs(y));
  return 2.0 * e / (1.0 + e);
}

// ln(1 + prod_i tanh(y_i)). Stays finite when the product rounds to -1.
inline double log1p_tanh_product(const double* y, std::size_t k) {
  double prod = 1.0;
  bool negative = false;
  for (std::size_t i = 0; i < k; ++i) {
    double t = std::tanh(y[i]);
    prod *= std::fabs(t);
    negative ^= (t < 0.0);
  }
  if (!negative) return std::log1p(prod);
  if (prod < 0.5) return std::log1p(-prod);
  // 1 - prod |t_i| = -expm1(sum ln(1 - d_i))
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log1p(-tanh_complement(y[i]));
  return std::log(-std::expm1(s));
}

// Running log-sum-exp with max shift.
struct LogSumExp {
  double max = -INFINITY;
  double sum = 0.0;

  void add(double x) {
    if (x <= max) {
      sum += std::exp(x - max);
    } else {
      sum = sum * std::exp(max - x) + 1.0;
      max = x;
    }
  }
  double value() const { return max + std::log(sum); }
};

}  // namespace levy
