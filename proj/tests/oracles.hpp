#pragma once

// Slow reference implementations used only by tests.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <vector>

#include "levy/disorder.hpp"
#include "levy/math_util.hpp"

namespace oracle {

inline int spin_of(unsigned s, int i) { return ((s >> i) & 1u) ? -1 : 1; }

// β Σ_{i<j} J_ij σ_i σ_j recomputed from scratch.
inline double minus_h(const levy::DisorderMatrix& m, unsigned s, double beta) {
  double e = 0.0;
  for (int i = 0; i < m.n_sites(); ++i)
    for (int j = i + 1; j < m.n_sites(); ++j) e += m(i, j) * spin_of(s, i) * spin_of(s, j);
  return beta * e;
}

inline double log_Z(const levy::DisorderMatrix& m, double beta) {
  levy::LogSumExp acc;
  for (unsigned s = 0; s < (1u << m.n_sites()); ++s) acc.add(minus_h(m, s, beta));
  return acc.value();
}

// ln Σ_σ Π_{i<j} (1 + σ_iσ_j tanh(βJ_ij)), independent of the Z̄ split.
inline double log_Z_hat_product(const levy::DisorderMatrix& m, double beta) {
  levy::LogSumExp acc;
  for (unsigned s = 0; s < (1u << m.n_sites()); ++s) {
    double w = 0.0;
    for (int i = 0; i < m.n_sites(); ++i)
      for (int j = i + 1; j < m.n_sites(); ++j) w += std::log1p(spin_of(s, i) * spin_of(s, j) * std::tanh(beta * m(i, j)));
    acc.add(w);
  }
  return acc.value();
}

inline std::vector<double> gibbs_weights(const levy::DisorderMatrix& m, double beta) {
  const unsigned n = 1u << m.n_sites();
  std::vector<double> w(n);
  double mx = -INFINITY;
  for (unsigned s = 0; s < n; ++s) mx = std::max(mx, w[s] = minus_h(m, s, beta));
  double z = 0.0;
  for (auto& x : w) z += (x = std::exp(x - mx));
  for (auto& x : w) x /= z;
  return w;
}

inline std::vector<double> correlations(const levy::DisorderMatrix& m, double beta) {
  const int N = m.n_sites();
  auto w = gibbs_weights(m, beta);
  std::vector<double> c(N * N, 0.0);
  for (unsigned s = 0; s < w.size(); ++s)
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) c[i * N + j] += w[s] * spin_of(s, i) * spin_of(s, j);
  return c;
}

// E⟨R_k²⟩ summed over k independent replicas explicitly (k = 2 only).
inline double replica_R2_squared(const levy::DisorderMatrix& m, double beta) {
  const int N = m.n_sites();
  auto w = gibbs_weights(m, beta);
  double acc = 0.0;
  for (unsigned a = 0; a < w.size(); ++a)
    for (unsigned b = 0; b < w.size(); ++b) {
      double r = 0.0;
      for (int i = 0; i < N; ++i) r += spin_of(a, i) * spin_of(b, i);
      r /= N;
      acc += w[a] * w[b] * r * r;
    }
  return acc;
}

// ⟨Q_K⟩ over two explicit replicas.
inline double replica_Q(const levy::DisorderMatrix& m, double beta, double K) {
  const int N = m.n_sites();
  auto w = gibbs_weights(m, beta);
  std::vector<std::pair<int, int>> strong;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      if (std::fabs(m(i, j)) >= K) strong.push_back({i, j});
  if (strong.empty()) return 0.0;
  double acc = 0.0;
  for (unsigned a = 0; a < w.size(); ++a)
    for (unsigned b = 0; b < w.size(); ++b) {
      double q = 0.0;
      for (auto [i, j] : strong) q += spin_of(a, i) * spin_of(a, j) * spin_of(b, i) * spin_of(b, j);
      acc += w[a] * w[b] * q / strong.size();
    }
  return acc;
}

inline double ground_energy(const levy::DisorderMatrix& m) {
  double best = INFINITY;
  for (unsigned s = 0; s < (1u << m.n_sites()); ++s) best = std::min(best, -minus_h(m, s, 1.0));
  return best;
}

// ∫_lo^hi f(x) dx by tanh-sinh. An infinite upper limit with f ~ x^{-decay}
// is mapped onto (0,1] by x = A u^{-1/(decay-1)}, which makes the tail bounded.
inline double tanh_sinh_integral(const std::function<double(double)>& f, double lo, double hi, double decay = 0.0) {
  boost::math::quadrature::tanh_sinh<double> ts(15);
  auto safe = [](double v) { return std::isfinite(v) ? v : 0.0; };
  if (!std::isinf(hi)) return ts.integrate([&](double x) { return safe(f(x)); }, lo, hi, 1e-13);
  if (decay <= 1.0) {
    auto g = [&](double th) {
      double c = std::cos(th);
      return safe(f(std::tan(th)) / (c * c));
    };
    return ts.integrate(g, std::atan(lo), M_PI / 2, 1e-13);
  }
  const double A = std::max(lo, 1.0);
  double head = A > lo ? ts.integrate([&](double x) { return safe(f(x)); }, lo, A, 1e-13) : 0.0;
  const double m = 1.0 / (decay - 1.0);
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    double x = A * std::pow(u, -m);
    return safe(f(x) * m * x / u);
  };
  return head + ts.integrate(g, 0.0, 1.0, 1e-13);
}

}  // namespace oracle
