#include "levy/mcmc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "levy/errors.hpp"
#include "levy/stats.hpp"

namespace levy {

ChainState ChainState::from_spins(const DisorderMatrix& m, std::vector<double> spins, double beta) {
  require(static_cast<int>(spins.size()) == m.n_sites(), "spin vector size mismatch");
  ChainState c;
  c.spins = std::move(spins);
  c.beta = beta;
  const int n = m.n_sites();
  c.fields.assign(n, 0.0);
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* row = m.row(i);
    double h = 0.0;
    for (int j = 0; j < n; ++j) h += row[j] * c.spins[j];
    c.fields[i] = h;
    e += c.spins[i] * h;
  }
  c.energy = -0.5 * e;
  return c;
}

ChainState ChainState::random(const DisorderMatrix& m, double beta, Rng& rng) {
  std::vector<double> s(m.n_sites());
  for (auto& v : s) v = rng.sign();
  return from_spins(m, std::move(s), beta);
}

double ChainState::consistency_error(const DisorderMatrix& m) const {
  ChainState fresh = from_spins(m, spins, beta);
  double err = std::fabs(fresh.energy - energy);
  for (int i = 0; i < n_sites(); ++i) err = std::max(err, std::fabs(fresh.fields[i] - fields[i]));
  return err;
}

SpinConfig ChainState::config() const {
  std::vector<int> s(spins.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = spins[i] > 0 ? 1 : -1;
  return SpinConfig::from_spins(s);
}

MoveStats metropolis_sweep(ChainState& c, const DisorderMatrix& m, Rng& rng) {
  const int n = c.n_sites();
  MoveStats st;
  st.proposed = n;
  for (int step = 0; step < n; ++step) {
    int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    double dH = 2.0 * c.spins[i] * c.fields[i];
    if (dH > 0.0 && rng.uniform() >= std::exp(-c.beta * dH)) continue;
    ++st.accepted;
    double d = -2.0 * c.spins[i];
    c.spins[i] = -c.spins[i];
    c.energy += dH;
    const double* row = m.row(i);
    for (int j = 0; j < n; ++j) c.fields[j] += d * row[j];
  }
  ++c.sweep_count;
  return st;
}

std::vector<double> geometric_ladder(double beta_target, int rungs, double ratio) {
  require(beta_target >= 0.0, "beta must be >= 0");
  require(rungs >= 1, "ladder needs at least one rung");
  require(ratio >= 1.0, "ladder ratio must be >= 1");
  std::vector<double> b(rungs);
  for (int k = 0; k < rungs; ++k) {
    double frac = rungs == 1 ? 0.0 : static_cast<double>(rungs - 1 - k) / (rungs - 1);
    b[k] = beta_target * std::pow(ratio, -frac);
  }
  b.back() = beta_target;
  return b;
}

MoveStats tempering_step(std::vector<ChainState>& chains, Rng& rng) {
  MoveStats st;
  for (std::size_t k = 0; k + 1 < chains.size(); ++k)
    require(chains[k].beta <= chains[k + 1].beta, "tempering ladder must be nondecreasing in beta");
  for (std::size_t k = 0; k + 1 < chains.size(); ++k) {
    ++st.proposed;
    ChainState& a = chains[k];
    ChainState& b = chains[k + 1];
    double log_r = (b.beta - a.beta) * (b.energy - a.energy);
    if (log_r < 0.0 && rng.uniform() >= std::exp(log_r)) continue;
    ++st.accepted;
    std::swap(a.spins, b.spins);
    std::swap(a.fields, b.fields);
    std::swap(a.energy, b.energy);
  }
  return st;
}

namespace {

struct Replicas {
  std::vector<std::vector<ChainState>> ladders;
  MoveStats swaps;

  Replicas(const DisorderMatrix& m, double beta, int copies, const McmcBudget& b, Rng& rng) {
    auto betas = geometric_ladder(beta, b.rungs, b.beta_ratio);
    ladders.resize(copies);
    for (auto& l : ladders)
      for (double bk : betas) l.push_back(ChainState::random(m, bk, rng));
  }

  void sweep(const DisorderMatrix& m, Rng& rng) {
    for (auto& l : ladders) {
      for (auto& c : l) metropolis_sweep(c, m, rng);
      MoveStats s = tempering_step(l, rng);
      swaps.proposed += s.proposed;
      swaps.accepted += s.accepted;
    }
  }

  const ChainState& target(std::size_t r) const { return ladders[r].back(); }
};

// Burn-in until 20 τ_int of the target-rung energy, then production with
// thinning, then the observable series is summarized.
OverlapEstimate run_estimate(const DisorderMatrix& m, double beta, int copies, const McmcBudget& b, Rng& rng,
                             const std::function<double(const Replicas&)>& observe) {
  require(b.rungs >= 1 && b.production >= 100 && b.min_burn_in >= 100, "MCMC budget too small");
  Replicas rep(m, beta, copies, b, rng);
  std::vector<double> energy;
  std::int64_t burn = 0;
  auto run_burn = [&](std::int64_t sweeps) {
    for (std::int64_t s = 0; s < sweeps; ++s) {
      rep.sweep(m, rng);
      energy.push_back(rep.target(0).energy);
    }
    burn += sweeps;
  };
  run_burn(b.min_burn_in);
  double tau = autocorr_stderr(energy).tau_int;
  while (burn < static_cast<std::int64_t>(std::ceil(20.0 * tau)) && burn < b.max_burn_in) {
    run_burn(std::min<std::int64_t>(b.max_burn_in - burn, std::max<std::int64_t>(burn, 100)));
    std::vector<double> tail(energy.begin() + energy.size() / 2, energy.end());
    tau = autocorr_stderr(tail).tau_int;
  }
  std::int64_t thin = std::max<std::int64_t>(1, static_cast<std::int64_t>(tau / 2.0));
  std::vector<double> series, prod_energy;
  for (std::int64_t s = 1; s <= b.production; ++s) {
    rep.sweep(m, rng);
    if (s % thin == 0) {
      series.push_back(observe(rep));
      prod_energy.push_back(rep.target(0).energy);
    }
  }
  OverlapEstimate out;
  out.burn_in = burn;
  out.thin = thin;
  out.n_samples = static_cast<std::int64_t>(series.size());
  if (series.size() < 100)
    throw ConvergenceError("MCMC: fewer than 100 thinned samples; raise the production budget");
  AutocorrResult ac = autocorr_stderr(series);
  out.mean = ac.mean;
  out.stderr_ = ac.stderr_;
  out.tau_int = ac.tau_int;
  out.geweke_z = geweke_z(prod_energy);
  out.swap_rate = rep.swaps.proposed ? static_cast<double>(rep.swaps.accepted) / rep.swaps.proposed : 0.0;
  if (static_cast<double>(out.n_samples) / (2.0 * out.tau_int) < b.min_effective)
    throw ConvergenceError("MCMC: effective sample size below budget minimum (tau_int too large)");
  return out;
}

}  // namespace

OverlapEstimate estimate_site_overlap(const DisorderMatrix& m, double beta, int k, const McmcBudget& budget,
                                      Rng& rng) {
  require(k >= 2 && k % 2 == 0, "site overlap order k must be even and >= 2");
  const int n = m.n_sites();
  return run_estimate(m, beta, k, budget, rng, [n, k](const Replicas& rep) {
    double r = 0.0;
    for (int i = 0; i < n; ++i) {
      double p = 1.0;
      for (int c = 0; c < k; ++c) p *= rep.target(c).spins[i];
      r += p;
    }
    r /= n;
    return r * r;
  });
}

OverlapEstimate estimate_bond_overlap(const DisorderMatrix& m, double beta, double K, const McmcBudget& budget,
                                      Rng& rng) {
  std::vector<EdgeIndex> strong;
  for (std::size_t e = 0; e < m.n_edges(); ++e)
    if (std::fabs(m.edge_value(e)) >= K) strong.push_back(m.edge(e));
  if (strong.empty()) {
    OverlapEstimate z;
    z.n_samples = 1;
    return z;
  }
  const double inv = 1.0 / static_cast<double>(strong.size());
  return run_estimate(m, beta, 2, budget, rng, [&strong, inv](const Replicas& rep) {
    const auto& a = rep.target(0).spins;
    const auto& b = rep.target(1).spins;
    double q = 0.0;
    for (auto [i, j] : strong) q += a[i] * a[j] * b[i] * b[j];
    return q * inv;
  });
}

}  // namespace levy
