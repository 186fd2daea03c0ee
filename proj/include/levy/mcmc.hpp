#pragma once

#include <cstdint>
#include <vector>

#include "levy/disorder.hpp"
#include "levy/exact.hpp"
#include "levy/rng.hpp"

namespace levy {

struct ChainState {
  std::vector<double> spins;   // ±1
  std::vector<double> fields;  // h_i = Σ_j J_ij σ_j
  double beta = 0.0;
  double energy = 0.0;         // H = -Σ_{i<j} J_ij σ_i σ_j
  std::int64_t sweep_count = 0;

  static ChainState random(const DisorderMatrix& m, double beta, Rng& rng);
  static ChainState from_spins(const DisorderMatrix& m, std::vector<double> spins, double beta);
  int n_sites() const { return static_cast<int>(spins.size()); }
  // Largest deviation of cached fields and energy from a full recomputation.
  double consistency_error(const DisorderMatrix& m) const;
  SpinConfig config() const;
};

struct MoveStats {
  std::int64_t proposed = 0;
  std::int64_t accepted = 0;
};

// N single-site proposals at uniformly chosen sites.
MoveStats metropolis_sweep(ChainState& state, const DisorderMatrix& m, Rng& rng);

// β_target r^{-k/(rungs-1)} for k = rungs-1, ..., 0: increasing, ending at β_target.
std::vector<double> geometric_ladder(double beta_target, int rungs, double ratio = 8.0);

// Adjacent swap proposals k <-> k+1 for k = 0..K-2; betas must be nondecreasing.
MoveStats tempering_step(std::vector<ChainState>& chains, Rng& rng);

struct McmcBudget {
  int rungs = 8;
  double beta_ratio = 8.0;
  std::int64_t min_burn_in = 500;
  std::int64_t max_burn_in = 20000;
  std::int64_t production = 4000;  // sweeps after burn-in
  double min_effective = 20.0;     // required n_samples / (2 τ_int)
};

struct OverlapEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::int64_t n_samples = 0;
  double tau_int = 0.5;
  std::int64_t burn_in = 0;
  std::int64_t thin = 1;
  double geweke_z = 0.0;
  double swap_rate = 0.0;
};

// ⟨R_k²⟩ from k independent tempering ladders, measured on the target rung.
OverlapEstimate estimate_site_overlap(const DisorderMatrix& m, double beta, int k, const McmcBudget& budget,
                                      Rng& rng);
// ⟨Q_K⟩ from two ladders; exactly 0 when no edge has |J| >= K.
OverlapEstimate estimate_bond_overlap(const DisorderMatrix& m, double beta, double K, const McmcBudget& budget,
                                      Rng& rng);

}  // namespace levy
