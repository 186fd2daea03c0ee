#pragma once

#include <cstdint>
#include <vector>

#include "levy/disorder.hpp"

namespace levy {

inline constexpr int kMaxLogPartitionN = 30;
inline constexpr int kMaxCorrelationN = 24;
inline constexpr int kMaxFourPointN = 14;

// Bit i set means σ_i = -1.
struct SpinConfig {
  std::uint32_t bits = 0;
  int n = 0;

  int spin(int i) const { return ((bits >> i) & 1u) ? -1 : 1; }
  static SpinConfig from_spins(const std::vector<int>& s);
  SpinConfig flipped() const;
};

struct ExactThermo {
  double log_Z = 0.0;
  double log_Z_bar = 0.0;  // Σ ln cosh(βJ_ij)
  double log_Z_hat = 0.0;  // log_Z - log_Z_bar
  double beta = 0.0;
};

// -H(σ) = β Σ_{i<j} J_ij σ_i σ_j.
double hamiltonian(const DisorderMatrix& m, const SpinConfig& sigma, double beta);

double log_Z_bar(const DisorderMatrix& m, double beta);

// Enumeration work is split into a fixed number of Gray-code segments that
// are reduced in segment order, so results do not depend on `workers`.
ExactThermo exact_log_partition(const DisorderMatrix& m, double beta, int workers = 1);

// ⟨σ_iσ_j⟩ as a dense N×N table (diagonal 1).
std::vector<double> pair_correlations(const DisorderMatrix& m, double beta, int workers = 1);

// E_Gibbs⟨R_k²⟩ = N^{-2} (N + Σ_{i≠j} ⟨σ_iσ_j⟩^k), from given correlations.
double site_overlap_moment(const std::vector<double>& correlations, int n_sites, int k);
double site_overlap_moment(const DisorderMatrix& m, double beta, int k, int workers = 1);

struct BondOverlapStats {
  double mean = 0.0;
  double second_moment = 0.0;
  std::size_t strong_edges = 0;
};
// Exact ⟨Q_K⟩ and ⟨Q_K²⟩ over edges with |J| >= K; both 0 when no edge qualifies.
BondOverlapStats bond_overlap_stats(const DisorderMatrix& m, double beta, double K, int workers = 1);
// ⟨Q_K⟩ only, from pair correlations (N <= 24).
double bond_overlap_mean(const std::vector<double>& correlations, const DisorderMatrix& m, double K);

// Gibbs probability that the R heaviest edges (by stored rank) are all
// satisfied, i.e. J_e σ_i σ_j > 0.
double gibbs_alignment(const DisorderMatrix& m, double beta, int R, int workers = 1);

struct GroundState {
  SpinConfig sigma;
  double energy = 0.0;  // min over σ of -Σ J σσ
};
GroundState ground_state(const DisorderMatrix& m, int workers = 1);

}  // namespace levy
