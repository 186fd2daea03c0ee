#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "levy/disorder.hpp"
#include "levy/heavy_tail.hpp"
#include "levy/rng.hpp"

namespace levy {

struct WeightedEdge {
  int i;
  int j;  // i < j
  double w;
};

// Poisson multigraph: π(γN) edges with uniform endpoints and g_ε weights.
// Repeated pairs stay separate; weights are summed only in couplings().
struct PvbInstance {
  int n_sites = 0;
  double alpha = 0.0;
  double eps = 0.0;
  double gamma = 0.0;
  std::vector<WeightedEdge> edges;

  DisorderMatrix couplings() const;
  std::size_t multiplicity(int i, int j) const;
};

// Simple graph: each pair present with probability ε^{-α}/N, g_ε weights.
struct VbInstance {
  int n_sites = 0;
  double alpha = 0.0;
  double eps = 0.0;
  std::vector<WeightedEdge> edges;

  DisorderMatrix couplings() const;
};

// γ = ε^{-α}.
PvbInstance sample_pvb(int N, double alpha, double eps, Rng& rng);
PvbInstance sample_pvb(int N, double alpha, double eps, double gamma, Rng& rng);
VbInstance sample_vb(int N, double alpha, double eps, Rng& rng);

// One Lévy instance and one PVB instance on a shared draw. Per pair, the
// Lévy uniform u decides both |J| and whether the PVB count is positive, so
// the edges largely coincide; each marginal law is exact. PVB pair counts are
// Poisson(2γ/(N-1)), the same law as π(γN) uniform pairs.
struct CoupledDraw {
  DisorderMatrix levy;
  PvbInstance pvb;
};
CoupledDraw sample_levy_pvb_coupled(int N, double alpha, double eps, double gamma, Rng& rng);

// J_ij 1{|J_ij| >= ε}.
DisorderMatrix truncate_weak(const DisorderMatrix& m, double eps);

// PVB text format: the exact-module header with tag levy_pvb_instance and
// extra fields eps gamma, then rows "i j w multiplicity", one per edge.
void write_pvb_instance(std::ostream& out, const PvbInstance& p, double beta, std::uint64_t seed);
PvbInstance read_pvb_instance(std::istream& in);

// F = ln Z / N for each flavour, all three computed
// on the same coupling draw.
struct TruncationGapReport {
  double alpha = 0.0, beta = 0.0, eps = 0.0;
  int N = 0;
  int reps = 0;
  double pvb_gamma = 0.0;
  double F_levy = 0.0, F_levy_se = 0.0;
  double F_truncated = 0.0, F_truncated_se = 0.0;
  double F_pvb = 0.0, F_pvb_se = 0.0;
  double gap_pvb = 0.0, gap_pvb_se = 0.0;              // E F_levy - E F_pvb, paired
  double gap_truncated = 0.0, gap_truncated_se = 0.0;  // paired
  double truncation_bound = 0.0;                            // αβ²ε^{2-α}/(2-α)
  std::vector<double> levy_values, truncated_values, pvb_values;
};

// The PVB side uses γ = ε^{-α}/2 unless pvb_gamma > 0 is given: that choice
// matches the truncated model's mean edge count ε^{-α}(N-1)/2 to O(1).
TruncationGapReport truncation_gap(double alpha, double beta, double eps, int N, int reps,
                                   std::uint64_t master_seed, int workers = 1, double pvb_gamma = 0.0);

enum class DilutedModel { levy, pvb };

struct SizePair {
  int M;
  int N;
};

struct SuperadditivityReport {
  DilutedModel model = DilutedModel::levy;
  int M = 0, N = 0, reps = 0;
  double alpha = 0.0, beta = 0.0, eps = 0.0, gamma = 0.0;
  double defect = 0.0, defect_se = 0.0;  // E ln Z_{M+N} - E ln Z_M - E ln Z_N
  double pvb_bound = 0.0;                // 6 β γ E|g_ε| for the PVB case
};

std::vector<SuperadditivityReport> superadditivity_experiment(DilutedModel model, double alpha, double beta,
                                                              const std::vector<SizePair>& sizes, int reps,
                                                              double eps, std::uint64_t master_seed,
                                                              int workers = 1);

}  // namespace levy
