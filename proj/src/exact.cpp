#include "levy/exact.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "levy/errors.hpp"
#include "levy/math_util.hpp"
#include "levy/parallel.hpp"

namespace levy {

SpinConfig SpinConfig::from_spins(const std::vector<int>& s) {
  require(!s.empty() && s.size() <= 32, "spin config size must be in [1,32]");
  SpinConfig c;
  c.n = static_cast<int>(s.size());
  for (int i = 0; i < c.n; ++i) {
    require(s[i] == 1 || s[i] == -1, "spins must be +1 or -1");
    if (s[i] < 0) c.bits |= (1u << i);
  }
  return c;
}

SpinConfig SpinConfig::flipped() const {
  SpinConfig c = *this;
  c.bits = ~bits & (n == 32 ? 0xffffffffu : ((1u << n) - 1u));
  return c;
}

double hamiltonian(const DisorderMatrix& m, const SpinConfig& sigma, double beta) {
  require(sigma.n == m.n_sites(), "spin config size does not match the instance");
  double e = 0.0;
  for (int i = 0; i < m.n_sites(); ++i) {
    const double* row = m.row(i);
    double acc = 0.0;
    for (int j = i + 1; j < m.n_sites(); ++j) acc += row[j] * sigma.spin(j);
    e += sigma.spin(i) * acc;
  }
  return beta * e;
}

double log_Z_bar(const DisorderMatrix& m, double beta) {
  double s = 0.0;
  for (std::size_t e = 0; e < m.n_edges(); ++e) s += log_cosh(beta * m.edge_value(e));
  return s;
}

namespace {

void guard(const DisorderMatrix& m, int limit, const char* what) {
  if (m.n_sites() > limit)
    throw ResourceGuardError(std::string(what) + ": N = " + std::to_string(m.n_sites()) +
                             " exceeds the enumeration limit " + std::to_string(limit));
}

// Walks the 2^{N-1} configurations with σ_{N-1} = +1 in Gray-code order.
// Every observable used here is invariant under the global flip.
class GrayWalker {
 public:
  GrayWalker(const DisorderMatrix& m, double beta) : m_(m), beta_(beta), n_(m.n_sites()) {
    s_.assign(n_, 1.0);
    h_.assign(n_, 0.0);
  }

  std::uint64_t states() const { return std::uint64_t{1} << (n_ - 1); }

  void start(std::uint64_t t) {
    bits_ = static_cast<std::uint32_t>(t ^ (t >> 1));
    for (int i = 0; i < n_; ++i) s_[i] = ((bits_ >> i) & 1u) ? -1.0 : 1.0;
    e_ = 0.0;
    for (int i = 0; i < n_; ++i) {
      const double* row = m_.row(i);
      double acc = 0.0;
      for (int j = 0; j < n_; ++j) acc += row[j] * s_[j];
      h_[i] = acc;
      e_ += s_[i] * acc;
    }
    e_ *= 0.5 * beta_;
  }

  // Advance from Gray index t-1 to t.
  void step(std::uint64_t t) {
    int k = __builtin_ctzll(t);
    e_ -= 2.0 * beta_ * s_[k] * h_[k];
    s_[k] = -s_[k];
    bits_ ^= (1u << k);
    const double d = 2.0 * s_[k];
    const double* row = m_.row(k);
    for (int j = 0; j < n_; ++j) h_[j] += d * row[j];
  }

  double neg_energy() const { return e_; }
  std::uint32_t bits() const { return bits_; }
  const double* spins() const { return s_.data(); }

 private:
  const DisorderMatrix& m_;
  double beta_;
  int n_;
  std::vector<double> s_;
  std::vector<double> h_;
  double e_ = 0.0;
  std::uint32_t bits_ = 0;
};

constexpr int kSegmentsLog2 = 6;

// Runs visit(segment_state, walker) over each segment; states are created by
// make(). Returns per-segment states in segment order.
template <class State, class Make, class Visit>
std::vector<State> run_segments(const DisorderMatrix& m, double beta, int workers, Make make, Visit visit) {
  GrayWalker probe(m, beta);
  const std::uint64_t total = probe.states();
  const int seg_log2 = std::min<int>(kSegmentsLog2, m.n_sites() - 1);
  const std::uint64_t segments = std::uint64_t{1} << seg_log2;
  const std::uint64_t len = total / segments;
  std::vector<State> out;
  out.reserve(segments);
  for (std::uint64_t s = 0; s < segments; ++s) out.push_back(make());
  parallel_for(segments, workers, [&](std::size_t s) {
    GrayWalker w(m, beta);
    std::uint64_t t0 = s * len, t1 = t0 + len;
    w.start(t0);
    visit(out[s], w);
    for (std::uint64_t t = t0 + 1; t < t1; ++t) {
      w.step(t);
      visit(out[s], w);
    }
  });
  return out;
}

struct LseState {
  LogSumExp lse;
};

double log_partition_half(const DisorderMatrix& m, double beta, int workers, double* max_out = nullptr) {
  auto segs = run_segments<LseState>(
      m, beta, workers, [] { return LseState{}; },
      [](LseState& st, const GrayWalker& w) { st.lse.add(w.neg_energy()); });
  double mx = -INFINITY;
  for (auto& s : segs) mx = std::max(mx, s.lse.max);
  double sum = 0.0;
  for (auto& s : segs) sum += s.lse.sum * std::exp(s.lse.max - mx);
  if (max_out) *max_out = mx;
  return mx + std::log(sum);
}

}  // namespace

ExactThermo exact_log_partition(const DisorderMatrix& m, double beta, int workers) {
  guard(m, kMaxLogPartitionN, "exact_log_partition");
  ExactThermo t;
  t.beta = beta;
  t.log_Z = std::log(2.0) + log_partition_half(m, beta, workers);
  t.log_Z_bar = log_Z_bar(m, beta);
  t.log_Z_hat = t.log_Z - t.log_Z_bar;
  return t;
}

std::vector<double> pair_correlations(const DisorderMatrix& m, double beta, int workers) {
  guard(m, kMaxCorrelationN, "pair_correlations");
  const int n = m.n_sites();
  double shift = 0.0;
  double log_half = log_partition_half(m, beta, workers, &shift);
  struct Acc {
    std::vector<double> c;
  };
  auto segs = run_segments<Acc>(
      m, beta, workers, [n] { return Acc{std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)}; },
      [&](Acc& a, const GrayWalker& w) {
        double wt = std::exp(w.neg_energy() - shift);
        const double* s = w.spins();
        for (int i = 0; i < n; ++i) {
          double wi = wt * s[i];
          double* row = a.c.data() + static_cast<std::size_t>(i) * n;
          for (int j = i + 1; j < n; ++j) row[j] += wi * s[j];
        }
      });
  std::vector<double> c(static_cast<std::size_t>(n) * n, 0.0);
  for (auto& s : segs)
    for (std::size_t k = 0; k < c.size(); ++k) c[k] += s.c[k];
  double norm = std::exp(shift - log_half);
  for (int i = 0; i < n; ++i) {
    c[static_cast<std::size_t>(i) * n + i] = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double v = std::clamp(c[static_cast<std::size_t>(i) * n + j] * norm, -1.0, 1.0);
      c[static_cast<std::size_t>(i) * n + j] = v;
      c[static_cast<std::size_t>(j) * n + i] = v;
    }
  }
  return c;
}

double site_overlap_moment(const std::vector<double>& corr, int n, int k) {
  require(k >= 2 && k % 2 == 0, "site overlap order k must be even and >= 2");
  require(corr.size() == static_cast<std::size_t>(n) * n, "correlation table size mismatch");
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += std::pow(corr[static_cast<std::size_t>(i) * n + j], k);
  return (n + 2.0 * s) / (static_cast<double>(n) * n);
}

double site_overlap_moment(const DisorderMatrix& m, double beta, int k, int workers) {
  guard(m, kMaxCorrelationN, "site_overlap_moment");
  return site_overlap_moment(pair_correlations(m, beta, workers), m.n_sites(), k);
}

namespace {
std::vector<std::size_t> strong_edges(const DisorderMatrix& m, double K) {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < m.n_edges(); ++e)
    if (std::fabs(m.edge_value(e)) >= K) out.push_back(e);
  return out;
}
}  // namespace

double bond_overlap_mean(const std::vector<double>& corr, const DisorderMatrix& m, double K) {
  auto strong = strong_edges(m, K);
  if (strong.empty()) return 0.0;
  const int n = m.n_sites();
  double s = 0.0;
  for (auto e : strong) {
    auto [i, j] = m.edge(e);
    double c = corr[static_cast<std::size_t>(i) * n + j];
    s += c * c;
  }
  return s / static_cast<double>(strong.size());
}

BondOverlapStats bond_overlap_stats(const DisorderMatrix& m, double beta, double K, int workers) {
  guard(m, kMaxFourPointN, "bond_overlap_stats");
  BondOverlapStats out;
  auto strong = strong_edges(m, K);
  out.strong_edges = strong.size();
  if (strong.empty()) return out;
  const std::size_t M = strong.size();
  std::vector<EdgeIndex> ends;
  for (auto e : strong) ends.push_back(m.edge(e));
  double shift = 0.0;
  double log_half = log_partition_half(m, beta, workers, &shift);
  struct Acc {
    std::vector<double> two;   // ⟨σ_e⟩
    std::vector<double> four;  // ⟨σ_e σ_f⟩, e <= f
    std::vector<double> v;
  };
  auto segs = run_segments<Acc>(
      m, beta, workers,
      [M] { return Acc{std::vector<double>(M, 0.0), std::vector<double>(M * M, 0.0), std::vector<double>(M)}; },
      [&](Acc& a, const GrayWalker& w) {
        double wt = std::exp(w.neg_energy() - shift);
        const double* s = w.spins();
        for (std::size_t e = 0; e < M; ++e) a.v[e] = s[ends[e].i] * s[ends[e].j];
        for (std::size_t e = 0; e < M; ++e) {
          double we = wt * a.v[e];
          a.two[e] += we;
          double* row = a.four.data() + e * M;
          for (std::size_t f = e + 1; f < M; ++f) row[f] += we * a.v[f];
        }
      });
  std::vector<double> two(M, 0.0), four(M * M, 0.0);
  for (auto& s : segs) {
    for (std::size_t e = 0; e < M; ++e) two[e] += s.two[e];
    for (std::size_t k = 0; k < M * M; ++k) four[k] += s.four[k];
  }
  double norm = std::exp(shift - log_half);
  double mean = 0.0, second = 0.0;
  for (std::size_t e = 0; e < M; ++e) {
    double c = two[e] * norm;
    mean += c * c;
    second += 1.0;  // e = f: σ_e² = 1
    for (std::size_t f = e + 1; f < M; ++f) {
      double c4 = four[e * M + f] * norm;
      second += 2.0 * c4 * c4;
    }
  }
  out.mean = mean / M;
  out.second_moment = second / (static_cast<double>(M) * M);
  return out;
}

double gibbs_alignment(const DisorderMatrix& m, double beta, int R, int workers) {
  guard(m, kMaxCorrelationN, "gibbs_alignment");
  require(R >= 1 && static_cast<std::size_t>(R) <= m.n_edges(), "R must be in [1, edge count]");
  require(m.has_rank(), "gibbs_alignment needs ranked edges");
  std::vector<EdgeIndex> ends;
  std::vector<double> sign;
  for (int r = 0; r < R; ++r) {
    std::size_t e = m.by_rank()[r];
    ends.push_back(m.edge(e));
    sign.push_back(m.edge_value(e) >= 0.0 ? 1.0 : -1.0);
  }
  struct Acc {
    LogSumExp all, hit;
  };
  auto segs = run_segments<Acc>(
      m, beta, workers, [] { return Acc{}; },
      [&](Acc& a, const GrayWalker& w) {
        double e = w.neg_energy();
        a.all.add(e);
        const double* s = w.spins();
        for (int r = 0; r < R; ++r)
          if (sign[r] * s[ends[r].i] * s[ends[r].j] <= 0.0) return;
        a.hit.add(e);
      });
  LogSumExp all, hit;
  for (auto& s : segs) {
    if (s.all.sum > 0) all.add(s.all.value());
    if (s.hit.sum > 0) hit.add(s.hit.value());
  }
  if (hit.sum == 0.0) return 0.0;
  return std::exp(hit.value() - all.value());
}

GroundState ground_state(const DisorderMatrix& m, int workers) {
  guard(m, kMaxLogPartitionN, "ground_state");
  struct Best {
    double e = -INFINITY;
    std::uint32_t bits = 0;
  };
  auto segs = run_segments<Best>(
      m, 1.0, workers, [] { return Best{}; },
      [](Best& b, const GrayWalker& w) {
        if (w.neg_energy() > b.e) {
          b.e = w.neg_energy();
          b.bits = w.bits();
        }
      });
  Best best;
  for (auto& s : segs)
    if (s.e > best.e) best = s;
  GroundState g;
  g.sigma.n = m.n_sites();
  g.sigma.bits = best.bits;
  g.energy = -hamiltonian(m, g.sigma, 1.0);
  return g;
}

}  // namespace levy
