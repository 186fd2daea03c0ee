#include "levy/diluted.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "levy/errors.hpp"
#include "levy/exact.hpp"
#include "levy/parallel.hpp"
#include "levy/stats.hpp"

namespace levy {

DisorderMatrix PvbInstance::couplings() const {
  DisorderMatrix m(n_sites);
  for (const auto& e : edges) m.add(e.i, e.j, e.w);
  return m;
}

std::size_t PvbInstance::multiplicity(int i, int j) const {
  if (i > j) std::swap(i, j);
  std::size_t c = 0;
  for (const auto& e : edges) c += (e.i == i && e.j == j);
  return c;
}

DisorderMatrix VbInstance::couplings() const {
  DisorderMatrix m(n_sites);
  for (const auto& e : edges) m.set(e.i, e.j, e.w);
  return m;
}

PvbInstance sample_pvb(int N, double alpha, double eps, Rng& rng) {
  require(eps > 0.0, "eps must be positive");
  return sample_pvb(N, alpha, eps, std::pow(eps, -alpha), rng);
}

PvbInstance sample_pvb(int N, double alpha, double eps, double gamma, Rng& rng) {
  require(N >= 1, "N must be >= 1");
  require(eps > 0.0, "eps must be positive");
  require(gamma >= 0.0, "gamma must be >= 0");
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  PvbInstance p;
  p.n_sites = N;
  p.alpha = alpha;
  p.eps = eps;
  p.gamma = gamma;
  if (N < 2) return p;
  std::int64_t count = rng.poisson(gamma * N);
  p.edges.reserve(count);
  for (std::int64_t k = 0; k < count; ++k) {
    int i = static_cast<int>(rng.below(N));
    int j = static_cast<int>(rng.below(N - 1));
    if (j >= i) ++j;
    if (i > j) std::swap(i, j);
    p.edges.push_back({i, j, sample_g_eps(alpha, eps, rng)});
  }
  return p;
}

CoupledDraw sample_levy_pvb_coupled(int N, double alpha, double eps, double gamma, Rng& rng) {
  require(N >= 2, "N must be >= 2");
  require(eps > 0.0 && gamma > 0.0, "eps and gamma must be positive");
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  CouplingSampler cs(HeavyTailSpec::canonical(alpha), N);
  const double mu = 2.0 * gamma / (N - 1.0);
  const double q = -std::expm1(-mu);  // P(count >= 1)
  CoupledDraw d{DisorderMatrix(N), PvbInstance{}};
  d.pvb.n_sites = N;
  d.pvb.alpha = alpha;
  d.pvb.eps = eps;
  d.pvb.gamma = gamma;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      double u = rng.uniform_pos();
      double s = rng.sign();
      d.levy.set(i, j, s * cs.magnitude(u));
      if (u >= q) continue;
      // Given count >= 1, u/q is uniform and independent of the count.
      d.pvb.edges.push_back({i, j, s * eps * std::pow(u / q, -1.0 / alpha)});
      double v = std::exp(-mu) + q * rng.uniform();
      std::int64_t k = 0;
      double pk = std::exp(-mu), cdf = pk;
      while (cdf < v && k < 1000) {
        ++k;
        pk *= mu / k;
        cdf += pk;
      }
      for (std::int64_t e = 1; e < k; ++e) d.pvb.edges.push_back({i, j, sample_g_eps(alpha, eps, rng)});
    }
  return d;
}

VbInstance sample_vb(int N, double alpha, double eps, Rng& rng) {
  require(N >= 1, "N must be >= 1");
  require(eps > 0.0, "eps must be positive");
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  double p = std::pow(eps, -alpha) / N;
  require(p <= 1.0, "sample_vb: connectivity eps^{-alpha}/N exceeds 1");
  VbInstance v;
  v.n_sites = N;
  v.alpha = alpha;
  v.eps = eps;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j)
      if (rng.uniform() < p) v.edges.push_back({i, j, sample_g_eps(alpha, eps, rng)});
  return v;
}

DisorderMatrix truncate_weak(const DisorderMatrix& m, double eps) {
  DisorderMatrix t(m.n_sites());
  for (std::size_t e = 0; e < m.n_edges(); ++e) {
    double v = m.edge_value(e);
    if (std::fabs(v) >= eps) t.set(m.edge(e).i, m.edge(e).j, v);
  }
  return t;
}

void write_pvb_instance(std::ostream& out, const PvbInstance& p, double beta, std::uint64_t seed) {
  out << "levy_pvb_instance " << p.n_sites << ' ' << format_real(p.alpha) << ' ' << format_real(beta) << ' '
      << seed << ' ' << format_real(p.eps) << ' ' << format_real(p.gamma) << '\n';
  for (const auto& e : p.edges)
    out << e.i << ' ' << e.j << ' ' << format_real(e.w) << ' ' << p.multiplicity(e.i, e.j) << '\n';
}

PvbInstance read_pvb_instance(std::istream& in) {
  std::string line, tag;
  if (!std::getline(in, line)) throw ConfigError("pvb instance: empty input");
  std::istringstream hs(line);
  PvbInstance p;
  double beta;
  std::uint64_t seed;
  if (!(hs >> tag >> p.n_sites >> p.alpha >> beta >> seed >> p.eps >> p.gamma) || tag != "levy_pvb_instance")
    throw ConfigError("pvb instance: malformed header");
  std::vector<std::size_t> mult;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    WeightedEdge e;
    std::string w;
    std::size_t k;
    if (!(rs >> e.i >> e.j >> w >> k)) throw ConfigError("pvb instance: malformed row '" + line + "'");
    require(e.i >= 0 && e.i < e.j && e.j < p.n_sites, "pvb instance: edge endpoint out of range");
    e.w = std::strtod(w.c_str(), nullptr);
    p.edges.push_back(e);
    mult.push_back(k);
  }
  for (std::size_t r = 0; r < p.edges.size(); ++r)
    require(p.multiplicity(p.edges[r].i, p.edges[r].j) == mult[r], "pvb instance: inconsistent multiplicity");
  return p;
}

namespace {

double free_energy(const DisorderMatrix& m, double beta) {
  return exact_log_partition(m, beta).log_Z / m.n_sites();
}

}  // namespace

TruncationGapReport truncation_gap(double alpha, double beta, double eps, int N, int reps,
                                   std::uint64_t master_seed, int workers, double pvb_gamma) {
  require(alpha > 1.0 && alpha < 2.0, "truncation_gap needs alpha in (1,2)");
  require(N >= 2 && N <= 20, "truncation_gap needs 2 <= N <= 20");
  require(reps >= 2, "truncation_gap needs reps >= 2");
  require(eps > 0.0, "eps must be positive");
  TruncationGapReport r;
  r.alpha = alpha;
  r.beta = beta;
  r.eps = eps;
  r.N = N;
  r.reps = reps;
  r.pvb_gamma = pvb_gamma > 0.0 ? pvb_gamma : 0.5 * std::pow(eps, -alpha);
  r.truncation_bound = alpha * beta * beta * std::pow(eps, 2.0 - alpha) / (2.0 - alpha);
  r.levy_values.resize(reps);
  r.truncated_values.resize(reps);
  r.pvb_values.resize(reps);
  const std::uint64_t sid = stream_id_of("truncation_gap");
  parallel_for(reps, workers, [&](std::size_t k) {
    Rng rng(master_seed, sid, k);
    CoupledDraw d = sample_levy_pvb_coupled(N, alpha, eps, r.pvb_gamma, rng);
    r.levy_values[k] = free_energy(d.levy, beta);
    r.truncated_values[k] = free_energy(truncate_weak(d.levy, eps), beta);
    r.pvb_values[k] = free_energy(d.pvb.couplings(), beta);
  });
  auto a = mean_stderr(r.levy_values), t = mean_stderr(r.truncated_values), p = mean_stderr(r.pvb_values);
  r.F_levy = a.mean;
  r.F_levy_se = a.stderr_;
  r.F_truncated = t.mean;
  r.F_truncated_se = t.stderr_;
  r.F_pvb = p.mean;
  r.F_pvb_se = p.stderr_;
  std::vector<double> diff(reps);
  for (int k = 0; k < reps; ++k) diff[k] = r.levy_values[k] - r.pvb_values[k];
  auto g = mean_stderr(diff);
  r.gap_pvb = g.mean;
  r.gap_pvb_se = g.stderr_;
  for (int k = 0; k < reps; ++k) diff[k] = r.levy_values[k] - r.truncated_values[k];
  auto d = mean_stderr(diff);
  r.gap_truncated = d.mean;
  r.gap_truncated_se = d.stderr_;
  return r;
}

std::vector<SuperadditivityReport> superadditivity_experiment(DilutedModel model, double alpha, double beta,
                                                              const std::vector<SizePair>& sizes, int reps,
                                                              double eps, std::uint64_t master_seed,
                                                              int workers) {
  require(alpha > 0.0 && alpha < 2.0, "alpha must lie in (0,2)");
  require(reps >= 2, "superadditivity needs reps >= 2");
  if (model == DilutedModel::pvb) require(alpha > 1.0 && eps > 0.0, "PVB superadditivity needs alpha > 1, eps > 0");
  std::vector<SuperadditivityReport> out;
  const std::uint64_t sid = stream_id_of(model == DilutedModel::pvb ? "superadditivity_pvb" : "superadditivity_levy");
  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const int M = sizes[s].M, N = sizes[s].N;
    require(M >= 1 && N >= 1, "sizes must be >= 1");
    if (M + N > kMaxCorrelationN)
      throw ResourceGuardError("superadditivity: M+N = " + std::to_string(M + N) + " exceeds 24");
    std::vector<double> defect(reps);
    parallel_for(reps, workers, [&](std::size_t k) {
      Rng rng(master_seed, sid, (static_cast<std::uint64_t>(s) << 32) | k);
      auto log_z = [&](int n) {
        if (model == DilutedModel::pvb) return exact_log_partition(sample_pvb(n, alpha, eps, rng).couplings(), beta).log_Z;
        return exact_log_partition(sample_disorder(HeavyTailSpec::canonical(alpha), n, rng, false), beta).log_Z;
      };
      double zmn = log_z(M + N);
      double zm = log_z(M);
      double zn = log_z(N);
      defect[k] = zmn - zm - zn;
    });
    auto ms = mean_stderr(defect);
    SuperadditivityReport r;
    r.model = model;
    r.M = M;
    r.N = N;
    r.reps = reps;
    r.alpha = alpha;
    r.beta = beta;
    r.eps = eps;
    r.defect = ms.mean;
    r.defect_se = ms.stderr_;
    if (model == DilutedModel::pvb) {
      r.gamma = std::pow(eps, -alpha);
      r.pvb_bound = 6.0 * beta * r.gamma * alpha * eps / (alpha - 1.0);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace levy
