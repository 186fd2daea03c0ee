// Acceptance run: one line per criterion, exit status 1 when any selected
// criterion fails.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#include "levy/exact.hpp"
#include "levy/experiments.hpp"
#include "levy/heavy_tail.hpp"
#include "levy/math_util.hpp"
#include "levy/quadrature.hpp"
#include "levy/stats.hpp"
#include "oracles.hpp"

using namespace levy;

namespace {

std::uint64_t g_seed = 2026;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<ResultRecord> run_named(const std::string& name, const std::vector<std::pair<std::string, std::string>>& kv = {}) {
  ExperimentConfig c(name);
  c.set("seed", std::to_string(g_seed));
  for (const auto& [k, v] : kv) c.set(k, v);
  return run(c);
}

const ResultRecord& find(const std::vector<ResultRecord>& rs, const std::string& label, std::size_t nth = 0) {
  for (const auto& r : rs)
    if (r.label == label && nth-- == 0) return r;
  throw std::runtime_error("missing record " + label);
}

Outcome c1() {
  auto rs = run_named("free_energy_ht", {{"alpha", "1.5"}, {"beta_fraction", "0.5"}, {"N", "20"}, {"reps", "200"}});
  const auto& r = find(rs, "F_vs_centered");
  const auto& l = find(rs, "F_vs_limit");
  return {r.verdict == "pass", fmt("mean ln Z/N %.5f +- %.5f, centered prediction %.5f (z = %.2f)", r.estimate, r.stderr_,
                                   r.theory_value, r.statistic) +
                                   fmt("; N->inf limit %.5f (z = %.2f)", l.theory_value, l.statistic)};
}

Outcome ks_outcome(const std::vector<ResultRecord>& rs, const std::string& label) {
  const auto& r = find(rs, label);
  return {r.verdict == "pass", fmt("KS D = %.4f, p = %.4g", r.statistic, r.p_value)};
}

Outcome c2() { return ks_outcome(run_named("fluct_scalar"), "ks_vs_stable_limit"); }
Outcome c3() { return ks_outcome(run_named("fluct_effective"), "ks_vs_cycle_limit"); }

Outcome c4() {
  auto rs = run_named("overlaps_ht");
  const auto& t = find(rs, "R2_squared_trend");
  const auto& q = find(rs, "Q_K_vs_limit");
  const auto& e = find(rs, "mcmc_vs_exact");
  bool ok = t.verdict == "pass" && q.verdict == "pass" && e.verdict == "pass";
  return {ok, fmt("(a) slope %.3f", t.estimate) + (t.verdict == "pass" ? " ok" : " FAIL") +
                  fmt("; (b) Q_K %.4f +- %.4f vs %.4f", q.estimate, q.stderr_, q.theory_value) +
                  (q.verdict == "pass" ? " ok" : " FAIL") + fmt("; (c) max |z| %.2f", e.statistic) +
                  (e.verdict == "pass" ? " ok" : " FAIL")};
}

Outcome c5() {
  auto rs = run_named("truncation_gap");
  const auto& a = find(rs, "levy_minus_pvb", 0);
  const auto& b = find(rs, "levy_minus_pvb", 1);
  const auto& t = find(rs, "gap_trend");
  bool ok = a.verdict == "pass" && b.verdict == "pass" && t.verdict == "pass";
  return {ok, fmt("eps=1: %.4f +- %.4f (bound %.3f); ", a.estimate, a.stderr_, a.theory_value) +
                  fmt("eps=0.5: %.4f +- %.4f (bound %.3f); shrinks: ", b.estimate, b.stderr_, b.theory_value) +
                  (t.verdict == "pass" ? "yes" : "no")};
}

Outcome c6() {
  auto rs = run_named("superadditivity");
  const auto& z = find(rs, "beta0_defect");
  const auto& p = find(rs, "pvb_defect");
  std::string env;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& l = find(rs, "levy_defect", k);
    env += fmt(" %.3f", l.statistic);
  }
  return {z.verdict == "pass" && p.verdict == "pass",
          fmt("beta=0 defect %.1e; PVB defect %.4f +- %.4f >= -%.4f", z.estimate, p.estimate, p.stderr_, -p.theory_value) +
              "; Levy defect/(M+N) at 12,16,20:" + env};
}

Outcome c7() { return ks_outcome(run_named("sub1_limit"), "ks_vs_ppp_limit"); }

Outcome c8() {
  auto rs = run_named("gibbs_alignment");
  const auto& t = find(rs, "alignment_trend");
  const auto& s = find(rs, "alignment_threshold");
  std::string v;
  for (double x : t.values) v += fmt(" %.5f", x);
  return {t.verdict == "pass", "alignment at N=10,14,18,22:" + v + " (soft threshold 0.8: " + s.verdict + ")"};
}

Outcome c9() {
  auto rs = run_named("representation_check");
  bool ok = true;
  std::string d;
  for (const auto& r : rs) {
    ok &= r.verdict == "pass";
    d += fmt(" %.3g", r.p_value);
  }
  return {ok, "p-values for (n, alpha) in {500,2000}x{0.5,1.5}:" + d};
}

Outcome c10() {
  auto rs = run_named("rs_variational");
  const auto& q = find(rs, "Q_vs_free_energy_limit");
  const auto& z = find(rs, "Q_at_beta0");
  return {q.verdict == "pass" && z.verdict == "pass",
          fmt("Q = %.5f +- %.5f vs limit %.5f; |Q(0) - ln2| = %.1e", q.estimate, q.stderr_, q.theory_value, z.statistic)};
}

Outcome c11() {
  double worst_beta = 0.0;
  for (double a : {0.3, 0.5, 1.0, 1.5, 1.8}) {
    double b = beta_alpha(a).value;
    double res = a * power_integral(PowerKernel::tanh_power, 2, a + 1.0, b, 0.0, INFINITY).value - 1.0;
    worst_beta = std::max(worst_beta, std::fabs(res));
  }
  // Partial sums of P(L = 2k) at the configuration used by the cycle sampler.
  const double a = 1.5, b = 1.0;
  const int K = 200;
  double sum = 0.0;
  for (int k = 1; k <= K; ++k) sum += L_pmf(a, b, k).value;
  double pmf_gap = std::fabs(1.0 - sum);

  double worst_dual = 0.0;
  auto dual = [&](PowerKernel k, int ell, double p, double beta, double lo, double hi) {
    double x = power_integral(k, ell, p, beta, lo, hi).value;
    double y = oracle::tanh_sinh_integral(
        [=](double t) {
          if (t <= 0) return 0.0;
          double g = k == PowerKernel::log_cosh ? log_cosh(beta * t) : std::pow(std::tanh(beta * t), ell);
          return g * std::pow(t, -p);
        },
        lo, hi, k == PowerKernel::log_cosh ? p - 1.0 : p);
    worst_dual = std::max(worst_dual, std::fabs(x - y) / std::max(1.0, std::fabs(y)));
  };
  for (double al : {1.2, 1.5, 1.8}) {
    double bb = 0.5 * beta_alpha(al).value;
    dual(PowerKernel::log_cosh, 0, al + 1, bb, 0.0, INFINITY);
    dual(PowerKernel::tanh_power, 2, al + 1, bb, 1.0, INFINITY);
    dual(PowerKernel::tanh_power, 1, al, 1.0, 0.0, INFINITY);
    dual(PowerKernel::tanh_power, 9, al, 1.0, 0.0, INFINITY);
    dual(PowerKernel::log_cosh, 0, al + 1, 1.0, std::pow(20.0, -1 / al), std::pow(9.5, 1 / al));
  }
  for (int k = 1; k <= 30; ++k) worst_dual = std::max(worst_dual, std::fabs(L_pmf(a, b, k).value - L_pmf_telescoping(a, b, k).value));

  bool ok = worst_beta < 1e-8 && pmf_gap < 1e-4 && worst_dual < 1e-8;
  return {ok, fmt("beta_alpha residual %.1e; 1 - sum_{k<=200} P(L=2k) = %.4f; worst dual-method gap %.1e", worst_beta,
                  pmf_gap, worst_dual)};
}

Outcome c12() {
  auto rs = run_named("universality_gap");
  const auto& t = find(rs, "gap_trend");
  std::string v;
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& r = find(rs, "F_canonical_minus_log_power", k);
    v += fmt(" %.4f+-%.4f", r.estimate, r.stderr_);
  }
  return {t.verdict == "pass", "gap at N=10,14,18:" + v};
}

Outcome c13() {
  auto rs = run_named("concentration_scan");
  const auto& t = find(rs, "decay_exponent");
  std::string v;
  for (double x : t.values) v += fmt(" %.5f", x);
  return {t.verdict == "pass", "E|F-mean|^p at N=10,14,18,22:" + v + fmt("; fitted exponent %.3f", t.estimate)};
}

Outcome c14() {
  double worst = 0.0, worst_split = 0.0;
  std::size_t instances = 0;
  const std::uint64_t sid = stream_id_of("acceptance/engine");
  for (int N = 1; N <= 12; ++N)
    for (int k = 0; k < 100; ++k) {
      Rng rng(g_seed, sid, (static_cast<std::uint64_t>(N) << 32) | k);
      double alpha = 0.5 + 1.4 * rng.uniform();
      double beta = 2.0 * rng.uniform();
      auto m = sample_disorder(HeavyTailSpec::canonical(alpha), N, rng, false);
      auto t = exact_log_partition(m, beta);
      worst = std::max(worst, std::fabs(t.log_Z - oracle::log_Z(m, beta)));
      worst_split = std::max(worst_split, std::fabs(t.log_Z - t.log_Z_bar - t.log_Z_hat));
      if (N <= 10) worst_split = std::max(worst_split, std::fabs(t.log_Z_hat - oracle::log_Z_hat_product(m, beta)));
      ++instances;
    }
  const int N = 10, reps = 1000;
  const double beta = 0.5 * beta_alpha(1.5).value;
  std::vector<double> x(reps);
  for (int k = 0; k < reps; ++k) {
    Rng rng(g_seed, stream_id_of("acceptance/zhat"), k);
    auto t = exact_log_partition(sample_disorder(HeavyTailSpec::canonical(1.5), N, rng, false), beta);
    worst_split = std::max(worst_split, std::fabs(t.log_Z - t.log_Z_bar - t.log_Z_hat));
    x[k] = std::exp(t.log_Z_hat - N * std::log(2.0));
  }
  auto ms = mean_stderr(x);
  bool ok = worst < 1e-9 && worst_split < 1e-9 && std::fabs(ms.mean - 1.0) <= 3 * ms.stderr_;
  return {ok, fmt("%.0f instances: max |Gray - naive| %.1e, max split residual %.1e; E[Zhat/2^N] = %.5f", double(instances),
                  worst, worst_split, ms.mean) +
                  fmt(" +- %.5f", ms.stderr_)};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--only") && i + 1 < argc) only = std::atoi(argv[++i]);
    else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc) g_seed = std::strtoull(argv[++i], nullptr, 10);
    else {
      std::fprintf(stderr, "usage: acceptance [--only N] [--seed S]\n");
      return 2;
    }
  }
  const Criterion all[] = {
      {1, "high-temperature free energy", c1},     {2, "scalar fluctuation law", c2},
      {3, "effective fluctuation law", c3},        {4, "overlap concentration", c4},
      {5, "truncation bridge", c5},                {6, "superadditivity", c6},
      {7, "alpha<1 free-energy limit", c7},        {8, "Gibbs alignment", c8},
      {9, "order-statistics representation", c9}, {10, "variational consistency", c10},
      {11, "formula engine self-consistency", c11}, {12, "universality", c12},
      {13, "concentration scan", c13},            {14, "engine correctness", c14},
  };
  bool any_fail = false;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    any_fail |= !o.pass;
    std::printf("criterion %2d %s  %s: %s\n", c.id, o.pass ? "PASS" : "FAIL", c.title, o.detail.c_str());
    std::fflush(stdout);
  }
  return any_fail ? 1 : 0;
}
