#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "levy/disorder.hpp"
#include "levy/errors.hpp"
#include "levy/exact.hpp"
#include "levy/experiments.hpp"
#include "levy/heavy_tail.hpp"
#include "levy/quadrature.hpp"
#include "levy/rng.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitCheck = 4;

struct ExperimentArgs {
  std::string config_path;
  std::map<std::string, std::string> overrides;
  std::vector<std::string> sets;
  bool check = false;
};

std::string format_with_error(const levy::FormulaResult& r) {
  return levy::format_real(r.value) + " +- " + levy::format_real(r.error_estimate);
}

int run_experiment(const std::string& name, const ExperimentArgs& args) {
  levy::ExperimentConfig cfg = args.config_path.empty() ? levy::ExperimentConfig() : levy::ExperimentConfig::load(args.config_path);
  if (cfg.has("experiment") && cfg.experiment() != name)
    throw levy::ConfigError("config file names experiment '" + cfg.experiment() + "' but the subcommand is '" + name + "'");
  cfg.set("experiment", name);
  for (const auto& kv : args.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw levy::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  for (const auto& [k, v] : args.overrides)
    if (!v.empty()) cfg.set(k, v);

  std::string output = cfg.get_string("output", "");
  std::string format = cfg.get_string("format", output.size() > 4 && output.substr(output.size() - 4) == ".csv" ? "csv" : "jsonl");
  if (format != "csv" && format != "jsonl") throw levy::ConfigError("format must be csv or jsonl");

  auto records = levy::run(cfg);
  if (output.empty()) {
    if (format == "csv") levy::emit_csv(std::cout, records);
    else levy::emit_jsonl(std::cout, records);
  } else {
    levy::emit_file(output, format, records);
  }
  if (args.check && levy::any_failed(records)) {
    for (const auto& r : records)
      if (r.verdict == "fail") std::fprintf(stderr, "check failed: %s/%s\n", r.experiment.c_str(), r.label.c_str());
    return kExitCheck;
  }
  return 0;
}

struct FormulaArgs {
  std::string name;
  double alpha = 1.5;
  double beta = -1.0;
  double beta_fraction = -1.0;
  double K = 1.0;
  double N = 100;
  int ell = 1;
  int k = 0;
  double tail_power = 0.0;
  std::string integrand = "tanh_sq";
};

int run_formula(const FormulaArgs& a) {
  if (a.beta >= 0 && a.beta_fraction >= 0) throw levy::ConfigError("give either --beta or --beta_fraction, not both");
  double beta = a.beta >= 0 ? a.beta : levy::beta_from_fraction(a.alpha, a.beta_fraction >= 0 ? a.beta_fraction : 0.5);
  const std::string& n = a.name;
  std::string out;
  if (n == "beta_alpha") out = format_with_error(levy::beta_alpha(a.alpha));
  else if (n == "free_energy_limit") out = format_with_error(levy::free_energy_limit(a.alpha, beta));
  else if (n == "centering_integral") out = format_with_error(levy::centering_integral(a.alpha, beta, static_cast<std::int64_t>(a.N)));
  else if (n == "bond_overlap_limit") {
    auto r = levy::bond_overlap_limit(a.alpha, beta, a.K);
    out = format_with_error(r.value) + " c_K=" + format_with_error(r.c_k);
  } else if (n == "gamma_ell") out = format_with_error(levy::gamma_ell(a.alpha, beta, a.ell));
  else if (n == "L_pmf") out = format_with_error(levy::L_pmf(a.alpha, beta, a.k));
  else if (n == "a_N") {
    auto spec = a.tail_power > 0 ? levy::HeavyTailSpec::log_power(a.alpha, a.tail_power) : levy::HeavyTailSpec::canonical(a.alpha);
    spec.validate();
    out = levy::format_real(levy::compute_a_N(spec, a.N));
  } else if (n == "expectation_limit") {
    levy::LimitIntegrandSpec f;
    f.beta = beta;
    f.ell = a.ell;
    if (a.integrand == "tanh_sq") f.kind = levy::LimitIntegrand::tanh_sq;
    else if (a.integrand == "log_cosh") f.kind = levy::LimitIntegrand::log_cosh;
    else if (a.integrand == "x_tanh_pow") f.kind = levy::LimitIntegrand::x_tanh_pow;
    else if (a.integrand == "odd_identity") f.kind = levy::LimitIntegrand::odd_identity;
    else throw levy::ConfigError("unknown integrand '" + a.integrand + "'");
    out = format_with_error(levy::expectation_limit(f, a.alpha));
  } else {
    throw levy::ConfigError("unknown formula '" + n + "'");
  }
  std::printf("%s %s\n", n.c_str(), out.c_str());
  return 0;
}

struct InstanceArgs {
  double alpha = 1.5;
  double beta = 1.0;
  int N = 10;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string path;
};

int instance_dump(const InstanceArgs& a) {
  if (!a.seed_given) throw levy::ConfigError("--seed is mandatory");
  levy::require(a.N >= 1, "--N must be >= 1");
  auto spec = levy::HeavyTailSpec::canonical(a.alpha);
  spec.validate();
  levy::Rng rng(a.seed, levy::stream_id_of("instance"), 0);
  auto m = levy::sample_disorder(spec, a.N, rng, true);
  levy::InstanceHeader h{a.N, a.alpha, a.beta, a.seed};
  if (a.path.empty() || a.path == "-") {
    levy::write_instance(std::cout, m, h);
  } else {
    std::ofstream f(a.path);
    if (!f) throw levy::ConfigError("cannot write '" + a.path + "'");
    levy::write_instance(f, m, h);
  }
  return 0;
}

int instance_load(const InstanceArgs& a) {
  std::ifstream f(a.path);
  if (!f) throw levy::ConfigError("cannot read '" + a.path + "'");
  levy::InstanceHeader h;
  auto m = levy::read_instance(f, &h);
  if (m.n_sites() > levy::kMaxLogPartitionN)
    throw levy::ResourceGuardError("instance has N = " + std::to_string(m.n_sites()) + ", above the enumeration limit");
  auto t = levy::exact_log_partition(m, h.beta);
  auto g = levy::ground_state(m);
  std::printf("N %d\nalpha %s\nbeta %s\nseed %llu\n", m.n_sites(), levy::format_real(h.alpha).c_str(),
              levy::format_real(h.beta).c_str(), static_cast<unsigned long long>(h.seed));
  std::printf("log_Z %s\nlog_Z_bar %s\nlog_Z_hat %s\nground_energy %s\n", levy::format_real(t.log_Z).c_str(),
              levy::format_real(t.log_Z_bar).c_str(), levy::format_real(t.log_Z_hat).c_str(),
              levy::format_real(g.energy).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heavy-tailed spin glass experiments"};
  app.require_subcommand(1);

  std::map<std::string, ExperimentArgs> exp_args;
  for (const auto& name : levy::experiment_names()) exp_args[name];
  for (const auto& name : levy::experiment_names()) {
    auto& ea = exp_args[name];
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", ea.config_path, "key = value config file");
    sub->add_option("--set", ea.sets, "key=value override (repeatable)");
    sub->add_flag("--check", ea.check, "exit 4 when a hard criterion fails");
    for (const auto& key : levy::known_config_keys()) {
      if (key == "experiment") continue;
      sub->add_option("--" + key, ea.overrides[key], "override config key " + key);
    }
  }

  FormulaArgs fa;
  auto* formulas = app.add_subcommand("formulas", "print a quadrature constant");
  formulas->add_option("name", fa.name, "beta_alpha | free_energy_limit | centering_integral | bond_overlap_limit | "
                                        "gamma_ell | L_pmf | a_N | expectation_limit")->required();
  formulas->add_option("--alpha", fa.alpha);
  formulas->add_option("--beta", fa.beta);
  formulas->add_option("--beta_fraction", fa.beta_fraction);
  formulas->add_option("--K", fa.K);
  formulas->add_option("--N", fa.N);
  formulas->add_option("--ell", fa.ell);
  formulas->add_option("--k", fa.k);
  formulas->add_option("--tail_power", fa.tail_power, "log_power tail exponent for a_N");
  formulas->add_option("--integrand", fa.integrand);

  InstanceArgs ia;
  auto* instance = app.add_subcommand("instance", "dump or load disorder instances");
  instance->require_subcommand(1);
  auto* dump = instance->add_subcommand("dump", "sample a canonical instance");
  dump->add_option("--alpha", ia.alpha);
  dump->add_option("--beta", ia.beta);
  dump->add_option("--N", ia.N);
  dump->add_option("--seed", ia.seed)->each([&](const std::string&) { ia.seed_given = true; });
  dump->add_option("--output", ia.path);
  auto* load = instance->add_subcommand("load", "evaluate a stored instance exactly");
  load->add_option("path", ia.path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    for (const auto& name : levy::experiment_names())
      if (app.got_subcommand(name)) return run_experiment(name, exp_args[name]);
    if (app.got_subcommand(formulas)) return run_formula(fa);
    if (dump->parsed()) return instance_dump(ia);
    if (load->parsed()) return instance_load(ia);
  } catch (const levy::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const levy::ResourceGuardError& e) {
    std::fprintf(stderr, "resource guard: %s\n", e.what());
    return kExitGuard;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
