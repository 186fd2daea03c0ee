#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "levy/errors.hpp"
#include "levy/experiments.hpp"
#include "levy/quadrature.hpp"

using namespace levy;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  auto d = fs::temp_directory_path() / ("levy_cli_test_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

int run_lab(const std::string& args) {
  const char* lab = std::getenv("LEVY_LAB");
  REQUIRE_MESSAGE(lab != nullptr, "LEVY_LAB must point at the levy_lab binary");
  int rc = std::system((std::string(lab) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  auto c = ExperimentConfig::parse("experiment = free_energy_ht\n# comment\nalpha = 1.5  # trailing\nN_grid = 10, 12\nseed = 42\n");
  CHECK(c.experiment() == "free_energy_ht");
  CHECK(c.get_double("alpha", 0) == 1.5);
  CHECK(c.get_grid("N_grid", {}) == std::vector<double>{10, 12});
  CHECK(c.master_seed() == 42);
  CHECK(c.get_int("reps", 7) == 7);
  CHECK_THROWS_AS(ExperimentConfig::parse("colour = blue\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("alpha 1.5\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("seed = -3\n").master_seed(), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig("free_energy_ht").master_seed(), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("alpha = x\n").get_double("alpha", 0), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("reps = 2.5\n").get_int("reps", 0), ConfigError);
}

TEST_CASE("run validates parameters") {
  ExperimentConfig c("free_energy_ht");
  c.set("seed", "1").set("N", 8.0);
  c.set("reps", 0.0);
  CHECK_THROWS_AS(run(c), ConfigError);
  c.set("reps", 3.0).set("alpha", 0.7);
  CHECK_THROWS_AS(run(c), ConfigError);
  c.set("alpha", 1.5).set("beta", 0.1).set("beta_fraction", 0.5);
  CHECK_THROWS_AS(run(c), ConfigError);
  ExperimentConfig u("no_such_experiment");
  u.set("seed", "1");
  CHECK_THROWS_AS(run(u), ConfigError);
  ExperimentConfig g("free_energy_ht");
  g.set("seed", "1").set("N", 31.0).set("reps", 2.0);
  CHECK_THROWS_AS(run(g), ResourceGuardError);
}

TEST_CASE("records carry theory values from the formula engine") {
  ExperimentConfig c("free_energy_ht");
  c.set("seed", "5").set("N", 8.0).set("reps", 6.0).set("beta_fraction", 0.5);
  auto recs = run(c);
  REQUIRE(recs.size() == 3);
  double beta = beta_from_fraction(1.5, 0.5);
  CHECK(recs[0].theory_value == std::log(2.0) + centering_integral(1.5, beta, 8).value / 8);
  CHECK(recs[2].theory_value == free_energy_limit(1.5, beta).value);
  CHECK(recs[0].values.size() == 6);
  CHECK(recs[0].seeds.size() == 6);
  CHECK(std::isfinite(recs[0].stderr_));
}

TEST_CASE("emitters: header-only CSV and bit-exact JSONL round trip") {
  std::ostringstream empty;
  emit_csv(empty, {});
  CHECK(empty.str() == "experiment,label,parameters,n_values,estimate,stderr,theory_value,theory_ref,statistic,p_value,verdict\n");

  ResultRecord r;
  r.experiment = "x";
  r.label = "needs \"quotes\", commas";
  r.param("alpha", 1.0 / 3.0).param("model", "pvb");
  r.values = {0.1, 1e-300, -2.5e17, 1.0 / 7.0};
  r.seeds = {1, 18446744073709551615ull};
  r.estimate = std::nextafter(1.0, 2.0);
  r.verdict = "pass";
  std::stringstream ss;
  emit_jsonl(ss, {r, r});
  auto back = parse_jsonl(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].label == r.label);
  CHECK(back[0].values == r.values);
  CHECK(back[0].seeds == r.seeds);
  CHECK(back[0].estimate == r.estimate);
  CHECK(std::isnan(back[0].stderr_));
  CHECK(back[0].find_param("alpha")->number == 1.0 / 3.0);
  CHECK(back[0].find_param("model")->text == "pvb");
  CHECK_THROWS_AS(emit_file("/nonexistent_dir/x.csv", "csv", {r}), ConfigError);
}

TEST_CASE("command line: exit codes, no output on config error, determinism") {
  auto dir = scratch_dir();
  auto out = dir / "r.jsonl";
  CHECK(run_lab("free_energy_ht --seed 3 --N 8 --reps 0 --output " + out.string()) == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(run_lab("free_energy_ht --N 8 --reps 2") == 2);
  CHECK(run_lab("free_energy_ht --seed 1 --bogus 3") == 2);
  CHECK(run_lab("free_energy_ht --seed 1 --N 40 --reps 2") == 3);
  CHECK(run_lab("gibbs_alignment --seed 1 --N_grid 12,6 --reps 3 --check") == 4);
  CHECK(run_lab("formulas beta_alpha --alpha 1.5") == 0);

  auto cfg = dir / "c.cfg";
  std::ofstream(cfg) << "experiment = universality_gap\nN_grid = 6, 8\nreps = 12\nseed = 77\n";
  auto a = dir / "a.jsonl", b = dir / "b.jsonl";
  CHECK(run_lab("universality_gap --config " + cfg.string() + " --workers 1 --output " + a.string()) == 0);
  CHECK(run_lab("universality_gap --config " + cfg.string() + " --workers 3 --output " + b.string()) == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK_FALSE(slurp(a).empty());
  CHECK(run_lab("free_energy_ht --config " + cfg.string()) == 2);

  auto inst = dir / "inst.txt";
  CHECK(run_lab("instance dump --N 6 --seed 4 --output " + inst.string()) == 0);
  CHECK(run_lab("instance load " + inst.string()) == 0);
  fs::remove_all(dir);
}
