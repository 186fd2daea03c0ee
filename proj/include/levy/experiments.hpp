#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "levy/records.hpp"

namespace levy {

// Flat key-value configuration. Keys outside known_config_keys() are errors.
class ExperimentConfig {
 public:
  ExperimentConfig() = default;
  explicit ExperimentConfig(std::string experiment) { set("experiment", std::move(experiment)); }

  // "key = value" lines, '#' comments.
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  ExperimentConfig& set(const std::string& key, const std::string& value);
  ExperimentConfig& set(const std::string& key, double value);
  bool has(const std::string& key) const { return kv_.count(key) > 0; }
  const std::map<std::string, std::string>& entries() const { return kv_; }

  std::string experiment() const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::vector<double> get_grid(const std::string& key, const std::vector<double>& fallback) const;
  std::uint64_t master_seed() const;
  int workers() const;

 private:
  std::map<std::string, std::string> kv_;
};

const std::vector<std::string>& known_config_keys();
const std::vector<std::string>& experiment_names();

// Runs the named experiment; records come back in a fixed order that
// depends only on the config.
std::vector<ResultRecord> run(const ExperimentConfig& config);

bool any_failed(const std::vector<ResultRecord>& records);

}  // namespace levy
