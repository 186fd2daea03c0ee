#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace levy {

struct Param {
  std::string key;
  bool numeric = true;
  double number = 0.0;
  std::string text;
};

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One measurement of one experiment. verdict is "pass", "fail", "soft_pass",
// "soft_fail" or "info"; only "fail" counts against --check.
struct ResultRecord {
  std::string experiment;
  std::string label;
  std::vector<Param> parameters;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  double estimate = kNaN;
  double stderr_ = kNaN;
  double theory_value = kNaN;
  std::string theory_ref;
  double statistic = kNaN;
  double p_value = kNaN;
  std::string verdict = "info";

  ResultRecord& param(const std::string& key, double v);
  ResultRecord& param(const std::string& key, const std::string& v);
  const Param* find_param(const std::string& key) const;
};

void emit_csv(std::ostream& out, const std::vector<ResultRecord>& records);
void emit_jsonl(std::ostream& out, const std::vector<ResultRecord>& records);
std::vector<ResultRecord> parse_jsonl(std::istream& in);

// Writes to path by format ("csv" or "jsonl"); throws ConfigError when the
// file cannot be opened.
void emit_file(const std::string& path, const std::string& format, const std::vector<ResultRecord>& records);

}  // namespace levy
