#include "levy/records.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <json.hpp>
#include <ostream>

#include "levy/disorder.hpp"
#include "levy/errors.hpp"

namespace levy {

ResultRecord& ResultRecord::param(const std::string& key, double v) {
  parameters.push_back({key, true, v, {}});
  return *this;
}

ResultRecord& ResultRecord::param(const std::string& key, const std::string& v) {
  parameters.push_back({key, false, 0.0, v});
  return *this;
}

const Param* ResultRecord::find_param(const std::string& key) const {
  for (const auto& p : parameters)
    if (p.key == key) return &p;
  return nullptr;
}

namespace {

std::string json_number(double v) { return std::isfinite(v) ? format_real(v) : "null"; }

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) { return std::isnan(v) ? "" : format_real(v); }

std::string param_string(const std::vector<Param>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ';';
    s += ps[i].key + '=' + (ps[i].numeric ? format_real(ps[i].number) : ps[i].text);
  }
  return s;
}

double json_to_double(const nlohmann::json& j) { return j.is_null() ? kNaN : j.get<double>(); }

}  // namespace

void emit_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
  out << "experiment,label,parameters,n_values,estimate,stderr,theory_value,theory_ref,statistic,p_value,verdict\n";
  for (const auto& r : records) {
    out << csv_field(r.experiment) << ',' << csv_field(r.label) << ',' << csv_field(param_string(r.parameters)) << ','
        << r.values.size() << ',' << csv_number(r.estimate) << ',' << csv_number(r.stderr_) << ','
        << csv_number(r.theory_value) << ',' << csv_field(r.theory_ref) << ',' << csv_number(r.statistic) << ','
        << csv_number(r.p_value) << ',' << r.verdict << '\n';
  }
}

void emit_jsonl(std::ostream& out, const std::vector<ResultRecord>& records) {
  for (const auto& r : records) {
    out << "{\"experiment\":" << json_string(r.experiment) << ",\"label\":" << json_string(r.label)
        << ",\"parameters\":{";
    for (std::size_t i = 0; i < r.parameters.size(); ++i) {
      const auto& p = r.parameters[i];
      out << (i ? "," : "") << json_string(p.key) << ':' << (p.numeric ? json_number(p.number) : json_string(p.text));
    }
    out << "},\"values\":[";
    for (std::size_t i = 0; i < r.values.size(); ++i) out << (i ? "," : "") << json_number(r.values[i]);
    out << "],\"seeds\":[";
    for (std::size_t i = 0; i < r.seeds.size(); ++i) out << (i ? "," : "") << r.seeds[i];
    out << "],\"estimate\":" << json_number(r.estimate) << ",\"stderr\":" << json_number(r.stderr_)
        << ",\"theory_value\":" << json_number(r.theory_value) << ",\"theory_ref\":" << json_string(r.theory_ref)
        << ",\"statistic\":" << json_number(r.statistic) << ",\"p_value\":" << json_number(r.p_value)
        << ",\"verdict\":" << json_string(r.verdict) << "}\n";
  }
}

std::vector<ResultRecord> parse_jsonl(std::istream& in) {
  std::vector<ResultRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line);
    ResultRecord r;
    r.experiment = j.at("experiment").get<std::string>();
    r.label = j.at("label").get<std::string>();
    for (auto& [k, v] : j.at("parameters").items()) {
      if (v.is_string()) r.param(k, v.get<std::string>());
      else r.param(k, json_to_double(v));
    }
    for (auto& v : j.at("values")) r.values.push_back(json_to_double(v));
    for (auto& v : j.at("seeds")) r.seeds.push_back(v.get<std::uint64_t>());
    r.estimate = json_to_double(j.at("estimate"));
    r.stderr_ = json_to_double(j.at("stderr"));
    r.theory_value = json_to_double(j.at("theory_value"));
    r.theory_ref = j.at("theory_ref").get<std::string>();
    r.statistic = json_to_double(j.at("statistic"));
    r.p_value = json_to_double(j.at("p_value"));
    r.verdict = j.at("verdict").get<std::string>();
    out.push_back(std::move(r));
  }
  return out;
}

void emit_file(const std::string& path, const std::string& format, const std::vector<ResultRecord>& records) {
  require(format == "csv" || format == "jsonl", "format must be csv or jsonl");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output path '" + path + "'");
  if (format == "csv") emit_csv(f, records);
  else emit_jsonl(f, records);
  if (!f) throw ConfigError("failed writing output path '" + path + "'");
}

}  // namespace levy
