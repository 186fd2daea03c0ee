#include "levy/disorder.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "levy/errors.hpp"

namespace levy {

DisorderMatrix::DisorderMatrix(int n_sites) : n_(n_sites) {
  require(n_sites >= 1, "n_sites must be >= 1");
  dense_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
  edges_.reserve(n_edges());
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j) edges_.push_back({i, j});
}

void DisorderMatrix::set(int i, int j, double value) {
  require(i != j && i >= 0 && j >= 0 && i < n_ && j < n_, "edge endpoint out of range");
  dense_[static_cast<std::size_t>(i) * n_ + j] = value;
  dense_[static_cast<std::size_t>(j) * n_ + i] = value;
  by_rank_.clear();
  rank_.clear();
}

void DisorderMatrix::add(int i, int j, double value) { set(i, j, (*this)(i, j) + value); }

std::size_t DisorderMatrix::edge_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  require(i != j && i >= 0 && j < n_, "edge endpoint out of range");
  std::size_t a = static_cast<std::size_t>(i);
  return a * n_ - a * (a + 1) / 2 + (j - i - 1);
}

void DisorderMatrix::set_rank(std::vector<std::size_t> by_rank) {
  require(by_rank.size() == n_edges(), "rank must cover every edge");
  rank_.assign(n_edges(), 0);
  for (std::size_t r = 0; r < by_rank.size(); ++r) {
    require(by_rank[r] < n_edges() && rank_[by_rank[r]] == 0, "rank must be a bijection");
    rank_[by_rank[r]] = r + 1;
  }
  by_rank_ = std::move(by_rank);
}

double DisorderMatrix::max_abs() const {
  double m = 0.0;
  for (double v : dense_) m = std::max(m, std::fabs(v));
  return m;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_instance(std::ostream& out, const DisorderMatrix& m, const InstanceHeader& h) {
  out << "levy_instance " << m.n_sites() << ' ' << format_real(h.alpha) << ' '
      << format_real(h.beta) << ' ' << h.seed << '\n';
  for (std::size_t e = 0; e < m.n_edges(); ++e) {
    auto [i, j] = m.edge(e);
    out << i << ' ' << j << ' ' << format_real(m(i, j)) << '\n';
  }
}

DisorderMatrix read_instance(std::istream& in, InstanceHeader* header) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("instance: empty input");
  std::istringstream hs(line);
  std::string tag;
  InstanceHeader h;
  if (!(hs >> tag >> h.n_sites >> h.alpha >> h.beta >> h.seed) || tag != "levy_instance")
    throw ConfigError("instance: malformed header");
  DisorderMatrix m(h.n_sites);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream rs(line);
    int i, j;
    std::string value;
    if (!(rs >> i >> j >> value)) throw ConfigError("instance: malformed row '" + line + "'");
    m.set(i, j, std::strtod(value.c_str(), nullptr));
    ++rows;
  }
  if (rows != m.n_edges()) throw ConfigError("instance: wrong number of edge rows");
  if (header) *header = h;
  return m;
}

}  // namespace levy
