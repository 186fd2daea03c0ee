#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace levy {

struct EdgeIndex {
  int i;
  int j;
};

// Symmetric coupling table J_ij with zero diagonal, dense row-major storage.
// Edges are indexed lexicographically over i < j.
class DisorderMatrix {
 public:
  explicit DisorderMatrix(int n_sites = 1);

  int n_sites() const { return n_; }
  std::size_t n_edges() const { return static_cast<std::size_t>(n_) * (n_ - 1) / 2; }

  double operator()(int i, int j) const { return dense_[static_cast<std::size_t>(i) * n_ + j]; }
  const double* row(int i) const { return dense_.data() + static_cast<std::size_t>(i) * n_; }
  // Clears any stored rank.
  void set(int i, int j, double value);
  void add(int i, int j, double value);

  std::size_t edge_index(int i, int j) const;
  EdgeIndex edge(std::size_t e) const { return edges_[e]; }
  double edge_value(std::size_t e) const { return (*this)(edges_[e].i, edges_[e].j); }

  bool has_rank() const { return !by_rank_.empty() || n_edges() == 0; }
  // Edge ids heaviest first.
  const std::vector<std::size_t>& by_rank() const { return by_rank_; }
  // 1-based rank of edge e.
  std::size_t rank_of(std::size_t e) const { return rank_[e]; }
  void set_rank(std::vector<std::size_t> by_rank);

  double max_abs() const;

 private:
  int n_;
  std::vector<double> dense_;
  std::vector<EdgeIndex> edges_;
  std::vector<std::size_t> by_rank_;
  std::vector<std::size_t> rank_;
};

struct InstanceHeader {
  int n_sites = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
};

// Text format:
//   levy_instance <N> <alpha> <beta> <seed>
//   <i> <j> <J_ij>          one row per edge, i < j, 0-based
// Values use 17 significant digits so a reload is bit-exact.
void write_instance(std::ostream& out, const DisorderMatrix& m, const InstanceHeader& h);
DisorderMatrix read_instance(std::istream& in, InstanceHeader* header = nullptr);

std::string format_real(double v);

}  // namespace levy
