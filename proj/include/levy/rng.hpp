#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace levy {

// Stateless 64-bit mixer (splitmix64 finalizer).
std::uint64_t mix64(std::uint64_t x);

// Seed for stream (stream_id, index) under a master seed. Pure function of
// its arguments, so replication r always sees the same stream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream_id, std::uint64_t index);

// Hash of an experiment name, used as stream_id.
std::uint64_t stream_id_of(const char* name);

class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}
  Rng(std::uint64_t master, std::uint64_t stream_id, std::uint64_t index)
      : Rng(derive_seed(master, stream_id, index)) {}

  std::uint64_t seed() const { return seed_; }
  engine_type& engine() { return engine_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0,1]; never returns 0.
  double uniform_pos() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }
  // Uniform on [0,1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double exponential() { return -std::log(uniform_pos()); }
  double sign() { return (engine_() >> 63) ? 1.0 : -1.0; }
  double normal() { return normal_(engine_); }
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }
  std::int64_t poisson(double mean);

 private:
  engine_type engine_;
  std::uint64_t seed_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace levy
