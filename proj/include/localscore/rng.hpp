#pragma once

#include <cstdint>
#include <random>

namespace localscore {

// Deterministic stream: std::mt19937_64 seeded with a splitmix64 mix of
// (seed, stream_id). Uniforms take the top 53 bits; normals use
// Box-Muller. Both are written out here rather than taken from
// <random> distributions, whose algorithms are implementation-defined.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  // Independent child stream, e.g. one per chain or repetition.
  RngStream substream(std::uint64_t k) const;

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace localscore
