#pragma once

#include <cstdint>
#include <random>

namespace warpgraph {

// Thin wrapper around mt19937_64 with hand-rolled value mappings.
// The standard distributions are implementation-defined, so every draw
// here is pinned down to the raw engine output to keep generated scenes
// reproducible byte-for-byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  int uniform_int(int lo, int hi_inclusive) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi_inclusive - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  // Derive an independent stream (e.g. one per scene) without sharing state.
  Rng fork(std::uint64_t stream) {
    return Rng(next_u64() ^ (0x9e3779b97f4a7c15ull * (stream + 1)));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace warpgraph
