#pragma once

#include <cstdint>
#include <random>

namespace poissonity {

// Deterministic pseudo-random stream identified by (master_seed, stream_index).
//
// The engine is std::mt19937_64 seeded through std::seed_seq with the four
// 32-bit words {seed lo, seed hi, index lo, index hi}. Both the engine and
// seed_seq are fully specified by the C++ standard, so a stream reproduces
// the same sequence on every conforming toolchain. Do not change this
// derivation: acceptance baselines freeze seeds.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

}  // namespace poissonity
