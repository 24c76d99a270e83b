#include "poissonity/rng.hpp"

namespace poissonity {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index & 0xffffffffu),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(make_engine(master_seed, stream_index)) {}

}  // namespace poissonity
