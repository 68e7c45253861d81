#include "stablewalk/rng.hpp"

#include <cmath>

namespace stablewalk {

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      engine_(mix64(master_seed ^ mix64(stream_index + 0x632be59bd9b4e019ULL))) {}

double RngStream::exponential() { return -std::log(uniform()); }

}  // namespace stablewalk
