#pragma once

#include <cstdint>
#include <random>

namespace stablewalk {

/// A reproducible random stream addressed by (master_seed, stream_index).
///
/// The engine state is a pure function of both numbers; distinct indices give
/// streams that are, for all practical purposes, independent. Conversions to
/// floating point are done here rather than through <random> distributions so
/// the draw sequence is identical across standard libraries.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Unit-mean exponential variate.
  double exponential();

  /// Stream index for replicate `replicate` of a sweep point `tag`
  /// (typically a level). Unique while replicate < 2^40.
  static constexpr std::uint64_t index_for(std::uint64_t tag,
                                           std::uint64_t replicate) noexcept {
    return (tag << 40) ^ replicate;
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used for seed derivation.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace stablewalk
