#pragma once

#include <cstdint>
#include <random>

namespace smd {

/// SplitMix64 finalizer; used to decorrelate seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic random stream backed by a 64-bit Mersenne Twister.
///
/// Streams are cheap to construct and are not meant to be shared across
/// threads; give every unit of work its own stream via substream().
class RngStream {
public:
  using result_type = std::mt19937_64::result_type;

  explicit RngStream(std::uint64_t seed);

  /// Independent child stream for replicate / work item `index`.
  static RngStream substream(std::uint64_t master_seed, std::uint64_t index);

  /// Uniform draw on the open interval (0, 1) with 53 bits of resolution.
  double uniform();

  std::uint64_t seed() const { return seed_; }

  // UniformRandomBitGenerator interface, so boost/std distributions accept it.
  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace smd
