#pragma once

#include <cstdint>
#include <span>

namespace ctmdp {

/// Identifies one independent random stream: a base seed plus a stream id
/// (typically the episode index, offset by the run index).
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Stream id for episode `episode` of run `run`: run * 2^32 + episode.
  static RngSeed for_episode(std::uint64_t seed, std::uint64_t run, std::uint64_t episode) {
    return {seed, (run << 32) + episode};
  }
};

/// Counter-based generator: draw n is a pure function of (seed, stream, n),
/// so any stream can be reproduced in isolation on any platform.
class StreamRng {
 public:
  explicit StreamRng(RngSeed id);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Exp(rate) by inverse CDF; strictly positive. rate = 0 gives +infinity.
  double exponential(double rate);

  /// Index drawn with probability proportional to `weights`.
  std::size_t categorical(std::span<const double> weights);

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ctmdp
