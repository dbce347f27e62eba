#include "ctmdp/rng.hpp"

#include <cmath>
#include <limits>

namespace ctmdp {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

StreamRng::StreamRng(RngSeed id) : key_(mix64(mix64(id.seed + kGolden) ^ (id.stream * kGolden + 0x632BE59BD9B4E019ULL))) {}

std::uint64_t StreamRng::next_u64() { return mix64(key_ + (++counter_) * kGolden); }

double StreamRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

double StreamRng::exponential(double rate) {
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  double tau = 0.0;
  while (!(tau > 0.0)) tau = -std::log1p(-uniform()) / rate;
  return tau;
}

std::size_t StreamRng::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

std::size_t StreamRng::below(std::size_t n) {
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

}  // namespace ctmdp
