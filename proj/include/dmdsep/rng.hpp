#pragma once

#include <cstdint>
#include <string_view>

namespace dmdsep {

/// Counter-based SplitMix64 stream.
///
/// Draw i of a stream seeded with s is mix64(s + (i + 1) * 0x9E3779B97F4A7C15),
/// where mix64 is the SplitMix64 finalizer. Uniforms take the top 53 bits;
/// normals use the Box-Muller transform on two consecutive uniforms and
/// return both halves of the pair. The algorithm is fully specified here so
/// the streams can be reproduced from any language.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1].
  double uniform_open_low();
  double normal();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over the bytes of `text`, finished with mix64.
std::uint64_t hash_text(std::string_view text);

/// Per-trial seed: base ^ mix64(hash_text(cell) ^ mix64(trial)).
std::uint64_t derive_seed(std::uint64_t base, std::string_view cell, std::uint64_t trial);

}  // namespace dmdsep
