#pragma once

#include <cstdint>
#include <random>

namespace torusperc {

/// Reproducible seed: a master seed plus a stream id. Two engines built from
/// the same (seed, stream) produce identical sequences on one build.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Seed for an independent sub-stream, e.g. replica `index` of this stream.
  [[nodiscard]] RngSeed child(std::uint64_t index) const noexcept;

  friend bool operator==(const RngSeed&, const RngSeed&) = default;
};

using Engine = std::mt19937_64;

[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

[[nodiscard]] Engine make_engine(RngSeed seed);

}  // namespace torusperc
