#include "torusperc/rng.hpp"

#include <array>

namespace torusperc {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RngSeed RngSeed::child(std::uint64_t index) const noexcept {
  return {seed, splitmix64(stream ^ splitmix64(index + 0x632be59bd9b4e019ULL))};
}

Engine make_engine(RngSeed seed) {
  // Expand (seed, stream) into a full seed_seq so nearby streams decorrelate.
  std::array<std::uint32_t, 8> words{};
  std::uint64_t state = splitmix64(seed.seed) ^ splitmix64(~seed.stream);
  for (std::size_t i = 0; i < words.size(); i += 2) {
    state = splitmix64(state + seed.stream);
    words[i] = static_cast<std::uint32_t>(state);
    words[i + 1] = static_cast<std::uint32_t>(state >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  return Engine(seq);
}

}  // namespace torusperc
