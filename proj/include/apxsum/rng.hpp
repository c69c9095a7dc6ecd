#pragma once

#include <cstdint>
#include <initializer_list>

namespace apxsum {

/// SplitMix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based draw: a pure function of the seed and the words, so any
/// decision can be recomputed without replaying a stream.
inline std::uint64_t draw(std::uint64_t seed, std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t w : words) h = mix64(h ^ w);
  return h;
}

/// Maps a 64-bit draw to [0, bound) by multiply-shift.
inline std::uint64_t below(std::uint64_t r, std::uint64_t bound) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(r) * bound) >> 64);
}

enum class Stream : std::uint64_t { halve = 1, color = 2, child = 3, instance = 4 };

inline std::uint64_t word(Stream s) { return static_cast<std::uint64_t>(s); }

}  // namespace apxsum
