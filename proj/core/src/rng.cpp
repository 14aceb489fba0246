#include "crasplab/rng.hpp"

namespace crasplab {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
  std::uint64_t z = h;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

Rng substream(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix(0x8AC7230489E80000ull, master);
  for (std::uint64_t w : path) h = mix(h, w);
  return Rng(h);
}

std::uint64_t hash_string(std::uint64_t seed, std::span<const char> bytes) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace crasplab
