#include "mixedvar/rng.hpp"

namespace mixedvar {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_stream_seed(std::uint64_t master_seed, StreamTag tag,
                                 std::uint64_t index) {
  std::uint64_t s = splitmix64(master_seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(tag));
  s = splitmix64(s ^ index);
  return s;
}

}  // namespace mixedvar
