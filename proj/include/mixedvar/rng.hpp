#pragma once

#include <cstdint>
#include <random>

namespace mixedvar {

// Purpose tags for deriving independent substreams from one master seed.
// `replication` partitions a Monte Carlo run into per-replication master
// seeds; `cell` separates parameter-grid cells inside one replication.
enum class StreamTag : std::uint64_t {
  fgn_noise = 1,
  wiener_noise = 2,
  replication = 3,
  cell = 4,
};

// Mixes (master_seed, tag, index) into a substream seed with the splitmix64
// finalizer.  The map is pure, so any worker reaches the same stream for a
// given (tag, index) and results cannot depend on scheduling.
std::uint64_t derive_stream_seed(std::uint64_t master_seed, StreamTag tag,
                                 std::uint64_t index = 0);

// Standard normal variates with a deterministic draw order for a fixed seed.
// Determinism is per-toolchain: std::normal_distribution's draw sequence is
// implementation-defined, so cross-compiler byte-identity is not promised.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return normal_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

}  // namespace mixedvar
