#pragma once

#include <cstdint>
#include <random>

namespace wovl {

// Deterministic uniform source. Built on std::mt19937_64 and std::seed_seq,
// whose output sequences are fixed by the standard, so a given seed yields
// the same stream on every conforming platform.
//
// A stream is single-owner; parallel code derives one stream per work unit
// with derive_substream().
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Uniform on the open interval (0, 1): never returns exactly 0 or 1.
  double uniform_open();

  std::uint64_t next_u64() { return engine_(); }

 private:
  friend RandomStream derive_substream(std::uint64_t, std::uint64_t);
  explicit RandomStream(std::seed_seq& seq) : engine_(seq) {}

  std::mt19937_64 engine_;
};

// Independent stream for replication `index` of a run seeded with `seed`.
// Depends only on (seed, index), never on scheduling.
RandomStream derive_substream(std::uint64_t seed, std::uint64_t index);

}  // namespace wovl
