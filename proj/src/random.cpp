#include "wovl/random.hpp"

namespace wovl {

namespace {

std::seed_seq make_seq(std::uint64_t seed, std::uint64_t index,
                       std::uint32_t domain) {
  return std::seed_seq{static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(index),
                       static_cast<std::uint32_t>(index >> 32), domain};
}

// Tags keep top-level streams and substreams from ever sharing a seed sequence.
constexpr std::uint32_t kRootDomain = 0x726f6f74u;
constexpr std::uint32_t kSubDomain = 0x73756273u;

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : engine_() {
  auto seq = make_seq(seed, 0, kRootDomain);
  engine_.seed(seq);
}

double RandomStream::uniform_open() {
  // 53 random bits centred in their cell: k in [0, 2^53) -> (k + 0.5) / 2^53.
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

RandomStream derive_substream(std::uint64_t seed, std::uint64_t index) {
  auto seq = make_seq(seed, index, kSubDomain);
  return RandomStream(seq);
}

}  // namespace wovl
