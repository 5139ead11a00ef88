#include "cpskit/random.hpp"

#include <stdexcept>

namespace cpskit {
namespace {

// SplitMix64 finalizer; decorrelates nearby seeds before they reach the
// Mersenne Twister seeding routine.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed)
    : seed_(seed), engine_(mix(seed)) {}

RandomStream RandomStream::derive(std::uint64_t index) const {
  return RandomStream(mix(seed_ ^ mix(index + 0x632be59bd9b4e019ULL)));
}

std::uint64_t RandomStream::next() {
  ++position_;
  return engine_();
}

double RandomStream::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  if (bound == 0) {
    throw std::invalid_argument("RandomStream::below: bound must be positive");
  }
  // Rejection sampling removes the modulo bias.
  const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
  std::uint64_t word = next();
  while (word >= limit) word = next();
  return word % bound;
}

RandomStream derive_stream(std::uint64_t master_seed,
                           std::span<const std::uint64_t> path) {
  RandomStream stream(master_seed);
  for (std::uint64_t index : path) stream = stream.derive(index);
  return stream;
}

RandomStream derive_stream(std::uint64_t master_seed,
                           std::initializer_list<std::uint64_t> path) {
  return derive_stream(master_seed,
                       std::span<const std::uint64_t>(path.begin(), path.size()));
}

}  // namespace cpskit
