#ifndef CPSKIT_RANDOM_HPP_
#define CPSKIT_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace cpskit {

// A seeded, reproducible source of uniform random numbers.
//
// Streams form a tree: derive(k) returns an independent child keyed by k, so
// every consumer (a trial, the tie-break numbers of one trial, the online
// protocol's tau sequence) can own its stream without coordinating draw
// counts with anybody else.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Child stream keyed by `index`. Does not advance this stream.
  RandomStream derive(std::uint64_t index) const;

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Uniform on {0, ..., bound - 1}. `bound` must be positive.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }

  // Number of 64-bit words consumed so far.
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t next();

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t position_ = 0;
};

// Stream reached from `master_seed` by following `path` through derive().
RandomStream derive_stream(std::uint64_t master_seed,
                           std::span<const std::uint64_t> path);
RandomStream derive_stream(std::uint64_t master_seed,
                           std::initializer_list<std::uint64_t> path);

}  // namespace cpskit

#endif  // CPSKIT_RANDOM_HPP_
