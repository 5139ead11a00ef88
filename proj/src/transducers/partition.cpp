#include "cpskit/partition.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace cpskit {

double h_schedule(std::int64_t n) {
  if (n < 1) throw std::domain_error("h_schedule: n must be at least 1");
  // floor(log2 n) is the index of the highest set bit; integer arithmetic
  // avoids rounding trouble at exact powers of two.
  const int log2n = std::bit_width(static_cast<std::uint64_t>(n)) - 1;
  return std::ldexp(1.0, -(log2n / 3));
}

HistogramPartition::HistogramPartition(std::int64_t n)
    : n_(n), width_(h_schedule(n)) {}

std::int64_t HistogramPartition::cell(double x) const {
  // width_ is a power of two, so the division is exact.
  return static_cast<std::int64_t>(std::floor(x / width_));
}

std::pair<double, double> HistogramPartition::bounds(std::int64_t cell) const {
  return {static_cast<double>(cell) * width_, static_cast<double>(cell + 1) * width_};
}

}  // namespace cpskit
