#ifndef CPSKIT_PARTITION_HPP_
#define CPSKIT_PARTITION_HPP_

#include <cstdint>
#include <utility>

namespace cpskit {

// Cell width used with n training observations: 2^-floor(log2(n) / 3).
// Non-increasing powers of two with h -> 0 and n * h -> infinity.
// Throws std::domain_error for n < 1.
double h_schedule(std::int64_t n);

// The partition of the real line into cells [k h, (k + 1) h), h = h_schedule(n).
// Partitions for growing n are nested.
class HistogramPartition {
 public:
  explicit HistogramPartition(std::int64_t n);

  std::int64_t n() const { return n_; }
  double width() const { return width_; }

  // k such that x lies in [k h, (k + 1) h).
  std::int64_t cell(double x) const;

  std::pair<double, double> bounds(std::int64_t cell) const;

  bool same_cell(double a, double b) const { return cell(a) == cell(b); }

 private:
  std::int64_t n_;
  double width_;
};

}  // namespace cpskit

#endif  // CPSKIT_PARTITION_HPP_
