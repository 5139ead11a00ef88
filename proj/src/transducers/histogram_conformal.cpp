#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cpskit/transducers.hpp"

namespace cpskit {
namespace {

struct Key {
  double y;
  double theta;
};

bool operator<(const Key& a, const Key& b) {
  return a.y < b.y || (a.y == b.y && a.theta < b.theta);
}

double scalar_x(const ExtendedObservation& e) {
  if (e.obs.x.size() != 1) {
    throw std::invalid_argument("hcps: unsupported predictor (needs d = 1)");
  }
  return e.obs.x.front();
}

// Conformal transducer of the histogram conformity measure for one test
// predictor, evaluated in O(log n) per (y, theta, tau) after an O(n log n)
// setup.
//
// Training observations outside the test cell never see the candidate, so
// their scores are constants. Inside the cell, with s candidates strictly
// below the test key and e equal to it, the test score is (s + e) / N and
// exactly s in-cell scores are smaller and e are tied.
class HistogramConformal {
 public:
  HistogramConformal(std::span<const ExtendedObservation> training, double x)
      : n_(training.size()) {
    if (training.empty()) throw std::invalid_argument("hcps: training data is empty");
    const HistogramPartition partition(static_cast<std::int64_t>(n_));
    const std::int64_t test_cell = partition.cell(x);

    struct Member {
      std::int64_t cell;
      Key key;
    };
    std::vector<Member> others;
    for (const auto& e : training) {
      const std::int64_t cell = partition.cell(scalar_x(e));
      const Key key{e.y(), e.theta};
      if (cell == test_cell) {
        in_cell_.push_back(key);
      } else {
        others.push_back(Member{cell, key});
      }
    }
    std::sort(in_cell_.begin(), in_cell_.end());

    std::sort(others.begin(), others.end(), [](const Member& a, const Member& b) {
      return a.cell < b.cell || (a.cell == b.cell && a.key < b.key);
    });
    out_of_cell_scores_.reserve(others.size());
    for (std::size_t begin = 0; begin < others.size();) {
      std::size_t end = begin;
      while (end < others.size() && others[end].cell == others[begin].cell) ++end;
      const std::size_t size = end - begin;
      for (std::size_t i = begin; i < end; ++i) {
        if (size == 1) {
          out_of_cell_scores_.push_back(others[i].key.y >= 0.0 ? 1.0 : 0.0);
          continue;
        }
        // Others in the cell whose key is <= this one.
        auto last = std::upper_bound(
            others.begin() + static_cast<long>(begin), others.begin() + static_cast<long>(end),
            others[i], [](const Member& a, const Member& b) { return a.key < b.key; });
        const std::size_t at_or_below = static_cast<std::size_t>(last - others.begin()) - begin - 1;
        out_of_cell_scores_.push_back(static_cast<double>(at_or_below) /
                                      static_cast<double>(size - 1));
      }
      begin = end;
    }
    std::sort(out_of_cell_scores_.begin(), out_of_cell_scores_.end());
  }

  double pvalue(double y, double theta, double tau) const {
    std::size_t smaller = 0;
    std::size_t equal = 1;  // the test observation ties with itself
    double own;
    if (in_cell_.empty()) {
      own = y >= 0.0 ? 1.0 : 0.0;
    } else {
      const Key key{y, theta};
      auto [first, last] = std::equal_range(in_cell_.begin(), in_cell_.end(), key);
      const std::size_t below = static_cast<std::size_t>(first - in_cell_.begin());
      const std::size_t tied = static_cast<std::size_t>(last - first);
      smaller += below;
      equal += tied;
      own = static_cast<double>(below + tied) / static_cast<double>(in_cell_.size());
    }
    auto [first, last] =
        std::equal_range(out_of_cell_scores_.begin(), out_of_cell_scores_.end(), own);
    smaller += static_cast<std::size_t>(first - out_of_cell_scores_.begin());
    equal += static_cast<std::size_t>(last - first);
    return (static_cast<double>(smaller) + tau * static_cast<double>(equal)) /
           static_cast<double>(n_ + 1);
  }

  // Values of y where the rank configuration can change.
  std::vector<double> breakpoints() const {
    std::vector<double> points;
    if (in_cell_.empty()) {
      points.push_back(0.0);
      return points;
    }
    for (const auto& key : in_cell_) {
      if (points.empty() || points.back() != key.y) points.push_back(key.y);
    }
    return points;
  }

 private:
  std::size_t n_;
  std::vector<Key> in_cell_;
  std::vector<double> out_of_cell_scores_;
};

}  // namespace

double hcps_pvalue(std::span<const ExtendedObservation> training,
                   const ExtendedObservation& candidate, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::domain_error("hcps_pvalue: tau must lie in [0, 1]");
  }
  const HistogramConformal system(training, scalar_x(candidate));
  return system.pvalue(candidate.y(), candidate.theta, tau);
}

PredictiveBand hcps_band(std::span<const ExtendedObservation> training, double x,
                         double theta) {
  const HistogramConformal system(training, x);
  const auto points = system.breakpoints();
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> lower, upper, at_lower, at_upper;
  auto add_plateau = [&](double y) {
    lower.push_back(system.pvalue(y, theta, 0.0));
    upper.push_back(system.pvalue(y, theta, 1.0));
  };
  add_plateau(std::nextafter(points.front(), -inf));
  for (std::size_t k = 0; k < points.size(); ++k) {
    at_lower.push_back(system.pvalue(points[k], theta, 0.0));
    at_upper.push_back(system.pvalue(points[k], theta, 1.0));
    if (k + 1 < points.size()) {
      const double mid = points[k] + (points[k + 1] - points[k]) / 2.0;
      if (mid > points[k] && mid < points[k + 1]) {
        add_plateau(mid);
      } else {
        // Adjacent doubles: the open interval is empty.
        lower.push_back(at_lower.back());
        upper.push_back(at_upper.back());
      }
    }
  }
  add_plateau(std::nextafter(points.back(), inf));
  return PredictiveBand(points, std::move(lower), std::move(upper), std::move(at_lower),
                        std::move(at_upper));
}

}  // namespace cpskit
