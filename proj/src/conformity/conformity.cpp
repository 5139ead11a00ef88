#include "cpskit/conformity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cpskit/partition.hpp"

namespace cpskit {
namespace {

constexpr double kTolerance = 1e-12;

bool lexicographic_le(double y1, double theta1, double y2, double theta2) {
  return y1 < y2 || (y1 == y2 && theta1 <= theta2);
}

double scalar_predictor(const ExtendedObservation& e) {
  if (e.obs.x.size() != 1) {
    throw std::invalid_argument("histogram conformity measure needs scalar predictors");
  }
  return e.obs.x.front();
}

}  // namespace

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("euclidean_distance: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double trivial_score(std::span<const ExtendedObservation>,
                     const ExtendedObservation& candidate) {
  return candidate.y();
}

double trivial_score(std::span<const Observation>, const Observation& candidate) {
  return candidate.y;
}

long nearest_neighbour(std::span<const ExtendedObservation> data,
                       std::span<const double> point, const Metric& metric,
                       long skip) {
  long best = -1;
  double best_distance = 0.0;
  for (long k = 0; k < static_cast<long>(data.size()); ++k) {
    if (k == skip) continue;
    const double d = metric(data[k].x(), point);
    if (best < 0 || d < best_distance ||
        (d == best_distance &&
         (data[k].theta < data[best].theta ||
          (data[k].theta == data[best].theta && data[k].y() < data[best].y())))) {
      best = k;
      best_distance = d;
    }
  }
  return best;
}

double nn_score(std::span<const ExtendedObservation> data,
                const ExtendedObservation& candidate, const Metric& metric) {
  if (data.empty()) throw std::invalid_argument("nn_score: comparison data is empty");
  const long j = nearest_neighbour(data, candidate.x(), metric);
  return candidate.y() - data[j].y();
}

double nn_score(std::span<const Observation> data, const Observation& candidate,
                RandomStream& stream, const Metric& metric) {
  auto extended = extend(data, stream);
  const auto self = extend(candidate, stream.uniform());
  return nn_score(extended, self, metric);
}

double histogram_score(std::span<const ExtendedObservation> data,
                       const ExtendedObservation& candidate,
                       std::int64_t n_for_partition) {
  const HistogramPartition partition(n_for_partition);
  const std::int64_t cell = partition.cell(scalar_predictor(candidate));
  std::int64_t in_cell = 0;
  std::int64_t at_or_below = 0;
  for (const auto& e : data) {
    if (partition.cell(scalar_predictor(e)) != cell) continue;
    ++in_cell;
    if (lexicographic_le(e.y(), e.theta, candidate.y(), candidate.theta)) ++at_or_below;
  }
  if (in_cell == 0) return candidate.y() >= 0.0 ? 1.0 : 0.0;
  return static_cast<double>(at_or_below) / static_cast<double>(in_cell);
}

ConformityMeasure trivial_measure() {
  return [](std::span<const ExtendedObservation> data,
            const ExtendedObservation& candidate) { return trivial_score(data, candidate); };
}

ConformityMeasure nn_measure(Metric metric) {
  return [metric = std::move(metric)](std::span<const ExtendedObservation> data,
                                      const ExtendedObservation& candidate) {
    return nn_score(data, candidate, metric);
  };
}

ConformityMeasure histogram_measure(std::int64_t n_for_partition) {
  // Validate eagerly so a bad n fails at construction.
  (void)h_schedule(n_for_partition);
  return [n_for_partition](std::span<const ExtendedObservation> data,
                           const ExtendedObservation& candidate) {
    return histogram_score(data, candidate, n_for_partition);
  };
}

bool check_permutation_invariance(const ConformityMeasure& measure,
                                  std::span<const ExtendedObservation> data,
                                  const ExtendedObservation& candidate, int trials,
                                  RandomStream& stream) {
  const double reference = measure(data, candidate);
  std::vector<ExtendedObservation> shuffled(data.begin(), data.end());
  for (int t = 0; t < trials; ++t) {
    for (std::size_t k = shuffled.size(); k > 1; --k) {
      std::swap(shuffled[k - 1], shuffled[stream.below(k)]);
    }
    if (std::abs(measure(shuffled, candidate) - reference) > kTolerance) return false;
  }
  return true;
}

bool check_monotonic(const ConformityMeasure& measure,
                     std::span<const ExtendedObservation> data,
                     const ExtendedObservation& candidate,
                     std::span<const double> y_grid) {
  if (y_grid.empty()) throw std::invalid_argument("check_monotonic: empty grid");
  if (!std::is_sorted(y_grid.begin(), y_grid.end())) {
    throw std::invalid_argument("check_monotonic: grid must be sorted");
  }

  ExtendedObservation probe = candidate;
  double previous = 0.0;
  for (std::size_t k = 0; k < y_grid.size(); ++k) {
    probe.obs.y = y_grid[k];
    const double score = measure(data, probe);
    if (k > 0 && score < previous) return false;
    previous = score;
  }

  if (data.empty()) return true;
  std::vector<ExtendedObservation> perturbed(data.begin(), data.end());
  for (std::size_t k = 0; k < y_grid.size(); ++k) {
    perturbed.front().obs.y = y_grid[k];
    const double score = measure(perturbed, candidate);
    if (k > 0 && score > previous) return false;
    previous = score;
  }
  return true;
}

}  // namespace cpskit
