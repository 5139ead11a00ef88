#include <algorithm>
#include <stdexcept>
#include <vector>

#include "cpskit/transducers.hpp"

namespace cpskit {
namespace {

double scalar(std::span<const double> x, const char* who) {
  if (x.size() != 1) {
    throw std::invalid_argument(std::string(who) + ": unsupported predictor (needs d = 1)");
  }
  return x.front();
}

// Responses of the training observations that share x's cell.
std::vector<double> in_cell_responses(std::span<const Observation> training, double x,
                                      const char* who) {
  std::vector<double> out;
  if (training.empty()) return out;
  const HistogramPartition partition(static_cast<std::int64_t>(training.size()));
  const std::int64_t cell = partition.cell(x);
  for (const auto& obs : training) {
    if (partition.cell(scalar(obs.x, who)) == cell) out.push_back(obs.y);
  }
  return out;
}

// Distribution function of the empirical measure of `values` (non-empty).
PredictiveBand empirical_distribution(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double total = static_cast<double>(values.size());
  std::vector<double> jumps;
  std::vector<double> plateaus{0.0};
  for (std::size_t k = 0; k < values.size();) {
    std::size_t end = k;
    while (end < values.size() && values[end] == values[k]) ++end;
    jumps.push_back(values[k]);
    plateaus.push_back(static_cast<double>(end) / total);
    k = end;
  }
  return PredictiveBand::distribution(std::move(jumps), std::move(plateaus));
}

}  // namespace

PredictiveBand critical_point_band(std::vector<double> critical_points) {
  std::sort(critical_points.begin(), critical_points.end());
  const double denominator = static_cast<double>(critical_points.size() + 1);
  std::vector<double> jumps, lower, upper, at_lower, at_upper;
  std::size_t below = 0;
  for (std::size_t k = 0; k < critical_points.size();) {
    std::size_t end = k;
    while (end < critical_points.size() && critical_points[end] == critical_points[k]) ++end;
    const std::size_t multiplicity = end - k;
    lower.push_back(static_cast<double>(below) / denominator);
    upper.push_back(static_cast<double>(below + 1) / denominator);
    jumps.push_back(critical_points[k]);
    at_lower.push_back(static_cast<double>(below) / denominator);
    at_upper.push_back(static_cast<double>(below + multiplicity + 1) / denominator);
    below = end;
    k = end;
  }
  lower.push_back(static_cast<double>(below) / denominator);
  upper.push_back(1.0);
  return PredictiveBand(std::move(jumps), std::move(lower), std::move(upper),
                        std::move(at_lower), std::move(at_upper));
}

PredictiveBand dh_band(std::span<const double> responses) {
  if (responses.empty()) throw std::invalid_argument("dh_band: no training responses");
  return critical_point_band(std::vector<double>(responses.begin(), responses.end()));
}

PredictiveBand hmps_band(std::span<const Observation> training, double x) {
  if (training.empty()) throw std::invalid_argument("hmps_band: training data is empty");
  // The test observation's class is {n+1} plus the in-cell training indices;
  // under the trivial measure each in-cell response is a critical point.
  return critical_point_band(in_cell_responses(training, x, "hmps_band"));
}

PredictiveBand pfs_distribution(std::span<const Observation> training, double x) {
  auto responses = in_cell_responses(training, x, "pfs_distribution");
  if (responses.empty()) return PredictiveBand::distribution({0.0}, {0.0, 1.0});
  return empirical_distribution(std::move(responses));
}

PredictiveBand venn_distribution(const Taxonomy& taxonomy,
                                 std::span<const Observation> training,
                                 std::span<const double> x, double u) {
  if (training.empty()) {
    throw std::invalid_argument("venn_distribution: training data is empty");
  }
  std::vector<ExtendedObservation> sequence;
  sequence.reserve(training.size() + 1);
  for (const auto& obs : training) sequence.push_back(ExtendedObservation{obs, 0.0});
  sequence.push_back(
      ExtendedObservation{Observation{std::vector<double>(x.begin(), x.end()), u}, 0.0});
  const Labels labels = taxonomy(sequence);
  if (labels.size() != sequence.size()) {
    throw std::invalid_argument("venn_distribution: taxonomy returned wrong label count");
  }
  std::vector<double> responses;
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    if (labels[i] == labels.back()) responses.push_back(sequence[i].y());
  }
  return empirical_distribution(std::move(responses));
}

PredictiveBand venn_envelope(std::span<const Observation> training, double x) {
  if (training.empty()) throw std::invalid_argument("venn_envelope: training data is empty");
  auto responses = in_cell_responses(training, x, "venn_envelope");
  std::sort(responses.begin(), responses.end());
  const double denominator = static_cast<double>(responses.size() + 1);
  std::vector<double> jumps, lower{0.0}, upper{1.0 / denominator};
  for (std::size_t k = 0; k < responses.size();) {
    std::size_t end = k;
    while (end < responses.size() && responses[end] == responses[k]) ++end;
    jumps.push_back(responses[k]);
    lower.push_back(static_cast<double>(end) / denominator);
    upper.push_back(static_cast<double>(end + 1) / denominator);
    k = end;
  }
  std::vector<double> at_lower(lower.begin() + 1, lower.end());
  std::vector<double> at_upper(upper.begin() + 1, upper.end());
  return PredictiveBand(std::move(jumps), std::move(lower), std::move(upper),
                        std::move(at_lower), std::move(at_upper));
}

}  // namespace cpskit
