#include <stdexcept>
#include <vector>

#include "cpskit/transducers.hpp"

namespace cpskit {
namespace {

void check_tau(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::domain_error("transducer: tau must lie in [0, 1]");
  }
}

// Conformity scores alpha_1..alpha_{n+1}: alpha_i scores training element i
// against the rest of the training data with the candidate appended, and
// alpha_{n+1} scores the candidate against the training data.
std::vector<double> conformity_scores(const ConformityMeasure& measure,
                                      std::span<const ExtendedObservation> training,
                                      const ExtendedObservation& candidate) {
  const std::size_t n = training.size();
  std::vector<double> scores(n + 1);
  std::vector<ExtendedObservation> comparison;
  comparison.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    comparison.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) comparison.push_back(training[j]);
    }
    comparison.push_back(candidate);
    scores[i] = measure(comparison, training[i]);
  }
  scores[n] = measure(training, candidate);
  return scores;
}

}  // namespace

Labels histogram_taxonomy(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("histogram_taxonomy: empty sequence");
  const HistogramPartition partition(
      xs.size() > 1 ? static_cast<std::int64_t>(xs.size() - 1) : 1);
  Labels labels;
  labels.reserve(xs.size());
  for (double x : xs) labels.push_back(partition.cell(x));
  return labels;
}

Taxonomy histogram_taxonomy() {
  return [](std::span<const ExtendedObservation> sequence) {
    std::vector<double> xs;
    xs.reserve(sequence.size());
    for (const auto& e : sequence) {
      if (e.obs.x.size() != 1) {
        throw std::invalid_argument("histogram taxonomy needs scalar predictors");
      }
      xs.push_back(e.obs.x.front());
    }
    return histogram_taxonomy(xs);
  };
}

Taxonomy single_class_taxonomy() {
  return [](std::span<const ExtendedObservation> sequence) {
    return Labels(sequence.size(), 0);
  };
}

double conformal_pvalue(const ConformityMeasure& measure,
                        std::span<const ExtendedObservation> training,
                        const ExtendedObservation& candidate, double tau) {
  check_tau(tau);
  if (training.empty()) {
    throw std::invalid_argument("conformal_pvalue: training data is empty");
  }
  const auto scores = conformity_scores(measure, training, candidate);
  const double own = scores.back();
  std::size_t smaller = 0;
  std::size_t equal = 0;
  for (double s : scores) {
    if (s < own) ++smaller;
    else if (s == own) ++equal;
  }
  return (static_cast<double>(smaller) + tau * static_cast<double>(equal)) /
         static_cast<double>(scores.size());
}

double mondrian_pvalue(const Taxonomy& taxonomy, const ConformityMeasure& measure,
                       std::span<const ExtendedObservation> training,
                       const ExtendedObservation& candidate, double tau) {
  check_tau(tau);
  if (training.empty()) {
    throw std::invalid_argument("mondrian_pvalue: training data is empty");
  }
  std::vector<ExtendedObservation> sequence(training.begin(), training.end());
  sequence.push_back(candidate);
  const Labels labels = taxonomy(sequence);
  if (labels.size() != sequence.size()) {
    throw std::invalid_argument("mondrian_pvalue: taxonomy returned wrong label count");
  }
  const auto scores = conformity_scores(measure, training, candidate);
  const double own = scores.back();
  std::size_t in_class = 0;
  std::size_t smaller = 0;
  std::size_t equal = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] != labels.back()) continue;
    ++in_class;
    if (scores[i] < own) ++smaller;
    else if (scores[i] == own) ++equal;
  }
  return (static_cast<double>(smaller) + tau * static_cast<double>(equal)) /
         static_cast<double>(in_class);
}

}  // namespace cpskit
