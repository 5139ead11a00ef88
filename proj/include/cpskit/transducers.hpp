#ifndef CPSKIT_TRANSDUCERS_HPP_
#define CPSKIT_TRANSDUCERS_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cpskit/conformity.hpp"
#include "cpskit/core.hpp"
#include "cpskit/partition.hpp"
#include "cpskit/random.hpp"

namespace cpskit {

// Equivalence classes on the indices of an augmented sequence: position k of
// the result labels sequence element k, and equal labels mean equivalent.
using Labels = std::vector<std::int64_t>;

// A taxonomy maps the augmented sequence (training followed by the test
// observation) to its labels.
using Taxonomy = std::function<Labels(std::span<const ExtendedObservation> sequence)>;

// Cell indices of the partition for n = xs.size() - 1 training predictors.
// Throws std::invalid_argument if xs is empty.
Labels histogram_taxonomy(std::span<const double> xs);

// Histogram taxonomy over scalar predictors; ignores responses.
Taxonomy histogram_taxonomy();

// Every index in one class (the Mondrian transducer then reduces to the
// conformal one).
Taxonomy single_class_taxonomy();

// Conformal transducer: with scores alpha_i obtained by swapping each
// training observation with the candidate,
//   (#{alpha_i < alpha_{n+1}} + tau * #{alpha_i == alpha_{n+1}}) / (n + 1),
// where i runs over 1..n+1. Throws std::invalid_argument for empty training
// data and std::domain_error for tau outside [0, 1].
double conformal_pvalue(const ConformityMeasure& measure,
                        std::span<const ExtendedObservation> training,
                        const ExtendedObservation& candidate, double tau);

// Mondrian transducer: as conformal_pvalue but counting only indices in the
// candidate's class and dividing by the class size.
double mondrian_pvalue(const Taxonomy& taxonomy, const ConformityMeasure& measure,
                       std::span<const ExtendedObservation> training,
                       const ExtendedObservation& candidate, double tau);

// Band Q_tau(y) = (#{c_i < y} + tau * (#{c_i == y} + 1)) / (n + 1) for
// critical points c_1..c_n; the shape shared by the Dempster-Hill, nearest
// neighbour and histogram Mondrian systems. Repeated critical points are
// handled exactly.
PredictiveBand critical_point_band(std::vector<double> critical_points);

// Dempster-Hill system: the conformal transducer of the trivial measure.
// Throws std::invalid_argument for an empty response list.
PredictiveBand dh_band(std::span<const double> responses);

// Training data with per-observation nearest neighbours, maintained
// incrementally so the online protocol costs O(n) per step.
class NearestNeighbourIndex {
 public:
  explicit NearestNeighbourIndex(Metric metric = euclidean_distance);

  void add(ExtendedObservation obs);

  std::size_t size() const { return data_.size(); }
  std::span<const ExtendedObservation> data() const { return data_; }

  // Conformal predictive band of the nearest-neighbour measure for test
  // predictor x with tie-break number theta. Requires size() >= 1.
  PredictiveBand band(std::span<const double> x, double theta) const;

  // Critical points of that band (one per training observation).
  std::vector<double> critical_points(std::span<const double> x, double theta) const;

 private:
  // Whether a point at distance `distance` from data_[i] with tie-break
  // number `theta` displaces data_[i]'s current nearest neighbour.
  bool beats_neighbour(std::size_t i, double distance, double theta) const;

  Metric metric_;
  std::vector<ExtendedObservation> data_;
  std::vector<long> neighbour_;
  std::vector<double> neighbour_distance_;
};

// Conformal predictive band of the nearest-neighbour measure.
PredictiveBand nn_band(std::span<const ExtendedObservation> training,
                       std::span<const double> x, double theta,
                       const Metric& metric = euclidean_distance);

// As above; tie-break numbers for the training data (in index order) and
// then the test observation are drawn from `stream`.
PredictiveBand nn_band(std::span<const Observation> training,
                       std::span<const double> x, RandomStream& stream,
                       const Metric& metric = euclidean_distance);

// Histogram Mondrian predictive system (trivial measure, histogram
// taxonomy) for scalar predictors.
PredictiveBand hmps_band(std::span<const Observation> training, double x);

// Histogram conformal predictive system: the conformal transducer of the
// histogram conformity measure, with the partition for n = training.size().
double hcps_pvalue(std::span<const ExtendedObservation> training,
                   const ExtendedObservation& candidate, double tau);
PredictiveBand hcps_band(std::span<const ExtendedObservation> training, double x,
                         double theta);

// Probability forecasting system: the empirical distribution of the
// responses in x's cell, or a point mass at 0 if the cell is empty.
PredictiveBand pfs_distribution(std::span<const Observation> training, double x);

// Venn predictor component Q_u: the empirical distribution function of the
// responses in the test observation's class, where the test observation
// (x, u) itself counts with response u. Returned as a band with
// lower == upper.
PredictiveBand venn_distribution(const Taxonomy& taxonomy,
                                 std::span<const Observation> training,
                                 std::span<const double> x, double u);

// Pointwise envelope [min_u Q_u, max_u Q_u] of the histogram-taxonomy Venn
// predictor. The class does not depend on u, so the envelope is attained by
// u -> +inf (lower) and u -> -inf (upper).
PredictiveBand venn_envelope(std::span<const Observation> training, double x);

}  // namespace cpskit

#endif  // CPSKIT_TRANSDUCERS_HPP_
