#ifndef CPSKIT_CONFORMITY_HPP_
#define CPSKIT_CONFORMITY_HPP_

#include <cstdint>
#include <functional>
#include <span>

#include "cpskit/core.hpp"
#include "cpskit/random.hpp"

namespace cpskit {

// A (possibly randomized) conformity measure: how large the candidate's
// response is in view of its predictor and the comparison data. Plain
// measures ignore the theta components. Implementations must be invariant
// under permutations of the comparison data (with thetas travelling with
// their observations).
using ConformityMeasure = std::function<double(
    std::span<const ExtendedObservation> data, const ExtendedObservation& candidate)>;

// Distance between predictor vectors.
using Metric = std::function<double(std::span<const double>, std::span<const double>)>;

double euclidean_distance(std::span<const double> a, std::span<const double> b);

// Returns candidate.y, ignoring everything else.
double trivial_score(std::span<const ExtendedObservation> data,
                     const ExtendedObservation& candidate);
double trivial_score(std::span<const Observation> data, const Observation& candidate);

// Position in `data` of the nearest neighbour of `point`. Distance ties are
// broken by the smaller theta, then by the smaller response, so the choice is
// uniform over the argmin set when the thetas are IID uniform, and it does not
// depend on the order of `data`. `skip` excludes one index. Returns -1 when
// no candidate remains.
long nearest_neighbour(std::span<const ExtendedObservation> data,
                       std::span<const double> point, const Metric& metric,
                       long skip = -1);

// candidate.y minus the response of the candidate's nearest neighbour in
// `data`. Throws std::invalid_argument if data is empty.
double nn_score(std::span<const ExtendedObservation> data,
                const ExtendedObservation& candidate,
                const Metric& metric = euclidean_distance);

// As above for plain observations: tie-break numbers for data (in index
// order) and then the candidate are drawn from `stream`.
double nn_score(std::span<const Observation> data, const Observation& candidate,
                RandomStream& stream, const Metric& metric = euclidean_distance);

// a / N, where N counts the comparison predictors in the candidate's cell of
// the partition for `n_for_partition` and a counts those whose (y, theta) is
// lexicographically <= the candidate's. With N = 0 the score is 1 for a
// non-negative response and 0 otherwise. Scalar predictors only: throws
// std::invalid_argument otherwise.
double histogram_score(std::span<const ExtendedObservation> data,
                       const ExtendedObservation& candidate,
                       std::int64_t n_for_partition);

ConformityMeasure trivial_measure();
ConformityMeasure nn_measure(Metric metric = euclidean_distance);
ConformityMeasure histogram_measure(std::int64_t n_for_partition);

// True iff the score stays within 1e-12 of its value on `data` across
// `trials` random permutations of data drawn from `stream`.
bool check_permutation_invariance(const ConformityMeasure& measure,
                                  std::span<const ExtendedObservation> data,
                                  const ExtendedObservation& candidate, int trials,
                                  RandomStream& stream);

// True iff the score is non-decreasing as the candidate's response runs along
// `y_grid` and non-increasing as the first comparison response does (the
// latter is skipped when data is empty). `y_grid` must be sorted and
// non-empty.
bool check_monotonic(const ConformityMeasure& measure,
                     std::span<const ExtendedObservation> data,
                     const ExtendedObservation& candidate,
                     std::span<const double> y_grid);

}  // namespace cpskit

#endif  // CPSKIT_CONFORMITY_HPP_
