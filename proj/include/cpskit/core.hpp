#ifndef CPSKIT_CORE_HPP_
#define CPSKIT_CORE_HPP_

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cpskit/random.hpp"

namespace cpskit {

// A predictor vector paired with a real response.
struct Observation {
  std::vector<double> x;
  double y = 0.0;
};

// An observation carrying a tie-break number theta in [0, 1].
struct ExtendedObservation {
  Observation obs;
  double theta = 0.0;

  std::span<const double> x() const { return obs.x; }
  double y() const { return obs.y; }
};

// Throws std::invalid_argument unless the predictor is non-empty and every
// coordinate and the response are finite.
void check_observation(const Observation& obs);

// Throws std::invalid_argument if the observations do not share one
// predictor dimension (or any of them fails check_observation).
void check_dataset(std::span<const Observation> data);

ExtendedObservation extend(Observation obs, double theta);

// Attaches theta_1, theta_2, ... to `data` in index order, drawing them from
// `stream`.
std::vector<ExtendedObservation> extend(std::span<const Observation> data,
                                        RandomStream& stream);

// Strips tie-break numbers.
std::vector<Observation> observations_of(
    std::span<const ExtendedObservation> data);

// The pair of functions y -> Q(..., y, 0) and y -> Q(..., y, 1) of a
// randomized predictive distribution, stored as a step function.
//
// With jumps c_0 < c_1 < ... < c_{m-1}, plateau k covers the open interval
// (c_{k-1}, c_k) where c_{-1} = -inf and c_m = +inf, so there are m + 1
// plateaus. The value at a jump location itself is stored separately because
// randomized systems widen it (the band is not right-continuous at jumps).
// For every tau the function is Q_tau = lower + tau * (upper - lower).
class PredictiveBand {
 public:
  // Validates list lengths and the predictive-system invariants; throws
  // std::invalid_argument on violation.
  PredictiveBand(std::vector<double> jumps, std::vector<double> lower,
                 std::vector<double> upper, std::vector<double> at_jump_lower,
                 std::vector<double> at_jump_upper);

  // A genuine right-continuous distribution function: plateau k carries
  // `plateaus[k]`, and the value at jump k equals the plateau to its right.
  static PredictiveBand distribution(std::vector<double> jumps,
                                     std::vector<double> plateaus);

  const std::vector<double>& jumps() const { return jumps_; }
  const std::vector<double>& lower() const { return lower_; }
  const std::vector<double>& upper() const { return upper_; }
  const std::vector<double>& at_jump_lower() const { return at_jump_lower_; }
  const std::vector<double>& at_jump_upper() const { return at_jump_upper_; }

  double lower_at(double y) const;
  double upper_at(double y) const;

  // Q_tau(y). Throws std::domain_error if tau is outside [0, 1].
  double evaluate(double y, double tau) const;

  // Q_1(y) - Q_0(y).
  double slack(double y) const;

  // Integral of f against the measure whose mass on (u, v] is
  // Q_tau(v+) - Q_tau(u+): jump k carries the difference of the plateaus on
  // either side. No mass sits at +-inf. Throws std::range_error if f is not
  // finite at some jump.
  double integrate(const std::function<double(double)>& f, double tau) const;

  bool operator==(const PredictiveBand&) const = default;

 private:
  // Index of the plateau containing y, or -1 - k when y == jumps_[k].
  long locate(double y) const;

  std::vector<double> jumps_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<double> at_jump_lower_;
  std::vector<double> at_jump_upper_;
};

// Returns a description of the first violated band invariant: list lengths,
// strictly increasing jumps, values in [0, 1], lower <= upper, monotonicity
// in y of both boundaries, and the limits lower -> 0 at -inf and upper -> 1
// at +inf. nullopt means the band is a valid randomized predictive
// distribution.
std::optional<std::string> band_violation(
    std::span<const double> jumps, std::span<const double> lower,
    std::span<const double> upper, std::span<const double> at_jump_lower,
    std::span<const double> at_jump_upper);

double evaluate(const PredictiveBand& band, double y, double tau);
double slack(const PredictiveBand& band, double y);
double integrate(const PredictiveBand& band,
                 const std::function<double(double)>& f, double tau);

// {"jumps":[...],"lower":[...],"upper":[...],"at_jump_lower":[...],
//  "at_jump_upper":[...]}
nlohmann::json band_to_json(const PredictiveBand& band);

// Throws std::invalid_argument on missing fields or invariant violations.
PredictiveBand band_from_json(const nlohmann::json& doc);

}  // namespace cpskit

#endif  // CPSKIT_CORE_HPP_
