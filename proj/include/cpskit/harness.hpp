#ifndef CPSKIT_HARNESS_HPP_
#define CPSKIT_HARNESS_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "json.hpp"

#include "cpskit/core.hpp"
#include "cpskit/random.hpp"
#include "cpskit/transducers.hpp"

namespace cpskit {

// Raised for incompatible experiment settings (unknown system, a property
// requested of a system that does not claim it, a missing oracle).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SystemId { kDempsterHill, kNearestNeighbour, kHistogramMondrian,
                      kHistogramConformal, kProbabilityForecast, kVenn };

// "dh", "nn", "hist-mondrian", "hist-conformal", "pfs", "venn".
SystemId parse_system(std::string_view name);
std::string_view system_name(SystemId id);

// Conformal systems satisfy the online (independent PIT) form of validity.
bool is_conformal(SystemId id);

// Randomized predictive systems: conformal and Mondrian ones.
bool is_randomized_predictive(SystemId id);

// Band output by `id` for training data, test predictor and test tie-break
// number. Venn yields the envelope over postulated responses.
PredictiveBand build_band(SystemId id, std::span<const ExtendedObservation> training,
                          std::span<const double> x, double theta);

struct TestFunction {
  std::string name;
  std::function<double(double)> f;
  double bound = 0.0;
};

// max(-1, min(1, y)).
TestFunction clamp_function();
TestFunction cos_function();
// "clamp" or "cos"; throws ConfigError otherwise.
TestFunction test_function(std::string_view name);

// An IID data source.
class Sampler {
 public:
  virtual ~Sampler() = default;

  virtual std::string_view name() const = 0;

  virtual Observation draw(RandomStream& stream) const = 0;

  // E(f(y) | x) in closed form, or nullopt when this sampler has no oracle
  // for f.
  virtual std::optional<double> conditional_expectation(
      const TestFunction& f, std::span<const double> x) const = 0;
};

// P1: x ~ U[0,1], y = 2x + v with v uniform on {-1, +1}.
// P2: x ~ U[0,1], y ~ U[0,1] independent of x.
// P3: x ~ U[0,1], y ~ Bernoulli(x).
// Throws ConfigError for other names.
std::unique_ptr<Sampler> make_sampler(std::string_view name);

// Observes every band an experiment builds (used for structural checks).
using BandObserver = std::function<void(const PredictiveBand&)>;

// How tau is chosen: drawn after the thetas, or fixed.
struct TauPolicy {
  std::optional<double> fixed;

  // "random" or "fixed:v" with v in [0, 1]; throws ConfigError otherwise.
  static TauPolicy parse(std::string_view text);
};

// Probability integral transforms Q(z_1..z_n, z_{n+1}, tau), one per trial.
// Trial t draws its observations from stream (seed, [t, 0]) and then
// theta_1..theta_{n+1} followed by tau from stream (seed, [t, 1]).
std::vector<double> pit_sample(SystemId id, const Sampler& sampler, int n, int trials,
                               std::uint64_t master_seed, TauPolicy tau = {},
                               const BandObserver& observer = {});

// Kolmogorov-Smirnov distance between the empirical distribution of
// `values` and U[0,1]. Throws std::domain_error for an empty list or values
// outside [0, 1].
double ks_uniform(std::span<const double> values);

// 1% critical value 1.628 / sqrt(m) of the KS distance for m values.
double ks_threshold(std::size_t m);

// Online protocol: at step k = 1..steps, predict z_{k+1} from z_1..z_k with a
// fresh tau and record whether the PIT falls in [eps/2, 1 - eps/2]. Returns
// the hit frequency. Throws ConfigError for non-conformal systems.
double online_coverage(SystemId id, const Sampler& sampler, int steps, double epsilon,
                       std::uint64_t master_seed);

struct ConsistencyPoint {
  int n = 0;
  double median = 0.0;
  std::vector<double> discrepancies;  // per trial, in trial order
};

// For each n: median over trials of |integral of f dQ_n - E(f | x_{n+1})|.
// Throws ConfigError if the sampler lacks an oracle for f or the system is
// Venn.
std::vector<ConsistencyPoint> consistency_curve(SystemId id, const Sampler& sampler,
                                                const TestFunction& f,
                                                std::span<const int> ns, int trials,
                                                std::uint64_t master_seed,
                                                const BandObserver& observer = {});

using Rational = boost::rational<std::int64_t>;

struct ExchangeableCalibration {
  Rational lhs;  // mean predictive distribution at y = 0
  Rational rhs;  // P(y_{n+1} <= 0)
  std::pair<Rational, Rational> jumps;  // jump positions of the two bands
};

struct IidCalibration {
  Rational lhs;
  Rational rhs;
  // Mean over tau of Q at y = 0 for the test sequences
  // ((-1), (1)), ((1), (-1)), ((-1), (-1)), ((1), (1)).
  std::array<Rational, 4> per_sequence;
};

// Exact enumerations showing that conformal predictive systems need not be
// marginally calibrated, for an exchangeable and for an IID two-point law.
ExchangeableCalibration marginal_calibration_exchangeable();
IidCalibration marginal_calibration_iid();

struct VennMarginalPoint {
  double y = 0.0;
  double mean_prediction = 0.0;  // mean of Q_{y_{n+1}}(y)
  double empirical = 0.0;        // frequency of y_{n+1} <= y
};

struct VennConditionalBin {
  Rational p;  // predicted probability of y_{n+1} = 1
  std::int64_t count = 0;
  double frequency = 0.0;  // observed frequency of y_{n+1} = 1
};

struct VennCalibration {
  int trials = 0;
  std::vector<VennMarginalPoint> marginal;
  // Filled only when every response drawn is 0 or 1; sorted by p.
  std::vector<VennConditionalBin> conditional;
};

// Monte-Carlo check of marginal (and, for binary responses, conditional)
// calibration of the Venn predictor component Q_{y_{n+1}}. Trial t uses
// stream (seed, [t]).
VennCalibration venn_calibration(const Taxonomy& taxonomy, const Sampler& sampler, int n,
                                 int trials, std::span<const double> y_grid,
                                 std::uint64_t master_seed,
                                 const BandObserver& observer = {});

// {"statistic":..,"threshold":..,"pass":..}
nlohmann::json summary_json(double statistic, double threshold, bool pass);

// "trial,pit" rows.
void write_pit_csv(std::ostream& out, std::span<const double> values);

// "n,median_discrepancy" rows.
void write_consistency_csv(std::ostream& out, std::span<const ConsistencyPoint> points);

}  // namespace cpskit

#endif  // CPSKIT_HARNESS_HPP_
