#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "cpskit/harness.hpp"

namespace cpskit {
namespace {

struct Trial {
  std::vector<ExtendedObservation> training;
  ExtendedObservation test;
  double tau = 0.0;
};

// Observations from `data`, then theta_1..theta_{n+1} and tau from `noise`.
Trial draw_trial(const Sampler& sampler, int n, RandomStream data, RandomStream noise,
                 const TauPolicy& policy) {
  std::vector<Observation> observations;
  observations.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) observations.push_back(sampler.draw(data));
  auto extended = extend(observations, noise);
  const double tau = policy.fixed ? *policy.fixed : noise.uniform();
  Trial trial;
  trial.test = std::move(extended.back());
  extended.pop_back();
  trial.training = std::move(extended);
  trial.tau = tau;
  return trial;
}

double median(std::vector<double> values) {
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<long>(mid));
  return (lower + upper) / 2.0;
}

// (#{c < y} + tau * (#{c == y} + 1)) / (#c + 1) over sorted critical points.
double critical_point_pvalue(std::span<const double> sorted, double y, double tau) {
  auto [first, last] = std::equal_range(sorted.begin(), sorted.end(), y);
  const double below = static_cast<double>(first - sorted.begin());
  const double tied = static_cast<double>(last - first);
  return (below + tau * (tied + 1.0)) / static_cast<double>(sorted.size() + 1);
}

}  // namespace

std::vector<double> pit_sample(SystemId id, const Sampler& sampler, int n, int trials,
                               std::uint64_t master_seed, TauPolicy tau,
                               const BandObserver& observer) {
  if (!is_randomized_predictive(id)) {
    throw ConfigError(std::string(system_name(id)) +
                      " is not a randomized predictive system");
  }
  if (n < 1 || trials < 1) throw ConfigError("pit_sample: need n >= 1 and trials >= 1");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const auto trial_index = static_cast<std::uint64_t>(t);
    Trial trial = draw_trial(sampler, n, derive_stream(master_seed, {trial_index, 0}),
                             derive_stream(master_seed, {trial_index, 1}), tau);
    const PredictiveBand band =
        build_band(id, trial.training, trial.test.x(), trial.test.theta);
    if (observer) observer(band);
    values.push_back(band.evaluate(trial.test.y(), trial.tau));
  }
  return values;
}

double ks_uniform(std::span<const double> values) {
  if (values.empty()) throw std::domain_error("ks_uniform: no values");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("ks_uniform: value outside [0, 1]");
  }
  std::sort(sorted.begin(), sorted.end());
  const double m = static_cast<double>(sorted.size());
  double distance = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double above = static_cast<double>(i + 1) / m - sorted[i];
    const double below = sorted[i] - static_cast<double>(i) / m;
    distance = std::max({distance, above, below});
  }
  return distance;
}

double ks_threshold(std::size_t m) { return 1.628 / std::sqrt(static_cast<double>(m)); }

double online_coverage(SystemId id, const Sampler& sampler, int steps, double epsilon,
                       std::uint64_t master_seed) {
  if (!is_conformal(id)) {
    throw ConfigError(std::string(system_name(id)) +
                      ": online validity is only claimed for conformal systems");
  }
  if (steps < 1) throw ConfigError("online_coverage: need steps >= 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ConfigError("online_coverage: epsilon must lie in [0, 1]");
  }
  RandomStream data = derive_stream(master_seed, {0});
  RandomStream thetas = derive_stream(master_seed, {1});
  RandomStream taus = derive_stream(master_seed, {2});
  auto next = [&] { return extend(sampler.draw(data), thetas.uniform()); };

  std::vector<ExtendedObservation> training;
  std::vector<double> sorted_responses;
  NearestNeighbourIndex index;
  auto remember = [&](ExtendedObservation obs) {
    switch (id) {
      case SystemId::kDempsterHill:
        sorted_responses.insert(
            std::upper_bound(sorted_responses.begin(), sorted_responses.end(), obs.y()),
            obs.y());
        break;
      case SystemId::kNearestNeighbour:
        index.add(std::move(obs));
        break;
      default:
        training.push_back(std::move(obs));
    }
  };

  remember(next());
  const double low = epsilon / 2.0;
  const double high = 1.0 - epsilon / 2.0;
  int hits = 0;
  for (int step = 0; step < steps; ++step) {
    ExtendedObservation test = next();
    const double tau = taus.uniform();
    double pit = 0.0;
    switch (id) {
      case SystemId::kDempsterHill:
        pit = critical_point_pvalue(sorted_responses, test.y(), tau);
        break;
      case SystemId::kNearestNeighbour: {
        auto points = index.critical_points(test.x(), test.theta);
        std::sort(points.begin(), points.end());
        pit = critical_point_pvalue(points, test.y(), tau);
        break;
      }
      default:
        pit = hcps_pvalue(training, test, tau);
    }
    if (pit >= low && pit <= high) ++hits;
    remember(std::move(test));
  }
  return static_cast<double>(hits) / static_cast<double>(steps);
}

std::vector<ConsistencyPoint> consistency_curve(SystemId id, const Sampler& sampler,
                                                const TestFunction& f,
                                                std::span<const int> ns, int trials,
                                                std::uint64_t master_seed,
                                                const BandObserver& observer) {
  if (id == SystemId::kVenn) {
    throw ConfigError("consistency_curve: venn outputs a family, not one distribution");
  }
  if (trials < 1) throw ConfigError("consistency_curve: need trials >= 1");
  const std::vector<double> probe{0.5};
  if (!sampler.conditional_expectation(f, probe)) {
    throw ConfigError("sampler " + std::string(sampler.name()) +
                      " has no conditional-expectation oracle for " + f.name);
  }
  std::vector<ConsistencyPoint> curve;
  for (int n : ns) {
    if (n < 1) throw ConfigError("consistency_curve: sample sizes must be >= 1");
    ConsistencyPoint point;
    point.n = n;
    point.discrepancies.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
      const auto size = static_cast<std::uint64_t>(n);
      const auto trial_index = static_cast<std::uint64_t>(t);
      Trial trial = draw_trial(sampler, n, derive_stream(master_seed, {size, trial_index, 0}),
                               derive_stream(master_seed, {size, trial_index, 1}), {});
      const PredictiveBand band =
          build_band(id, trial.training, trial.test.x(), trial.test.theta);
      if (observer) observer(band);
      const double integral = band.integrate(f.f, trial.tau);
      const double truth = *sampler.conditional_expectation(f, trial.test.x());
      point.discrepancies.push_back(std::abs(integral - truth));
    }
    point.median = median(point.discrepancies);
    curve.push_back(std::move(point));
  }
  return curve;
}

VennCalibration venn_calibration(const Taxonomy& taxonomy, const Sampler& sampler, int n,
                                 int trials, std::span<const double> y_grid,
                                 std::uint64_t master_seed, const BandObserver& observer) {
  if (n < 1 || trials < 1) throw ConfigError("venn_calibration: need n >= 1 and trials >= 1");
  std::vector<double> prediction_sum(y_grid.size(), 0.0);
  std::vector<std::int64_t> at_or_below(y_grid.size(), 0);
  bool binary = true;
  // p -> (count, ones)
  std::map<Rational, std::pair<std::int64_t, std::int64_t>> bins;

  for (int t = 0; t < trials; ++t) {
    RandomStream stream = derive_stream(master_seed, {static_cast<std::uint64_t>(t)});
    std::vector<Observation> training;
    training.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) training.push_back(sampler.draw(stream));
    const Observation test = sampler.draw(stream);

    const PredictiveBand q = venn_distribution(taxonomy, training, test.x, test.y);
    if (observer) observer(q);
    for (std::size_t k = 0; k < y_grid.size(); ++k) {
      prediction_sum[k] += q.evaluate(y_grid[k], 0.0);
      if (test.y <= y_grid[k]) ++at_or_below[k];
    }

    if (!binary) continue;
    std::vector<ExtendedObservation> sequence;
    sequence.reserve(training.size() + 1);
    for (const auto& obs : training) sequence.push_back(ExtendedObservation{obs, 0.0});
    sequence.push_back(ExtendedObservation{test, 0.0});
    const Labels labels = taxonomy(sequence);
    std::int64_t size = 0;
    std::int64_t ones = 0;
    for (std::size_t i = 0; i < sequence.size(); ++i) {
      const double y = sequence[i].y();
      if (y != 0.0 && y != 1.0) binary = false;
      if (labels[i] != labels.back()) continue;
      ++size;
      if (y == 1.0) ++ones;
    }
    auto& bin = bins[Rational(ones, size)];
    ++bin.first;
    if (test.y == 1.0) ++bin.second;
  }

  VennCalibration result;
  result.trials = trials;
  for (std::size_t k = 0; k < y_grid.size(); ++k) {
    result.marginal.push_back(VennMarginalPoint{
        y_grid[k], prediction_sum[k] / trials,
        static_cast<double>(at_or_below[k]) / trials});
  }
  if (binary) {
    for (const auto& [p, counts] : bins) {
      result.conditional.push_back(VennConditionalBin{
          p, counts.first,
          static_cast<double>(counts.second) / static_cast<double>(counts.first)});
    }
  }
  return result;
}

nlohmann::json summary_json(double statistic, double threshold, bool pass) {
  return nlohmann::json{{"statistic", statistic}, {"threshold", threshold}, {"pass", pass}};
}

void write_pit_csv(std::ostream& out, std::span<const double> values) {
  out << "trial,pit\n";
  for (std::size_t t = 0; t < values.size(); ++t) {
    out << t << ',' << nlohmann::json(values[t]).dump() << '\n';
  }
}

void write_consistency_csv(std::ostream& out, std::span<const ConsistencyPoint> points) {
  out << "n,median_discrepancy\n";
  for (const auto& p : points) {
    out << p.n << ',' << nlohmann::json(p.median).dump() << '\n';
  }
}

}  // namespace cpskit
