#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cpskit/transducers.hpp"
#include "oracles.hpp"

using namespace cpskit;

namespace {

ExtendedObservation ext(double x, double y, double theta = 0.5) {
  return extend(Observation{{x}, y}, theta);
}

std::vector<ExtendedObservation> with_responses(const std::vector<double>& ys, double x = 0.1) {
  std::vector<ExtendedObservation> out;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    out.push_back(ext(x, ys[i], (static_cast<double>(i) + 1.0) / (ys.size() + 1.0)));
  }
  return out;
}

// Query responses: every training response, midpoints, and random values.
std::vector<double> query_points(std::span<const ExtendedObservation> data, RandomStream& stream) {
  std::vector<double> ys;
  for (const auto& e : data) {
    ys.push_back(e.y());
    ys.push_back(e.y() + 0.25);
  }
  for (int k = 0; k < 6; ++k) ys.push_back(6.0 * stream.uniform() - 3.0);
  return ys;
}

}  // namespace

TEST_CASE("h_schedule") {
  CHECK(h_schedule(1) == 1.0);
  CHECK(h_schedule(7) == 1.0);
  CHECK(h_schedule(8) == 0.5);
  CHECK(h_schedule(512) == 0.125);
  CHECK(h_schedule(511) == 0.25);
  CHECK_THROWS_AS(h_schedule(0), std::domain_error);
  double previous = 2.0;
  for (std::int64_t n = 1; n < 100000; n = n * 3 + 1) {
    const double h = h_schedule(n);
    CHECK(h <= previous);
    CHECK(std::exp2(std::round(std::log2(h))) == h);
    CHECK(static_cast<double>(n) * h >= std::cbrt(static_cast<double>(n)) * 0.99);
    previous = h;
  }
}

TEST_CASE("partitions for growing n are nested") {
  RandomStream stream(4);
  for (int k = 0; k < 500; ++k) {
    const double a = 4.0 * stream.uniform() - 2.0;
    const double b = 4.0 * stream.uniform() - 2.0;
    const HistogramPartition fine(1 << 12);
    const HistogramPartition coarse(1 << 6);
    if (fine.same_cell(a, b)) CHECK(coarse.same_cell(a, b));
  }
  const HistogramPartition p(8);
  CHECK(p.width() == 0.5);
  CHECK(p.cell(-0.1) == -1);
  CHECK(p.bounds(1) == std::pair<double, double>(0.5, 1.0));
}

TEST_CASE("histogram taxonomy uses half-open cells") {
  // Nine predictors: n = 8 training plus one test point, so h = 1/2.
  const std::vector<double> xs{0.3, 0.4, 0.5, 0.99, 0.0, 0.49, 1.0, -0.2, 0.7};
  const Labels labels = histogram_taxonomy(xs);
  CHECK(labels[0] == labels[1]);
  CHECK(labels[2] != labels[1]);
  CHECK(labels[2] == labels[3]);
  CHECK(labels[2] == labels[8]);
  CHECK(labels[4] == labels[5]);
  CHECK(labels[6] != labels[3]);
  CHECK(labels[7] != labels[4]);
  CHECK_THROWS_AS(histogram_taxonomy(std::span<const double>{}), std::invalid_argument);
}

TEST_CASE("histogram taxonomy is equivariant") {
  RandomStream stream(21);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> xs;
    for (int i = 0; i < 12; ++i) xs.push_back(stream.uniform());
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size() - 1; i > 0; --i) std::swap(order[i], order[stream.below(i + 1)]);
    std::vector<double> permuted;
    for (auto i : order) permuted.push_back(xs[i]);
    const Labels a = histogram_taxonomy(xs);
    const Labels b = histogram_taxonomy(permuted);
    for (std::size_t k = 0; k < order.size(); ++k) {
      for (std::size_t l = 0; l < order.size(); ++l) {
        CHECK((a[order[k]] == a[order[l]]) == (b[k] == b[l]));
      }
    }
  }
}

TEST_CASE("conformal p-values of the trivial measure") {
  const auto training = with_responses({1.0, 3.0});
  const auto measure = trivial_measure();
  CHECK(conformal_pvalue(measure, training, ext(0.0, 2.0), 0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(conformal_pvalue(measure, training, ext(0.0, 0.0), 0.0) == 0.0);
  CHECK(conformal_pvalue(measure, training, ext(0.0, 1.0), 1.0) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(conformal_pvalue(measure, {}, ext(0.0, 1.0), 0.5), std::invalid_argument);
  CHECK_THROWS_AS(conformal_pvalue(measure, training, ext(0.0, 1.0), 2.0), std::domain_error);
}

TEST_CASE("Mondrian p-values") {
  // n = 3, h = 1: 0.1, 0.2 and the candidate share cell 0; 1.5 is elsewhere.
  std::vector<ExtendedObservation> training{ext(0.1, 2.0), ext(0.2, 5.0), ext(1.5, -7.0)};
  const auto taxonomy = histogram_taxonomy();
  const auto measure = trivial_measure();
  CHECK(mondrian_pvalue(taxonomy, measure, training, ext(0.3, 3.0), 0.0) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(mondrian_pvalue(taxonomy, measure, training, ext(0.3, 3.0), 1.0) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(mondrian_pvalue(taxonomy, measure, training, ext(2.5, 3.0), 0.0) == 0.0);
  CHECK(mondrian_pvalue(taxonomy, measure, training, ext(2.5, 3.0), 1.0) == 1.0);

  RandomStream stream(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto data = extend(oracle::random_dataset(stream, 1 + stream.below(8), 1, true), stream);
    const auto candidate = ext(stream.uniform(), std::floor(5 * stream.uniform()) - 2, stream.uniform());
    const double tau = stream.uniform();
    CHECK(mondrian_pvalue(single_class_taxonomy(), nn_measure(), data, candidate, tau) ==
          conformal_pvalue(nn_measure(), data, candidate, tau));
  }
}

TEST_CASE("Dempster-Hill band") {
  const std::vector<double> responses{1.0, 3.0};
  const PredictiveBand band = dh_band(responses);
  CHECK(band.lower_at(2.0) == doctest::Approx(1.0 / 3.0));
  CHECK(band.upper_at(2.0) == doctest::Approx(2.0 / 3.0));
  CHECK(band.lower_at(1.0) == 0.0);
  CHECK(band.upper_at(1.0) == doctest::Approx(2.0 / 3.0));
  CHECK(band.lower_at(0.0) == 0.0);
  CHECK(band.upper_at(0.0) == doctest::Approx(1.0 / 3.0));
  CHECK(band.jumps() == std::vector<double>{1.0, 3.0});
  CHECK_THROWS_AS(dh_band(std::span<const double>{}), std::invalid_argument);

  const PredictiveBand tied = dh_band(std::vector<double>{2.0, 2.0, 2.0});
  CHECK(tied.lower_at(2.0) == 0.0);
  CHECK(tied.upper_at(2.0) == 1.0);
  CHECK(tied.upper_at(1.0) == doctest::Approx(0.25));
  CHECK(tied.lower_at(3.0) == doctest::Approx(0.75));
}

TEST_CASE("nearest neighbour band") {
  const std::vector<ExtendedObservation> training{ext(0.0, 0.0, 0.3), ext(10.0, 1.0, 0.6)};
  const std::vector<double> x{0.1};
  const PredictiveBand band = nn_band(training, x, 0.5);
  CHECK(band.jumps() == std::vector<double>{0.0, 0.5});
  CHECK(band.lower_at(0.25) == doctest::Approx(1.0 / 3.0));
  CHECK(band.upper_at(0.25) == doctest::Approx(2.0 / 3.0));

  const std::vector<ExtendedObservation> single{ext(0.0, 5.0, 0.2)};
  const std::vector<double> origin{0.0};
  const PredictiveBand lone = nn_band(single, origin, 0.9);
  CHECK(lone.jumps() == std::vector<double>{5.0});
  CHECK(lone.lower_at(4.0) == 0.0);
  CHECK(lone.upper_at(4.0) == 0.5);

  const std::vector<Observation> plain{{{0.0}, 5.0}};
  RandomStream stream(3);
  CHECK(nn_band(plain, origin, stream).jumps() == std::vector<double>{5.0});
  CHECK_THROWS_AS(nn_band(std::span<const ExtendedObservation>{}, origin, 0.5),
                  std::invalid_argument);
}

TEST_CASE("nearest neighbour band with identical predictors") {
  // All predictors coincide, so neighbours are chosen by theta alone. When
  // the test theta is not among the two smallest, the critical points are
  // the responses except at the training point with the smallest theta.
  // No response is a midpoint or reflection of two others.
  const std::vector<Observation> training{
      {{0.0}, 1.0}, {{0.0}, 2.0}, {{0.0}, 4.5}, {{0.0}, 9.0}};
  const std::vector<double> x{0.0};
  std::vector<int> exceptional(training.size(), 0);
  int single_exception = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    RandomStream stream = derive_stream(55, {static_cast<std::uint64_t>(t)});
    const auto extended = extend(training, stream);
    const double theta = stream.uniform();
    NearestNeighbourIndex index;
    for (const auto& e : extended) index.add(e);
    const auto points = index.critical_points(x, theta);
    std::vector<std::size_t> differing;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (points[i] != training[i].y) differing.push_back(i);
    }
    if (differing.size() == 1) {
      ++single_exception;
      ++exceptional[differing.front()];
    }
    CHECK(index.band(x, theta).jumps().size() == training.size());
  }
  const double n = static_cast<double>(training.size());
  CHECK(std::abs(single_exception / static_cast<double>(trials) - (n - 1) / (n + 1)) < 0.05);
  for (int count : exceptional) {
    CHECK(std::abs(count / static_cast<double>(single_exception) - 1.0 / n) < 0.06);
  }
}

TEST_CASE("histogram Mondrian band") {
  const std::vector<Observation> training{{{0.1}, 2.0}, {{0.2}, 5.0}};
  const PredictiveBand band = hmps_band(training, 0.3);
  CHECK(band.lower_at(3.0) == doctest::Approx(1.0 / 3.0));
  CHECK(band.upper_at(3.0) == doctest::Approx(2.0 / 3.0));

  // n = 8 gives h = 1/2: the test cell [0.5, 1) is empty.
  std::vector<Observation> left;
  for (int i = 0; i < 8; ++i) left.push_back({{0.05 * i}, static_cast<double>(i)});
  const PredictiveBand empty = hmps_band(left, 0.7);
  for (double y : {-10.0, 0.0, 3.0, 100.0}) {
    CHECK(empty.lower_at(y) == 0.0);
    CHECK(empty.upper_at(y) == 1.0);
  }
  const std::vector<Observation> vector_x{{{0.1, 0.2}, 1.0}};
  CHECK_THROWS_AS(hmps_band(vector_x, 0.3), std::invalid_argument);
}

TEST_CASE("histogram conformal band") {
  const std::vector<ExtendedObservation> one{ext(0.0, 4.0, 0.4)};
  CHECK(hcps_pvalue(one, ext(0.5, 10.0, 0.7), 1.0) == 1.0);
  CHECK(hcps_band(one, 0.5, 0.7).evaluate(10.0, 1.0) == 1.0);

  RandomStream stream(6);
  const auto data = extend(oracle::random_dataset(stream, 15, 1, false), stream);
  const PredictiveBand band = hcps_band(data, 0.4, 0.5);
  CHECK(band.evaluate(-100.0, 0.0) == 0.0);
  CHECK(band.evaluate(100.0, 1.0) == 1.0);
  CHECK(oracle::satisfies_r1_by_probing(band));
}

TEST_CASE("probability forecasting system") {
  const std::vector<Observation> training{{{0.1}, 2.0}, {{0.2}, 5.0}};
  const PredictiveBand pfs = pfs_distribution(training, 0.3);
  CHECK(pfs.evaluate(3.0, 0.3) == doctest::Approx(0.5));
  CHECK(pfs.slack(3.0) == 0.0);

  const std::vector<Observation> repeated{{{0.1}, 2.0}, {{0.2}, 2.0}, {{0.3}, 5.0}};
  CHECK(pfs_distribution(repeated, 0.3).evaluate(2.0, 0.0) == doctest::Approx(2.0 / 3.0));

  std::vector<Observation> left;
  for (int i = 0; i < 8; ++i) left.push_back({{0.05 * i}, static_cast<double>(i)});
  const PredictiveBand empty = pfs_distribution(left, 0.7);
  CHECK(empty.evaluate(0.0, 0.5) == 1.0);
  CHECK(empty.evaluate(-0.1, 0.5) == 0.0);
}

TEST_CASE("Venn predictor components") {
  const std::vector<Observation> training{{{0.1}, 0.0}, {{0.2}, 1.0}};
  const std::vector<double> x{0.3};
  const auto taxonomy = histogram_taxonomy();
  CHECK(venn_distribution(taxonomy, training, x, 0.0).evaluate(0.5, 0.0) ==
        doctest::Approx(2.0 / 3.0));
  CHECK(venn_distribution(taxonomy, training, x, 1.0).evaluate(0.5, 0.0) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(venn_distribution(taxonomy, training, x, 1.0).evaluate(1.0, 0.0) == 1.0);
  CHECK(venn_distribution(taxonomy, training, x, 7.0).evaluate(7.0, 1.0) == 1.0);

  const PredictiveBand envelope = venn_envelope(training, 0.3);
  for (double y : {-1.0, 0.0, 0.5, 1.0, 2.0}) {
    double low = 1.0;
    double high = 0.0;
    for (double u : {-5.0, 0.0, 0.5, 1.0, 5.0}) {
      const double q = venn_distribution(taxonomy, training, x, u).evaluate(y, 0.0);
      low = std::min(low, q);
      high = std::max(high, q);
      CHECK(q >= envelope.lower_at(y) - 1e-12);
      CHECK(q <= envelope.upper_at(y) + 1e-12);
    }
    CHECK(envelope.lower_at(y) == doctest::Approx(low));
    CHECK(envelope.upper_at(y) == doctest::Approx(high));
  }
}

TEST_CASE("bands agree with the generic transducers") {
  RandomStream stream(2718);
  double worst = 0.0;
  for (int dataset = 0; dataset < 100; ++dataset) {
    const bool coarse = dataset % 3 != 0;
    const std::size_t n = 1 + stream.below(30);
    const std::size_t dimension = dataset % 4 == 0 ? 2 : 1;
    const auto data = extend(oracle::random_dataset(stream, n, dimension, coarse), stream);
    const auto plain = observations_of(data);
    const auto test_x = oracle::random_dataset(stream, 1, dimension, coarse).front().x;
    const double theta = stream.uniform();

    std::vector<double> responses;
    for (const auto& e : data) responses.push_back(e.y());
    const PredictiveBand dh = dh_band(responses);
    const PredictiveBand nn = nn_band(data, test_x, theta);
    const bool scalar = dimension == 1;

    for (double y : query_points(data, stream)) {
      const double tau = stream.uniform();
      const auto candidate = extend(Observation{test_x, y}, theta);
      worst = std::max(worst, std::abs(dh.evaluate(y, tau) -
                                       conformal_pvalue(trivial_measure(), data, candidate, tau)));
      worst = std::max(worst, std::abs(nn.evaluate(y, tau) -
                                       conformal_pvalue(nn_measure(), data, candidate, tau)));
      if (scalar) {
        const double expected_hcps = conformal_pvalue(
            histogram_measure(static_cast<std::int64_t>(n)), data, candidate, tau);
        worst = std::max(worst,
                         std::abs(hcps_band(data, test_x[0], theta).evaluate(y, tau) - expected_hcps));
        worst = std::max(worst, std::abs(hcps_pvalue(data, candidate, tau) - expected_hcps));
        worst = std::max(
            worst, std::abs(hmps_band(plain, test_x[0]).evaluate(y, tau) -
                            mondrian_pvalue(histogram_taxonomy(), trivial_measure(), data,
                                            candidate, tau)));
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("Dempster-Hill band matches the closed form") {
  RandomStream stream(8);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> responses;
    for (std::size_t i = 0; i < 1 + stream.below(20); ++i) responses.push_back(stream.uniform());
    const PredictiveBand band = dh_band(responses);
    for (int q = 0; q < 10; ++q) {
      const double y = q % 2 == 0 ? responses[stream.below(responses.size())] : stream.uniform();
      const double tau = stream.uniform();
      CHECK(band.evaluate(y, tau) ==
            doctest::Approx(oracle::dempster_hill(responses, y, tau)).epsilon(1e-12));
    }
  }
}
