#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"

#include "cpskit/core.hpp"
#include "cpskit/transducers.hpp"
#include "oracles.hpp"

using namespace cpskit;

namespace {

const std::vector<double> kOneThree{1.0, 3.0};

}  // namespace

TEST_CASE("evaluate follows the Dempster-Hill closed form") {
  const PredictiveBand band = dh_band(kOneThree);
  CHECK(evaluate(band, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(evaluate(band, 1.0, 1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(evaluate(band, -100.0, 0.0) == 0.0);
  for (double y : {0.0, 1.0, 1.5, 3.0, 7.0}) {
    for (double tau : {0.0, 0.3, 1.0}) {
      CHECK(evaluate(band, y, tau) == doctest::Approx(oracle::dempster_hill(kOneThree, y, tau)));
    }
  }
}

TEST_CASE("evaluate rejects tau outside the unit interval") {
  const PredictiveBand band = dh_band(kOneThree);
  CHECK_THROWS_AS(evaluate(band, 2.0, -0.1), std::domain_error);
  CHECK_THROWS_AS(evaluate(band, 2.0, 1.5), std::domain_error);
  CHECK_THROWS_AS(evaluate(band, 2.0, std::nan("")), std::domain_error);
}

TEST_CASE("evaluate is linear and non-decreasing in tau") {
  RandomStream stream(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> responses;
    for (int i = 0; i < 6; ++i) responses.push_back(std::floor(stream.uniform() * 4));
    const PredictiveBand band = dh_band(responses);
    const double y = std::floor(stream.uniform() * 5) - 0.5 * (trial % 2);
    const double q0 = band.evaluate(y, 0.0);
    const double q1 = band.evaluate(y, 1.0);
    CHECK(q1 >= q0);
    for (double tau : {0.25, 0.5, 0.9}) {
      CHECK(band.evaluate(y, tau) == doctest::Approx(q0 + tau * (q1 - q0)).epsilon(1e-12));
    }
  }
}

TEST_CASE("slack of the Dempster-Hill band") {
  const PredictiveBand band = dh_band(kOneThree);
  CHECK(slack(band, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(slack(band, 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  const PredictiveBand degenerate = PredictiveBand::distribution({0.0, 1.0}, {0.0, 0.5, 1.0});
  for (double y : {-1.0, 0.0, 0.5, 1.0, 2.0}) CHECK(slack(degenerate, y) == 0.0);
}

TEST_CASE("integrate sums f over plateau differences") {
  auto square = [](double y) { return y * y; };
  const double expected = oracle::dempster_hill_integral(kOneThree, square, 0.4);
  CHECK(expected == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
  const PredictiveBand band = dh_band(kOneThree);
  for (double tau : {0.0, 0.4, 1.0}) {
    CHECK(integrate(band, square, tau) == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
  }

  const std::vector<Observation> training{{{0.1}, 2.0}, {{0.2}, 5.0}};
  const PredictiveBand mondrian = hmps_band(training, 0.3);
  for (double tau : {0.0, 0.37, 1.0}) {
    CHECK(integrate(mondrian, [](double y) { return y; }, tau) ==
          doctest::Approx(7.0 / 3.0).epsilon(1e-12));
  }

  const PredictiveBand proper = pfs_distribution(training, 0.3);
  CHECK(integrate(proper, [](double) { return 1.0; }, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate rejects non-finite integrands") {
  const PredictiveBand band = dh_band(kOneThree);
  CHECK_THROWS_AS(integrate(band, [](double y) { return y > 2 ? std::nan("") : y; }, 0.5),
                  std::range_error);
  CHECK_THROWS_AS(integrate(band, [](double y) { return 1.0 / (y - 1.0); }, 0.5),
                  std::range_error);
}

TEST_CASE("integral does not depend on tau when plateau slack is constant") {
  RandomStream stream(5);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> responses;
    for (int i = 0; i < 1 + trial % 9; ++i) responses.push_back(stream.uniform());
    const PredictiveBand band = dh_band(responses);
    auto f = [](double y) { return std::cos(3 * y); };
    CHECK(integrate(band, f, 0.0) == doctest::Approx(integrate(band, f, 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("band constructor enforces the invariants") {
  // Wrong list lengths.
  CHECK_THROWS_AS(PredictiveBand({0.0}, {0.0}, {1.0}, {0.0}, {1.0}), std::invalid_argument);
  // Jumps not increasing.
  CHECK_THROWS_AS(PredictiveBand({1.0, 1.0}, {0, 0, 0}, {1, 1, 1}, {0, 0}, {1, 1}),
                  std::invalid_argument);
  // Lower above upper.
  CHECK_THROWS_AS(PredictiveBand({0.0}, {0.0, 0.8}, {0.5, 1.0}, {0.6}, {0.5}),
                  std::invalid_argument);
  // Not monotone in y.
  CHECK_THROWS_AS(PredictiveBand({0.0}, {0.0, 0.2}, {0.5, 1.0}, {0.3}, {0.6}),
                  std::invalid_argument);
  // Left limit not 0 / right limit not 1.
  CHECK_THROWS_AS(PredictiveBand({}, {0.1}, {1.0}, {}, {}), std::invalid_argument);
  CHECK_THROWS_AS(PredictiveBand({}, {0.0}, {0.9}, {}, {}), std::invalid_argument);
  // Outside [0, 1].
  CHECK_THROWS_AS(PredictiveBand({0.0}, {0.0, 1.0}, {1.0, 1.2}, {0.5}, {1.0}),
                  std::invalid_argument);
  CHECK_NOTHROW(PredictiveBand({}, {0.0}, {1.0}, {}, {}));
}

TEST_CASE("band JSON round trip preserves every value") {
  RandomStream stream(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> responses;
    for (int i = 0; i < 1 + trial; ++i) responses.push_back(std::round(stream.uniform() * 8));
    const PredictiveBand band = dh_band(responses);
    const auto doc = band_to_json(band);
    CHECK(band_from_json(nlohmann::json::parse(doc.dump())) == band);
  }
  const auto doc = band_to_json(dh_band(kOneThree));
  for (const char* key : {"jumps", "lower", "upper", "at_jump_lower", "at_jump_upper"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["lower"].size() == doc["jumps"].size() + 1);
  CHECK_THROWS_AS(band_from_json(nlohmann::json{{"jumps", {1.0}}}), std::invalid_argument);
  auto broken = doc;
  broken["lower"][0] = 0.5;
  CHECK_THROWS_AS(band_from_json(broken), std::invalid_argument);
}

TEST_CASE("observations are validated") {
  CHECK_THROWS_AS(check_observation(Observation{{}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(check_observation(Observation{{std::nan("")}, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(check_observation(Observation{{0.0}, INFINITY}), std::invalid_argument);
  const std::vector<Observation> mixed{{{0.0}, 1.0}, {{0.0, 1.0}, 1.0}};
  CHECK_THROWS_AS(check_dataset(mixed), std::invalid_argument);
  CHECK_THROWS_AS(extend(Observation{{0.0}, 0.0}, 1.5), std::invalid_argument);
  CHECK(extend(Observation{{0.0}, 0.0}, 1.0).theta == 1.0);
}
