#include <cmath>
#include <stdexcept>
#include <utility>

#include "cpskit/core.hpp"

namespace cpskit {

void check_observation(const Observation& obs) {
  if (obs.x.empty()) {
    throw std::invalid_argument("observation: predictor must have dimension >= 1");
  }
  for (double v : obs.x) {
    if (!std::isfinite(v)) throw std::invalid_argument("observation: non-finite predictor");
  }
  if (!std::isfinite(obs.y)) throw std::invalid_argument("observation: non-finite response");
}

void check_dataset(std::span<const Observation> data) {
  for (const auto& obs : data) {
    check_observation(obs);
    if (obs.x.size() != data.front().x.size()) {
      throw std::invalid_argument("dataset: predictor dimension varies between observations");
    }
  }
}

ExtendedObservation extend(Observation obs, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("extended observation: theta must lie in [0, 1]");
  }
  return ExtendedObservation{std::move(obs), theta};
}

std::vector<ExtendedObservation> extend(std::span<const Observation> data,
                                        RandomStream& stream) {
  std::vector<ExtendedObservation> out;
  out.reserve(data.size());
  for (const auto& obs : data) out.push_back(extend(obs, stream.uniform()));
  return out;
}

std::vector<Observation> observations_of(std::span<const ExtendedObservation> data) {
  std::vector<Observation> out;
  out.reserve(data.size());
  for (const auto& e : data) out.push_back(e.obs);
  return out;
}

}  // namespace cpskit
