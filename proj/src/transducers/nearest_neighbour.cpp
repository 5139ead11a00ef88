#include <stdexcept>
#include <utility>

#include "cpskit/transducers.hpp"

namespace cpskit {

NearestNeighbourIndex::NearestNeighbourIndex(Metric metric) : metric_(std::move(metric)) {}

bool NearestNeighbourIndex::beats_neighbour(std::size_t i, double distance,
                                            double theta) const {
  const long current = neighbour_[i];
  if (current < 0) return true;
  const double d = neighbour_distance_[i];
  return distance < d || (distance == d && theta < data_[current].theta);
}

void NearestNeighbourIndex::add(ExtendedObservation obs) {
  check_observation(obs.obs);
  if (!data_.empty() && obs.obs.x.size() != data_.front().obs.x.size()) {
    throw std::invalid_argument("NearestNeighbourIndex: predictor dimension mismatch");
  }
  const long own = nearest_neighbour(data_, obs.x(), metric_);
  const double own_distance = own >= 0 ? metric_(data_[own].x(), obs.x()) : 0.0;
  const long index = static_cast<long>(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double d = metric_(data_[i].x(), obs.x());
    const long current = neighbour_[i];
    // Full tie-break order of nearest_neighbour(), including the response.
    const bool better =
        current < 0 || d < neighbour_distance_[i] ||
        (d == neighbour_distance_[i] &&
         (obs.theta < data_[current].theta ||
          (obs.theta == data_[current].theta && obs.y() < data_[current].y())));
    if (better) {
      neighbour_[i] = index;
      neighbour_distance_[i] = d;
    }
  }
  data_.push_back(std::move(obs));
  neighbour_.push_back(own);
  neighbour_distance_.push_back(own_distance);
}

std::vector<double> NearestNeighbourIndex::critical_points(std::span<const double> x,
                                                           double theta) const {
  if (data_.empty()) throw std::invalid_argument("nn_band: training data is empty");
  if (x.size() != data_.front().obs.x.size()) {
    throw std::invalid_argument("nn_band: predictor dimension mismatch");
  }
  const double predicted = data_[nearest_neighbour(data_, x, metric_)].y();
  std::vector<double> points;
  points.reserve(data_.size());
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double d = metric_(data_[i].x(), x);
    if (beats_neighbour(i, d, theta)) {
      // The test point is i's nearest neighbour: alpha_i = y_i - y, which
      // meets alpha_{n+1} = y - predicted halfway.
      points.push_back((predicted + data_[i].y()) / 2.0);
    } else {
      points.push_back(predicted + (data_[i].y() - data_[neighbour_[i]].y()));
    }
  }
  return points;
}

PredictiveBand NearestNeighbourIndex::band(std::span<const double> x, double theta) const {
  return critical_point_band(critical_points(x, theta));
}

PredictiveBand nn_band(std::span<const ExtendedObservation> training,
                       std::span<const double> x, double theta, const Metric& metric) {
  NearestNeighbourIndex index(metric);
  for (const auto& e : training) index.add(e);
  return index.band(x, theta);
}

PredictiveBand nn_band(std::span<const Observation> training, std::span<const double> x,
                       RandomStream& stream, const Metric& metric) {
  const auto extended = extend(training, stream);
  const double theta = stream.uniform();
  return nn_band(extended, x, theta, metric);
}

}  // namespace cpskit
