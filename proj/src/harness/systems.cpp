#include <cmath>
#include <string>
#include <vector>

#include "cpskit/harness.hpp"

namespace cpskit {
namespace {

double scalar(std::span<const double> x, SystemId id) {
  if (x.size() != 1) {
    throw std::invalid_argument(std::string(system_name(id)) +
                                ": unsupported predictor (needs d = 1)");
  }
  return x.front();
}

}  // namespace

SystemId parse_system(std::string_view name) {
  if (name == "dh") return SystemId::kDempsterHill;
  if (name == "nn") return SystemId::kNearestNeighbour;
  if (name == "hist-mondrian") return SystemId::kHistogramMondrian;
  if (name == "hist-conformal") return SystemId::kHistogramConformal;
  if (name == "pfs") return SystemId::kProbabilityForecast;
  if (name == "venn") return SystemId::kVenn;
  throw ConfigError("unknown system '" + std::string(name) + "'");
}

std::string_view system_name(SystemId id) {
  switch (id) {
    case SystemId::kDempsterHill: return "dh";
    case SystemId::kNearestNeighbour: return "nn";
    case SystemId::kHistogramMondrian: return "hist-mondrian";
    case SystemId::kHistogramConformal: return "hist-conformal";
    case SystemId::kProbabilityForecast: return "pfs";
    case SystemId::kVenn: return "venn";
  }
  return "unknown";
}

bool is_conformal(SystemId id) {
  return id == SystemId::kDempsterHill || id == SystemId::kNearestNeighbour ||
         id == SystemId::kHistogramConformal;
}

bool is_randomized_predictive(SystemId id) {
  return is_conformal(id) || id == SystemId::kHistogramMondrian;
}

PredictiveBand build_band(SystemId id, std::span<const ExtendedObservation> training,
                          std::span<const double> x, double theta) {
  switch (id) {
    case SystemId::kDempsterHill: {
      std::vector<double> responses;
      responses.reserve(training.size());
      for (const auto& e : training) responses.push_back(e.y());
      return dh_band(responses);
    }
    case SystemId::kNearestNeighbour:
      return nn_band(training, x, theta);
    case SystemId::kHistogramMondrian:
      return hmps_band(observations_of(training), scalar(x, id));
    case SystemId::kHistogramConformal:
      return hcps_band(training, scalar(x, id), theta);
    case SystemId::kProbabilityForecast:
      return pfs_distribution(observations_of(training), scalar(x, id));
    case SystemId::kVenn:
      return venn_envelope(observations_of(training), scalar(x, id));
  }
  throw ConfigError("unknown system");
}

TauPolicy TauPolicy::parse(std::string_view text) {
  if (text == "random") return TauPolicy{};
  constexpr std::string_view prefix = "fixed:";
  if (text.substr(0, prefix.size()) == prefix) {
    const std::string value(text.substr(prefix.size()));
    std::size_t used = 0;
    double tau = 0.0;
    try {
      tau = std::stod(value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == value.size() && !value.empty() && tau >= 0.0 && tau <= 1.0) {
      return TauPolicy{tau};
    }
  }
  throw ConfigError("tau policy must be 'random' or 'fixed:v' with v in [0, 1]");
}

}  // namespace cpskit
