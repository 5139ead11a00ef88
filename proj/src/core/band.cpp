#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "cpskit/core.hpp"

namespace cpskit {
namespace {

constexpr double kTolerance = 1e-12;

std::vector<double> read_list(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw std::invalid_argument(std::string("band JSON: missing array \"") +
                                key + "\"");
  }
  std::vector<double> out;
  for (const auto& v : doc.at(key)) {
    if (!v.is_number()) {
      throw std::invalid_argument(std::string("band JSON: non-numeric entry in \"") +
                                  key + "\"");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::optional<std::string> band_violation(std::span<const double> jumps,
                                          std::span<const double> lower,
                                          std::span<const double> upper,
                                          std::span<const double> at_jump_lower,
                                          std::span<const double> at_jump_upper) {
  const std::size_t m = jumps.size();
  if (lower.size() != m + 1 || upper.size() != m + 1) {
    return "plateau lists must have one more entry than jumps";
  }
  if (at_jump_lower.size() != m || at_jump_upper.size() != m) {
    return "jump value lists must have one entry per jump";
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (!std::isfinite(jumps[k])) return "jump locations must be finite";
    if (k > 0 && !(jumps[k - 1] < jumps[k])) {
      return "jump locations must be strictly increasing";
    }
  }

  // Walk both boundaries in increasing y: plateau 0, jump 0, plateau 1, ...
  std::vector<double> lo, hi;
  lo.reserve(2 * m + 1);
  hi.reserve(2 * m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    lo.push_back(lower[k]);
    hi.push_back(upper[k]);
    if (k < m) {
      lo.push_back(at_jump_lower[k]);
      hi.push_back(at_jump_upper[k]);
    }
  }
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!(lo[k] >= 0.0 && lo[k] <= 1.0 && hi[k] >= 0.0 && hi[k] <= 1.0)) {
      return "band values must lie in [0, 1]";
    }
    if (lo[k] > hi[k] + kTolerance) return "lower boundary exceeds upper boundary";
    if (k > 0 && (lo[k] + kTolerance < lo[k - 1] || hi[k] + kTolerance < hi[k - 1])) {
      return "band is not monotonically increasing in y";
    }
  }
  if (std::abs(lower.front()) > kTolerance) {
    return "lower boundary must vanish at -infinity";
  }
  if (std::abs(upper.back() - 1.0) > kTolerance) {
    return "upper boundary must reach 1 at +infinity";
  }
  return std::nullopt;
}

PredictiveBand::PredictiveBand(std::vector<double> jumps,
                               std::vector<double> lower,
                               std::vector<double> upper,
                               std::vector<double> at_jump_lower,
                               std::vector<double> at_jump_upper)
    : jumps_(std::move(jumps)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      at_jump_lower_(std::move(at_jump_lower)),
      at_jump_upper_(std::move(at_jump_upper)) {
  if (auto problem = band_violation(jumps_, lower_, upper_, at_jump_lower_,
                                    at_jump_upper_)) {
    throw std::invalid_argument("PredictiveBand: " + *problem);
  }
}

PredictiveBand PredictiveBand::distribution(std::vector<double> jumps,
                                            std::vector<double> plateaus) {
  if (plateaus.size() != jumps.size() + 1) {
    throw std::invalid_argument(
        "PredictiveBand::distribution: need one more plateau than jumps");
  }
  std::vector<double> at_jump(plateaus.begin() + 1, plateaus.end());
  std::vector<double> upper = plateaus;
  std::vector<double> at_jump_upper = at_jump;
  return PredictiveBand(std::move(jumps), std::move(plateaus), std::move(upper),
                        std::move(at_jump), std::move(at_jump_upper));
}

long PredictiveBand::locate(double y) const {
  auto it = std::lower_bound(jumps_.begin(), jumps_.end(), y);
  const long k = it - jumps_.begin();
  if (it != jumps_.end() && *it == y) return -1 - k;
  return k;
}

double PredictiveBand::lower_at(double y) const {
  const long k = locate(y);
  return k >= 0 ? lower_[k] : at_jump_lower_[-1 - k];
}

double PredictiveBand::upper_at(double y) const {
  const long k = locate(y);
  return k >= 0 ? upper_[k] : at_jump_upper_[-1 - k];
}

double PredictiveBand::evaluate(double y, double tau) const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::domain_error("PredictiveBand::evaluate: tau must lie in [0, 1]");
  }
  const double lo = lower_at(y);
  return lo + tau * (upper_at(y) - lo);
}

double PredictiveBand::slack(double y) const { return upper_at(y) - lower_at(y); }

double PredictiveBand::integrate(const std::function<double(double)>& f,
                                 double tau) const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::domain_error("PredictiveBand::integrate: tau must lie in [0, 1]");
  }
  auto plateau = [&](std::size_t k) {
    return lower_[k] + tau * (upper_[k] - lower_[k]);
  };
  double total = 0.0;
  for (std::size_t k = 0; k < jumps_.size(); ++k) {
    const double mass = plateau(k + 1) - plateau(k);
    if (mass == 0.0) continue;
    const double value = f(jumps_[k]);
    if (!std::isfinite(value)) {
      throw std::range_error("PredictiveBand::integrate: integrand is not finite");
    }
    total += value * mass;
  }
  return total;
}

double evaluate(const PredictiveBand& band, double y, double tau) {
  return band.evaluate(y, tau);
}

double slack(const PredictiveBand& band, double y) { return band.slack(y); }

double integrate(const PredictiveBand& band,
                 const std::function<double(double)>& f, double tau) {
  return band.integrate(f, tau);
}

nlohmann::json band_to_json(const PredictiveBand& band) {
  nlohmann::json doc;
  doc["jumps"] = band.jumps();
  doc["lower"] = band.lower();
  doc["upper"] = band.upper();
  doc["at_jump_lower"] = band.at_jump_lower();
  doc["at_jump_upper"] = band.at_jump_upper();
  return doc;
}

PredictiveBand band_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("band JSON: expected an object");
  return PredictiveBand(read_list(doc, "jumps"), read_list(doc, "lower"),
                        read_list(doc, "upper"), read_list(doc, "at_jump_lower"),
                        read_list(doc, "at_jump_upper"));
}

}  // namespace cpskit
