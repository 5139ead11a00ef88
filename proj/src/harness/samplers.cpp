#include <algorithm>
#include <cmath>
#include <string>

#include "cpskit/harness.hpp"

namespace cpskit {
namespace {

class LinearTwoPoint final : public Sampler {
 public:
  std::string_view name() const override { return "P1"; }

  Observation draw(RandomStream& stream) const override {
    const double x = stream.uniform();
    const double noise = stream.uniform() < 0.5 ? -1.0 : 1.0;
    return Observation{{x}, 2.0 * x + noise};
  }

  std::optional<double> conditional_expectation(
      const TestFunction& f, std::span<const double> x) const override {
    const double centre = 2.0 * x.front();
    return (f.f(centre - 1.0) + f.f(centre + 1.0)) / 2.0;
  }
};

class IndependentUniform final : public Sampler {
 public:
  std::string_view name() const override { return "P2"; }

  Observation draw(RandomStream& stream) const override {
    const double x = stream.uniform();
    return Observation{{x}, stream.uniform()};
  }

  // Integral of f over [0, 1]; known for the registered functions only.
  std::optional<double> conditional_expectation(
      const TestFunction& f, std::span<const double>) const override {
    if (f.name == "clamp") return 0.5;
    if (f.name == "cos") return std::sin(1.0);
    return std::nullopt;
  }
};

class BernoulliResponse final : public Sampler {
 public:
  std::string_view name() const override { return "P3"; }

  Observation draw(RandomStream& stream) const override {
    const double x = stream.uniform();
    return Observation{{x}, stream.uniform() < x ? 1.0 : 0.0};
  }

  std::optional<double> conditional_expectation(
      const TestFunction& f, std::span<const double> x) const override {
    const double p = x.front();
    return (1.0 - p) * f.f(0.0) + p * f.f(1.0);
  }
};

}  // namespace

TestFunction clamp_function() {
  return TestFunction{"clamp", [](double y) { return std::clamp(y, -1.0, 1.0); }, 1.0};
}

TestFunction cos_function() {
  return TestFunction{"cos", [](double y) { return std::cos(y); }, 1.0};
}

TestFunction test_function(std::string_view name) {
  if (name == "clamp") return clamp_function();
  if (name == "cos") return cos_function();
  throw ConfigError("unknown test function '" + std::string(name) + "'");
}

std::unique_ptr<Sampler> make_sampler(std::string_view name) {
  if (name == "P1") return std::make_unique<LinearTwoPoint>();
  if (name == "P2") return std::make_unique<IndependentUniform>();
  if (name == "P3") return std::make_unique<BernoulliResponse>();
  throw ConfigError("unknown sampler '" + std::string(name) + "'");
}

}  // namespace cpskit
