#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cpskit/cli.hpp"
#include "cpskit/harness.hpp"

namespace cpskit {
namespace {

constexpr std::uint64_t kDefaultSeed = 1;

struct RunConfig {
  std::string system = "dh";
  std::string input;
  std::string x;
  std::optional<std::uint64_t> seed;
  int n = 20;
  int trials = 10000;
  int curve_trials = 200;
  double epsilon = 0.1;
  std::string tau = "random";
  std::string format;
  std::string sampler = "P1";
  std::string function = "clamp";
  std::string ns = "100,1000,10000";
  bool online = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const RunConfig& config) {
  if (config.seed) return *config.seed;
  if (const char* env = std::getenv("CPSKIT_SEED")) {
    const std::string text(env);
    char* end = nullptr;
    const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
    if (text.empty() || end != text.c_str() + text.size()) {
      throw UsageError("CPSKIT_SEED must be a non-negative integer");
    }
    return value;
  }
  return kDefaultSeed;
}

std::vector<double> parse_doubles(const std::string& text, const char* what) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string field;
  while (std::getline(stream, field, ',')) {
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size() || !std::isfinite(v)) {
      throw UsageError(std::string(what) + ": '" + field + "' is not a number");
    }
    values.push_back(v);
  }
  if (values.empty()) throw UsageError(std::string(what) + " is empty");
  return values;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  for (double v : parse_doubles(text, "--ns")) {
    if (v < 1 || v != std::floor(v) || v > 1e8) {
      throw UsageError("--ns entries must be positive integers");
    }
    sizes.push_back(static_cast<int>(v));
  }
  return sizes;
}

void print_band_csv(std::ostream& out, const PredictiveBand& band) {
  out << "y,lower,upper\n";
  for (std::size_t k = 0; k < band.jumps().size(); ++k) {
    out << nlohmann::json(band.jumps()[k]).dump() << ','
        << nlohmann::json(band.at_jump_lower()[k]).dump() << ','
        << nlohmann::json(band.at_jump_upper()[k]).dump() << '\n';
  }
}

int cmd_band(const RunConfig& config, std::ostream& out) {
  const SystemId id = parse_system(config.system);
  const std::vector<double> x = parse_doubles(config.x, "--x");

  std::ifstream file(config.input);
  if (!file) throw DataError("cannot open input file '" + config.input + "'");
  const std::vector<Observation> training = read_observations_csv(file);
  try {
    check_dataset(training);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  if (x.size() != training.front().x.size()) {
    throw DataError("--x has dimension " + std::to_string(x.size()) +
                    " but the data has dimension " +
                    std::to_string(training.front().x.size()));
  }
  if (x.size() != 1 && id != SystemId::kDempsterHill && id != SystemId::kNearestNeighbour) {
    throw DataError(std::string(system_name(id)) + " needs scalar predictors");
  }

  RandomStream stream(resolve_seed(config));
  const auto extended = extend(training, stream);
  const double theta = stream.uniform();
  const PredictiveBand band = build_band(id, extended, x, theta);

  if (config.format == "csv") {
    print_band_csv(out, band);
  } else {
    out << band_to_json(band).dump() << '\n';
  }
  return kExitSuccess;
}

int cmd_validate(const RunConfig& config, std::ostream& out) {
  const SystemId id = parse_system(config.system);
  if (!is_randomized_predictive(id)) {
    throw ConfigError(std::string(system_name(id)) + " is not a randomized predictive system");
  }
  if (config.online && !is_conformal(id)) {
    throw ConfigError(std::string(system_name(id)) +
                      ": online validity is only claimed for conformal systems");
  }
  if (config.trials < 100) throw UsageError("--trials must be at least 100");
  if (config.n < 1) throw UsageError("--n must be at least 1");
  if (!(config.epsilon >= 0.0 && config.epsilon <= 1.0)) {
    throw UsageError("--epsilon must lie in [0, 1]");
  }
  const auto sampler = make_sampler(config.sampler);
  const TauPolicy tau = TauPolicy::parse(config.tau);
  const std::uint64_t seed = resolve_seed(config);

  nlohmann::json checks = nlohmann::json::array();
  bool pass = true;

  const auto pits = pit_sample(id, *sampler, config.n, config.trials, seed, tau);
  const double ks = ks_uniform(pits);
  const double threshold = ks_threshold(pits.size());
  auto ks_summary = summary_json(ks, threshold, ks < threshold);
  ks_summary["check"] = "pit_ks_uniform";
  checks.push_back(ks_summary);
  pass = pass && ks < threshold;

  if (config.online) {
    const double coverage =
        online_coverage(id, *sampler, config.trials, config.epsilon, seed);
    const double target = 1.0 - config.epsilon;
    const double tolerance =
        6.0 * std::sqrt(config.epsilon * (1.0 - config.epsilon) / config.trials);
    const double deviation = std::abs(coverage - target);
    auto online_summary = summary_json(deviation, tolerance, deviation <= tolerance);
    online_summary["check"] = "online_coverage";
    online_summary["coverage"] = coverage;
    checks.push_back(online_summary);
    pass = pass && deviation <= tolerance;
  }

  if (config.format == "csv") {
    out << "check,statistic,threshold,pass\n";
    for (const auto& c : checks) {
      out << c["check"].get<std::string>() << ',' << c["statistic"].dump() << ','
          << c["threshold"].dump() << ',' << (c["pass"].get<bool>() ? "true" : "false")
          << '\n';
    }
  } else {
    nlohmann::json doc{{"system", system_name(id)}, {"sampler", config.sampler},
                       {"n", config.n},           {"trials", config.trials},
                       {"seed", seed},            {"checks", checks},
                       {"pass", pass}};
    out << doc.dump() << '\n';
  }
  return pass ? kExitSuccess : kExitValidationFailure;
}

int cmd_consistency(const RunConfig& config, std::ostream& out) {
  const SystemId id = parse_system(config.system);
  const auto sampler = make_sampler(config.sampler);
  const TestFunction f = test_function(config.function);
  const std::vector<int> ns = parse_sizes(config.ns);
  if (config.curve_trials < 1) throw UsageError("--trials must be positive");
  const auto curve =
      consistency_curve(id, *sampler, f, ns, config.curve_trials, resolve_seed(config));
  if (config.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& p : curve) rows.push_back({{"n", p.n}, {"median_discrepancy", p.median}});
    out << rows.dump() << '\n';
  } else {
    write_consistency_csv(out, curve);
  }
  return kExitSuccess;
}

int cmd_calib_demo(std::ostream& out) {
  const auto exchangeable = marginal_calibration_exchangeable();
  const auto iid = marginal_calibration_iid();
  out << "exchangeable: " << exchangeable.lhs << " vs " << exchangeable.rhs << '\n';
  out << "iid: " << iid.lhs << " vs " << iid.rhs << '\n';
  return kExitSuccess;
}

}  // namespace

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized predictive systems: bands, validity checks and experiments",
               "cpskit"};
  app.require_subcommand(1);
  RunConfig config;

  auto* band = app.add_subcommand("band", "Print the predictive band for one test predictor");
  band->add_option("--system", config.system, "dh, nn, hist-mondrian, hist-conformal, pfs, venn")
      ->required();
  band->add_option("--input", config.input, "Training CSV with header x1,...,xd,y")->required();
  band->add_option("--x", config.x, "Test predictor, comma-separated")->required();
  band->add_option("--seed", config.seed, "Master seed (falls back to CPSKIT_SEED)");
  band->add_option("--format", config.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  auto* validate = app.add_subcommand("validate", "Check probabilistic calibration by simulation");
  validate->add_option("--system", config.system)->required();
  validate->add_option("--n", config.n, "Training size");
  validate->add_option("--trials", config.trials, "Monte-Carlo trials (and online steps)");
  validate->add_option("--seed", config.seed);
  validate->add_option("--sampler", config.sampler, "P1, P2 or P3");
  validate->add_option("--tau", config.tau, "random or fixed:v");
  validate->add_option("--epsilon", config.epsilon, "Online interval level");
  validate->add_flag("--online", config.online, "Also run the online coverage check");
  validate->add_option("--format", config.format)->check(CLI::IsMember({"json", "csv"}));

  auto* consistency = app.add_subcommand("consistency", "Median |integral f dQ_n - E(f|x)| per n");
  consistency->add_option("--system", config.system)->required();
  consistency->add_option("--sampler", config.sampler);
  consistency->add_option("--function", config.function, "clamp or cos");
  consistency->add_option("--ns", config.ns, "Comma-separated training sizes");
  consistency->add_option("--trials", config.curve_trials, "Trials per training size");
  consistency->add_option("--seed", config.seed);
  consistency->add_option("--format", config.format)->check(CLI::IsMember({"json", "csv"}));

  auto* calib = app.add_subcommand("calib-demo", "Exact marginal-calibration counterexamples");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }
  try {
    if (band->parsed()) return cmd_band(config, out);
    if (validate->parsed()) return cmd_validate(config, out);
    if (consistency->parsed()) return cmd_consistency(config, out);
    if (calib->parsed()) return cmd_calib_demo(out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace cpskit
