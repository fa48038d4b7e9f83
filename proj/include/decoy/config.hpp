#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "decoy/fluctuation.hpp"
#include "decoy/montecarlo.hpp"

namespace decoy {

/// Config file problem: message carries "path:line: ..." naming the
/// offending key wherever one is involved.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SetConfig {
  std::string label;
  double mu = 0.0;
  std::uint64_t count = 0;
};

struct RunConfig {
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;  // optional key, default 1
  double rep_rate = 0.0;
};

struct SolverConfig {
  std::optional<unsigned> n_max;  // optional key, default #intensities - 1
  std::vector<double> intensities;
};

/// Parsed scenario file. Sections other than [channel] are optional at parse
/// time; each command demands the ones it needs.
struct ScenarioConfig {
  double eta = 0.0;
  double s0 = 0.0;
  std::vector<SetConfig> sets;
  std::optional<ConfidenceSpec> confidence;
  std::optional<RunConfig> run;
  std::optional<SolverConfig> solver;
};

/// Strict load: unknown sections or keys, duplicate keys, malformed values
/// and violated invariants all raise ConfigError with the line number.
ScenarioConfig load_config(const std::string& path);

/// Same parser over in-memory text (the self-describing output round trip).
ScenarioConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical resolved form: every key echoed at full precision, so a file
/// carrying this text reproduces the run byte for byte.
std::string canonical_config_text(const ScenarioConfig& config);

ChannelParams make_channel_params(const ScenarioConfig& config);

/// Classifies the [set] entries: the single mu = 0 entry is the vacuum set,
/// the first mu > 0 entry the weak set, an optional second mu > 0 entry the
/// signal set.
DecoyScheme make_scheme(const ScenarioConfig& config);

/// Scheme + channel + [run]; throws ConfigError if [run] is missing.
Scenario make_scenario(const ScenarioConfig& config);

}  // namespace decoy
