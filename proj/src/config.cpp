#include "decoy/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace decoy {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& message) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + message);
}

double parse_real(const std::string& origin, int line, const std::string& key,
                  const std::string& value) {
  const std::string v = trim(value);
  if (v.empty()) fail(origin, line, key + ": empty value");
  char* end = nullptr;
  const double parsed = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) fail(origin, line, key + ": malformed number '" + v + "'");
  if (!std::isfinite(parsed)) fail(origin, line, key + ": non-finite value");
  return parsed;
}

std::uint64_t parse_count(const std::string& origin, int line, const std::string& key,
                          const std::string& value) {
  const double parsed = parse_real(origin, line, key, value);
  if (!(parsed >= 0.0) || parsed > 9.223372036854775e18 || std::floor(parsed) != parsed) {
    fail(origin, line, key + ": must be a nonnegative integer within 2^63 - 1");
  }
  return static_cast<std::uint64_t>(parsed);
}

std::vector<double> parse_real_list(const std::string& origin, int line, const std::string& key,
                                    const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_real(origin, line, key, item));
  }
  if (out.empty()) fail(origin, line, key + ": empty list");
  return out;
}

struct SectionState {
  std::set<std::string> seen_keys;
};

ScenarioConfig parse_lines(std::istream& in, const std::string& origin) {
  ScenarioConfig config;
  bool have_channel = false;

  std::string section;
  SectionState state;
  SetConfig* current_set = nullptr;
  std::set<std::string> singleton_sections_seen;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;

    if (text.front() == '[') {
      if (text.back() != ']') fail(origin, line, "malformed section header '" + text + "'");
      section = trim(text.substr(1, text.size() - 2));
      state = SectionState{};
      current_set = nullptr;
      if (section == "set") {
        config.sets.emplace_back();
        current_set = &config.sets.back();
      } else if (section == "channel" || section == "confidence" || section == "run" ||
                 section == "solver") {
        if (!singleton_sections_seen.insert(section).second) {
          fail(origin, line, "duplicate section [" + section + "]");
        }
        if (section == "channel") have_channel = true;
        if (section == "confidence") config.confidence.emplace();
        if (section == "run") config.run.emplace();
        if (section == "solver") config.solver.emplace();
      } else {
        fail(origin, line, "unknown section [" + section + "]");
      }
      continue;
    }

    const auto eq = text.find('=');
    if (eq == std::string::npos) fail(origin, line, "expected 'key = value', got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) fail(origin, line, "empty key");
    if (section.empty()) fail(origin, line, "key '" + key + "' before any section");
    if (!state.seen_keys.insert(key).second) {
      fail(origin, line, "duplicate key '" + key + "' in [" + section + "]");
    }

    if (section == "channel") {
      if (key == "eta") {
        config.eta = parse_real(origin, line, key, value);
      } else if (key == "s0") {
        config.s0 = parse_real(origin, line, key, value);
      } else {
        fail(origin, line, "unknown key '" + key + "' in [channel]");
      }
    } else if (section == "set") {
      if (key == "label") {
        if (value.empty()) fail(origin, line, "label: empty value");
        current_set->label = value;
      } else if (key == "mu") {
        current_set->mu = parse_real(origin, line, key, value);
      } else if (key == "count") {
        current_set->count = parse_count(origin, line, key, value);
      } else {
        fail(origin, line, "unknown key '" + key + "' in [set]");
      }
    } else if (section == "confidence") {
      if (key == "rel_dev") {
        config.confidence->rel_dev = parse_real(origin, line, key, value);
      } else if (key == "k") {
        config.confidence->log_fail = parse_real(origin, line, key, value);
      } else if (key == "sidedness") {
        if (value == "one_sided") {
          config.confidence->sidedness = Sidedness::one_sided;
        } else if (value == "two_sided") {
          config.confidence->sidedness = Sidedness::two_sided;
        } else {
          fail(origin, line, "sidedness: expected one_sided or two_sided, got '" + value + "'");
        }
      } else if (key == "chernoff_c") {
        config.confidence->chernoff_c = parse_real(origin, line, key, value);
      } else {
        fail(origin, line, "unknown key '" + key + "' in [confidence]");
      }
    } else if (section == "run") {
      if (key == "seed") {
        config.run->seed = parse_count(origin, line, key, value);
      } else if (key == "trials") {
        config.run->trials = parse_count(origin, line, key, value);
        if (config.run->trials < 1) fail(origin, line, "trials: must be >= 1");
      } else if (key == "rep_rate") {
        config.run->rep_rate = parse_real(origin, line, key, value);
      } else {
        fail(origin, line, "unknown key '" + key + "' in [run]");
      }
    } else if (section == "solver") {
      if (key == "n_max") {
        const std::uint64_t parsed = parse_count(origin, line, key, value);
        if (parsed > kTruncationCap) fail(origin, line, "n_max: exceeds truncation cap");
        config.solver->n_max = static_cast<unsigned>(parsed);
      } else if (key == "intensities") {
        config.solver->intensities = parse_real_list(origin, line, key, value);
      } else {
        fail(origin, line, "unknown key '" + key + "' in [solver]");
      }
    }
  }

  if (!have_channel) fail(origin, line, "missing required section [channel]");
  return config;
}

void validate_loaded(const ScenarioConfig& config, const std::string& origin) {
  const auto check = [&origin](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(origin + ": " + message);
  };
  check(config.eta > 0.0 && config.eta <= 1.0, "channel.eta: must be in (0, 1]");
  check(config.s0 >= 0.0 && config.s0 < 1.0, "channel.s0: must be in [0, 1)");

  std::set<std::string> labels;
  for (const auto& set : config.sets) {
    check(!set.label.empty(), "set.label: required");
    check(set.count >= 1, "set '" + set.label + "': count must be >= 1");
    check(set.mu >= 0.0 && set.mu <= Intensity::kMaxMu,
          "set '" + set.label + "': mu out of [0, 100]");
    check(labels.insert(set.label).second, "set '" + set.label + "': duplicate label");
  }
  if (config.confidence) {
    const auto& c = *config.confidence;
    check(c.rel_dev > 0.0 && c.rel_dev < 1.0, "confidence.rel_dev: must be in (0, 1)");
    check(c.log_fail > 0.0, "confidence.k: must be > 0");
    check(c.chernoff_c > 0.0, "confidence.chernoff_c: must be > 0");
  }
  if (config.run) {
    check(config.run->rep_rate > 0.0, "run.rep_rate: must be > 0");
  }
  if (config.solver) {
    check(!config.solver->intensities.empty(), "solver.intensities: required");
    for (const double mu : config.solver->intensities) {
      check(mu >= 0.0 && mu <= Intensity::kMaxMu, "solver.intensities: mu out of [0, 100]");
    }
    if (config.solver->n_max) {
      check(config.solver->intensities.size() >= *config.solver->n_max + 1,
            "solver.n_max: needs at least n_max + 1 intensities");
    }
  }
}

std::string format_full(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  ScenarioConfig config = parse_lines(in, origin);
  validate_loaded(config, origin);
  return config;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  ScenarioConfig config = parse_lines(in, path);
  validate_loaded(config, path);
  return config;
}

std::string canonical_config_text(const ScenarioConfig& config) {
  std::ostringstream out;
  out << "[channel]\n";
  out << "eta = " << format_full(config.eta) << "\n";
  out << "s0 = " << format_full(config.s0) << "\n";
  for (const auto& set : config.sets) {
    out << "[set]\n";
    out << "label = " << set.label << "\n";
    out << "mu = " << format_full(set.mu) << "\n";
    out << "count = " << set.count << "\n";
  }
  if (config.confidence) {
    out << "[confidence]\n";
    out << "rel_dev = " << format_full(config.confidence->rel_dev) << "\n";
    out << "k = " << format_full(config.confidence->log_fail) << "\n";
    out << "sidedness = "
        << (config.confidence->sidedness == Sidedness::two_sided ? "two_sided" : "one_sided")
        << "\n";
    out << "chernoff_c = " << format_full(config.confidence->chernoff_c) << "\n";
  }
  if (config.run) {
    out << "[run]\n";
    out << "seed = " << config.run->seed << "\n";
    out << "trials = " << config.run->trials << "\n";
    out << "rep_rate = " << format_full(config.run->rep_rate) << "\n";
  }
  if (config.solver) {
    out << "[solver]\n";
    if (config.solver->n_max) out << "n_max = " << *config.solver->n_max << "\n";
    out << "intensities = ";
    for (std::size_t i = 0; i < config.solver->intensities.size(); ++i) {
      if (i) out << ", ";
      out << format_full(config.solver->intensities[i]);
    }
    out << "\n";
  }
  return out.str();
}

ChannelParams make_channel_params(const ScenarioConfig& config) {
  ChannelParams params{config.eta, config.s0};
  params.validate();
  return params;
}

DecoyScheme make_scheme(const ScenarioConfig& config) {
  if (config.sets.empty()) throw ConfigError("sets: at least one required");

  const SetConfig* vacuum = nullptr;
  const SetConfig* weak = nullptr;
  const SetConfig* signal = nullptr;
  for (const auto& set : config.sets) {
    if (set.mu == 0.0) {
      if (vacuum) throw ConfigError("sets: more than one vacuum (mu = 0) set");
      vacuum = &set;
    } else if (!weak) {
      weak = &set;
    } else if (!signal) {
      signal = &set;
    } else {
      throw ConfigError("sets: at most three sets (vacuum, weak, signal) supported");
    }
  }
  if (!vacuum) throw ConfigError("sets: a vacuum (mu = 0) set is required");
  if (!weak) throw ConfigError("sets: a weak (mu > 0) set is required");

  DecoyScheme scheme{PulseSet{vacuum->label, Intensity(vacuum->mu), vacuum->count},
                     PulseSet{weak->label, Intensity(weak->mu), weak->count},
                     std::nullopt};
  if (signal) {
    scheme.signal_set = PulseSet{signal->label, Intensity(signal->mu), signal->count};
  }
  scheme.validate();
  return scheme;
}

Scenario make_scenario(const ScenarioConfig& config) {
  if (!config.run) throw ConfigError("run: section required for simulation commands");
  Scenario scenario{make_channel_params(config), make_scheme(config), config.run->rep_rate,
                    config.run->seed, config.run->trials};
  scenario.validate();
  return scenario;
}

}  // namespace decoy
