#include "decoy/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace decoy {

std::uint64_t fnv1a_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

RngStream make_trial_stream(std::uint64_t seed, std::uint64_t trial, std::string_view set_label) {
  const std::uint64_t key =
      RngStream::mix(RngStream::mix(RngStream::mix(seed) + trial) + fnv1a_hash(set_label));
  const std::uint64_t gamma = RngStream::mix(key + 0x9e3779b97f4a7c15ULL);
  return RngStream(key, gamma);
}

void Scenario::validate() const {
  params.validate();
  scheme.validate();
  if (trials < 1) throw std::invalid_argument("Scenario: trials must be >= 1");
  if (!(rep_rate > 0.0)) throw std::invalid_argument("Scenario: rep_rate must be > 0");
}

namespace {

constexpr std::uint64_t kMaxSimulatedPulses = 0x7fffffffffffffffULL;  // 2^63 - 1

std::uint64_t draw_binomial(RngStream& rng, std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  std::binomial_distribution<long long> dist(static_cast<long long>(n), p);
  return static_cast<std::uint64_t>(dist(rng));
}

}  // namespace

ObservedCounts simulate_set(const PulseSet& set, const ChannelParams& params, RngStream& rng) {
  set.validate();
  params.validate();
  if (set.count > kMaxSimulatedPulses) {
    throw std::domain_error("simulate_set: count exceeds 2^63 - 1");
  }

  const unsigned cutoff = truncation_cutoff(set.mu, 1e-15);

  ObservedCounts out;
  out.set_label = set.label;
  TruthDecomposition truth;

  std::uint64_t remaining = set.count;
  double remaining_prob = 1.0;
  for (unsigned n = 0; n <= cutoff; ++n) {
    std::uint64_t stratum;
    if (n == cutoff) {
      stratum = remaining;  // tail mass folded into the top stratum
    } else {
      const double pmf = poisson_pmf(n, set.mu);
      const double conditional = std::clamp(pmf / remaining_prob, 0.0, 1.0);
      stratum = draw_binomial(rng, remaining, conditional);
      remaining -= stratum;
      remaining_prob = std::max(remaining_prob - pmf, 0.0);
    }
    const std::uint64_t clicks = draw_binomial(rng, stratum, fock_yield(n, params));
    if (n == 0) {
      truth.n0 = clicks;
    } else if (n == 1) {
      truth.n1 = clicks;
    } else {
      truth.nm += clicks;
    }
  }
  out.n_t = truth.n0 + truth.n1 + truth.nm;
  out.truth = truth;
  return out;
}

TrialOutcome run_trial(const Scenario& scenario, std::uint64_t trial_index) {
  TrialOutcome out;
  RngStream vac_rng =
      make_trial_stream(scenario.seed, trial_index, scenario.scheme.vacuum_set.label);
  out.vacuum = simulate_set(scenario.scheme.vacuum_set, scenario.params, vac_rng);
  out.s0_hat = estimate_dark_rate(out.vacuum, scenario.scheme.vacuum_set);

  RngStream weak_rng =
      make_trial_stream(scenario.seed, trial_index, scenario.scheme.weak_set.label);
  out.weak = simulate_set(scenario.scheme.weak_set, scenario.params, weak_rng);
  out.bound = weak_decoy_bound_dark(out.weak, scenario.scheme.weak_set, out.s0_hat);
  out.violated = out.bound.n1_lower > static_cast<double>(out.weak.truth->n1);
  return out;
}

CoverageReport run_coverage(const Scenario& scenario, unsigned threads) {
  scenario.validate();
  const std::uint64_t trials = scenario.trials;

  CoverageReport report;
  report.trials.resize(trials);

  const unsigned worker_count =
      std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(trials)));
  if (worker_count == 1) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      report.trials[t] = run_trial(scenario, t);
    }
  } else {
    std::vector<std::thread> workers;
    workers.reserve(worker_count);
    for (unsigned w = 0; w < worker_count; ++w) {
      workers.emplace_back([&scenario, &report, trials, worker_count, w] {
        for (std::uint64_t t = w; t < trials; t += worker_count) {
          report.trials[t] = run_trial(scenario, t);
        }
      });
    }
    for (auto& worker : workers) worker.join();
  }

  std::uint64_t violations = 0;
  std::uint64_t clips = 0;
  for (const auto& trial : report.trials) {
    violations += trial.violated ? 1 : 0;
    clips += trial.bound.clipped ? 1 : 0;
    const double n1_truth = static_cast<double>(trial.weak.truth->n1);
    if (n1_truth > 0.0) {
      report.relative_error.push_back((trial.bound.n1_lower - n1_truth) / n1_truth);
    }
  }
  report.violation_rate = static_cast<double>(violations) / static_cast<double>(trials);
  report.clip_rate = static_cast<double>(clips) / static_cast<double>(trials);
  return report;
}

SweepAxis parse_sweep_axis(const std::string& name) {
  if (name == "eta") return SweepAxis::eta;
  if (name == "mu_v") return SweepAxis::mu_v;
  if (name == "s0") return SweepAxis::s0;
  if (name == "N") return SweepAxis::pulse_count;
  if (name == "rel_dev") return SweepAxis::rel_dev;
  if (name == "k") return SweepAxis::log_fail;
  throw std::invalid_argument("unknown sweep axis '" + name +
                              "' (expected eta, mu_v, s0, N, rel_dev or k)");
}

std::string sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::eta: return "eta";
    case SweepAxis::mu_v: return "mu_v";
    case SweepAxis::s0: return "s0";
    case SweepAxis::pulse_count: return "N";
    case SweepAxis::rel_dev: return "rel_dev";
    case SweepAxis::log_fail: return "k";
  }
  return "?";
}

namespace {

Scenario scenario_at(const Scenario& base, SweepAxis axis, double value) {
  Scenario s = base;
  switch (axis) {
    case SweepAxis::eta:
      s.params.eta = value;
      break;
    case SweepAxis::mu_v:
      s.scheme.weak_set.mu = Intensity(value);
      break;
    case SweepAxis::s0:
      s.params.s0 = value;
      break;
    case SweepAxis::pulse_count: {
      if (!(value >= 1.0) || value > static_cast<double>(kMaxSimulatedPulses)) {
        throw std::invalid_argument("sweep: N value out of range");
      }
      const auto n = static_cast<std::uint64_t>(value);
      s.scheme.weak_set.count = n;
      s.scheme.vacuum_set.count = n;
      break;
    }
    case SweepAxis::rel_dev:
    case SweepAxis::log_fail:
      break;  // confidence-only axes leave the scenario untouched
  }
  return s;
}

}  // namespace

std::vector<SweepRow> sweep(const Scenario& scenario, const ConfidenceSpec& spec,
                            SweepAxis axis, std::span<const double> values, unsigned threads) {
  spec.validate();
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (const double value : values) {
    const Scenario point = scenario_at(scenario, axis, value);
    point.validate();

    ConfidenceSpec point_spec = spec;
    if (axis == SweepAxis::rel_dev) {
      point_spec.rel_dev = value;
    } else {
      if (axis == SweepAxis::log_fail) point_spec.log_fail = value;
      // Regimes where the derived requirement is looser than the bound's
      // validity range (rel_dev >= 1) collapse to the N floor at rel_dev -> 1.
      point_spec.rel_dev =
          std::min(faithful_rel_dev(point.params, point.scheme.weak_set.mu), 1.0 - 1e-9);
    }
    point_spec.validate();

    SweepRow row;
    row.value = value;
    const SignalDarkComparison cmp =
        signal_vs_dark_comparison(point.params, point.scheme.weak_set);
    row.expected_darks = cmp.expected_darks;
    row.expected_signal = cmp.expected_signal;
    row.required_pulses = required_pulses(point.params.s0, point.scheme.weak_set.mu, point_spec);
    row.production_days = production_time(row.required_pulses, point.rep_rate).days;

    const CoverageReport coverage = run_coverage(point, threads);
    row.violation_rate = coverage.violation_rate;
    row.clip_rate = coverage.clip_rate;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace decoy
