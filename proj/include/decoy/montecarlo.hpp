#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "decoy/channel_model.hpp"
#include "decoy/estimators.hpp"
#include "decoy/fluctuation.hpp"
#include "decoy/rng.hpp"

namespace decoy {

/// Everything one reproducible experiment needs.
struct Scenario {
  ChannelParams params;
  DecoyScheme scheme;
  double rep_rate = 8e7;
  std::uint64_t seed = 0;
  std::uint64_t trials = 1;

  void validate() const;
};

/// Exact-in-distribution sampling of one set's counts by Fock
/// stratification: the photon-number histogram is multinomial (sequential
/// conditional binomials, tail mass folded into the top stratum), each
/// stratum then clicks binomially with its fock_yield. Cost is O(n_max) per
/// set, independent of N. Truth fields record the stratum split.
ObservedCounts simulate_set(const PulseSet& set, const ChannelParams& params, RngStream& rng);

/// One decoy session: vacuum set -> s0_hat, weak set -> dark-corrected
/// bound, compared against the simulator's truth.
struct TrialOutcome {
  ObservedCounts vacuum;
  ObservedCounts weak;
  double s0_hat = 0.0;
  YieldBound bound;
  bool violated = false;  // bound.n1_lower > true n1
};

TrialOutcome run_trial(const Scenario& scenario, std::uint64_t trial_index);

struct CoverageReport {
  std::vector<TrialOutcome> trials;
  double violation_rate = 0.0;
  double clip_rate = 0.0;
  // (n1_lower - n1_truth)/n1_truth for the trials with n1_truth > 0.
  std::vector<double> relative_error;
};

/// Runs `scenario.trials` independent sessions, optionally across threads.
/// Identical scenario (seed included) gives identical reports at any thread
/// count: every trial owns its RNG streams and output slot.
CoverageReport run_coverage(const Scenario& scenario, unsigned threads = 1);

enum class SweepAxis { eta, mu_v, s0, pulse_count, rel_dev, log_fail };

/// Axis names accepted on the wire: eta, mu_v, s0, N, rel_dev, k.
SweepAxis parse_sweep_axis(const std::string& name);
std::string sweep_axis_name(SweepAxis axis);

struct SweepRow {
  double value = 0.0;
  double expected_darks = 0.0;
  double expected_signal = 0.0;
  double required_pulses = 0.0;
  double production_days = 0.0;
  double violation_rate = 0.0;
  double clip_rate = 0.0;
};

/// One coverage + feasibility row per axis value. The confidence spec's
/// rel_dev is re-derived per point from the signal/dark separation rule
/// (faithful_rel_dev), except when rel_dev itself is the axis. Sweeping N
/// scales both set counts.
std::vector<SweepRow> sweep(const Scenario& scenario, const ConfidenceSpec& spec,
                            SweepAxis axis, std::span<const double> values,
                            unsigned threads = 1);

}  // namespace decoy
