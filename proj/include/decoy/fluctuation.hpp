#pragma once

#include <optional>

#include "decoy/channel_model.hpp"
#include "decoy/photon_stats.hpp"

namespace decoy {

enum class Sidedness { one_sided, two_sided };

/// How tightly the dark counts must concentrate: relative deviation bound
/// rel_dev with failure probability e^{-log_fail}. The bound form is the
/// multiplicative Chernoff inequality P(|X - m| >= d m) <= 2 e^{-d^2 m / c}
/// (valid for d <= 1); c and the sidedness are knobs so Hoeffding-style or
/// one-sided variants can be compared.
struct ConfidenceSpec {
  double rel_dev = 1e-3;
  double log_fail = 25.0;
  Sidedness sidedness = Sidedness::two_sided;
  double chernoff_c = 3.0;

  void validate() const;
};

/// Smallest N such that the dark-count mean m = N s0 e^{-mu_v} satisfies the
/// concentration requirement; returned as a real (integer rounding is noise
/// at the 1e14 scale this answers).
double required_pulses(double s0, Intensity mu_v, const ConfidenceSpec& spec);

/// Absolute dark-count deviation d with P(|X - m| >= d) <= e^{-log_fail}
/// under the same bound form, for m = N s0 e^{-mu_v}.
double fluctuation_margin(double pulses, double s0, Intensity mu_v,
                          const ConfidenceSpec& spec);

/// Expected darks vs expected signal (n1 + nm) of the weak set, and their
/// ratio. ratio >> 1 is the regime in which the dark fluctuation swamps the
/// quantity being estimated.
struct SignalDarkComparison {
  double expected_signal = 0.0;  // N (1 - e^{-eta mu_v})
  double expected_darks = 0.0;   // N s0 e^{-mu_v}
  double ratio = 0.0;            // darks / signal
};

SignalDarkComparison signal_vs_dark_comparison(const ChannelParams& params,
                                               const PulseSet& set_v);

/// The rel_dev needed so that the dark fluctuation stays a factor
/// `separation` below the expected signal: (signal/darks)/separation.
/// separation = 10 is the default reading of "much less".
double faithful_rel_dev(const ChannelParams& params, Intensity mu_v,
                        double separation = 10.0);

struct ProductionTime {
  double seconds = 0.0;
  double days = 0.0;  // seconds / 86400
};

ProductionTime production_time(double pulses, double rep_rate);

struct FeasibilityVerdict {
  double threshold_days = 0.0;
  bool feasible = false;
};

struct FeasibilityReport {
  double required_pulses = 0.0;
  double expected_darks = 0.0;     // at required_pulses
  double expected_signal = 0.0;    // n1 + nm expectation at required_pulses
  double dark_margin = 0.0;        // rel_dev * expected_darks
  double production_seconds = 0.0;
  double production_days = 0.0;
  std::optional<FeasibilityVerdict> feasible_within;
};

FeasibilityReport build_feasibility_report(const ChannelParams& params, Intensity mu_v,
                                           const ConfidenceSpec& spec, double rep_rate,
                                           std::optional<double> threshold_days = std::nullopt);

}  // namespace decoy
