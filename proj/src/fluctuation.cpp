#include "decoy/fluctuation.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace decoy {
namespace {

constexpr double kSecondsPerDay = 86400.0;

// Exponent budget: k, plus ln 2 for the two-sided union.
double exponent_budget(const ConfidenceSpec& spec) {
  return spec.log_fail + (spec.sidedness == Sidedness::two_sided ? std::numbers::ln2 : 0.0);
}

}  // namespace

void ConfidenceSpec::validate() const {
  if (!(rel_dev > 0.0) || !(rel_dev < 1.0)) {
    throw std::invalid_argument("ConfidenceSpec: rel_dev must be in (0, 1)");
  }
  if (!(log_fail > 0.0)) {
    throw std::invalid_argument("ConfidenceSpec: log_fail must be > 0");
  }
  if (!(chernoff_c > 0.0)) {
    throw std::invalid_argument("ConfidenceSpec: chernoff_c must be > 0");
  }
}

double required_pulses(double s0, Intensity mu_v, const ConfidenceSpec& spec) {
  spec.validate();
  if (!(s0 > 0.0)) {
    throw std::invalid_argument("required_pulses: s0 must be > 0");
  }
  const double mean_darks = spec.chernoff_c * exponent_budget(spec) / (spec.rel_dev * spec.rel_dev);
  return mean_darks / (s0 * vacuum_fraction(mu_v));
}

double fluctuation_margin(double pulses, double s0, Intensity mu_v,
                          const ConfidenceSpec& spec) {
  spec.validate();
  if (!(pulses > 0.0)) {
    throw std::invalid_argument("fluctuation_margin: pulses must be > 0");
  }
  const double m = pulses * s0 * vacuum_fraction(mu_v);
  return std::sqrt(spec.chernoff_c * exponent_budget(spec) * m);
}

SignalDarkComparison signal_vs_dark_comparison(const ChannelParams& params,
                                               const PulseSet& set_v) {
  params.validate();
  set_v.validate();
  const double n = static_cast<double>(set_v.count);
  SignalDarkComparison out;
  out.expected_signal = n * click_probability(set_v.mu, params, /*include_dark=*/false);
  out.expected_darks = expected_dark_counts(set_v, params.s0);
  out.ratio = out.expected_signal > 0.0 ? out.expected_darks / out.expected_signal : 0.0;
  return out;
}

double faithful_rel_dev(const ChannelParams& params, Intensity mu_v, double separation) {
  params.validate();
  if (!(separation > 0.0)) {
    throw std::invalid_argument("faithful_rel_dev: separation must be > 0");
  }
  const double signal_rate = click_probability(mu_v, params, /*include_dark=*/false);
  const double dark_rate = params.s0 * vacuum_fraction(mu_v);
  if (!(dark_rate > 0.0)) {
    throw std::invalid_argument("faithful_rel_dev: dark rate is zero, no constraint to satisfy");
  }
  return signal_rate / dark_rate / separation;
}

ProductionTime production_time(double pulses, double rep_rate) {
  if (!(rep_rate > 0.0)) {
    throw std::invalid_argument("production_time: rep_rate must be > 0");
  }
  if (!(pulses >= 0.0)) {
    throw std::invalid_argument("production_time: pulses must be >= 0");
  }
  ProductionTime out;
  out.seconds = pulses / rep_rate;
  out.days = out.seconds / kSecondsPerDay;
  return out;
}

FeasibilityReport build_feasibility_report(const ChannelParams& params, Intensity mu_v,
                                           const ConfidenceSpec& spec, double rep_rate,
                                           std::optional<double> threshold_days) {
  FeasibilityReport out;
  out.required_pulses = required_pulses(params.s0, mu_v, spec);
  out.expected_darks = out.required_pulses * params.s0 * vacuum_fraction(mu_v);
  out.expected_signal =
      out.required_pulses * click_probability(mu_v, params, /*include_dark=*/false);
  out.dark_margin = spec.rel_dev * out.expected_darks;
  const ProductionTime t = production_time(out.required_pulses, rep_rate);
  out.production_seconds = t.seconds;
  out.production_days = t.days;
  if (threshold_days) {
    out.feasible_within = FeasibilityVerdict{*threshold_days, out.production_days <= *threshold_days};
  }
  return out;
}

}  // namespace decoy
