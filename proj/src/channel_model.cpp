#include "decoy/channel_model.hpp"

#include <cmath>
#include <stdexcept>

namespace decoy {

void ChannelParams::validate() const {
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument("ChannelParams: eta must be in (0, 1]");
  }
  if (!(s0 >= 0.0) || s0 >= 1.0) {
    throw std::invalid_argument("ChannelParams: s0 must be in [0, 1)");
  }
}

void PulseSet::validate() const {
  if (count < 1) throw std::invalid_argument("PulseSet '" + label + "': count must be >= 1");
  if (label.empty()) throw std::invalid_argument("PulseSet: label must be non-empty");
}

void DecoyScheme::validate() const {
  vacuum_set.validate();
  weak_set.validate();
  if (!vacuum_set.mu.is_vacuum()) {
    throw std::invalid_argument("DecoyScheme: vacuum set must have mu = 0 exactly");
  }
  if (!(weak_set.mu.value() > 0.0)) {
    throw std::invalid_argument("DecoyScheme: weak set must have mu > 0");
  }
  if (vacuum_set.label == weak_set.label) {
    throw std::invalid_argument("DecoyScheme: set labels must be unique");
  }
  if (signal_set) {
    signal_set->validate();
    if (signal_set->label == vacuum_set.label || signal_set->label == weak_set.label) {
      throw std::invalid_argument("DecoyScheme: set labels must be unique");
    }
  }
}

double click_probability(Intensity mu, const ChannelParams& params, bool include_dark) {
  params.validate();
  const double x = params.eta * mu.value();
  if (!include_dark) return -std::expm1(-x);
  // 1 - (1-s0) e^{-x} = -expm1(log1p(-s0) - x), stays accurate for tiny s0, x.
  return -std::expm1(std::log1p(-params.s0) - x);
}

double expected_dark_counts(const PulseSet& set, double s0) {
  set.validate();
  if (!(s0 >= 0.0) || s0 >= 1.0) {
    throw std::invalid_argument("expected_dark_counts: s0 must be in [0, 1)");
  }
  return static_cast<double>(set.count) * s0 * vacuum_fraction(set.mu);
}

double fock_yield(unsigned n, const ChannelParams& params) {
  params.validate();
  if (n == 0) return params.s0;
  if (params.eta == 1.0) return 1.0;
  if (params.s0 == 0.0) return -std::expm1(n * std::log1p(-params.eta));
  return -std::expm1(std::log1p(-params.s0) + n * std::log1p(-params.eta));
}

ExpectedCounts expected_counts(const PulseSet& set, const ChannelParams& params) {
  set.validate();
  const double n = static_cast<double>(set.count);
  ExpectedCounts out;
  out.aggregate = n * click_probability(set.mu, params, /*include_dark=*/true);
  const unsigned cutoff = truncation_cutoff(set.mu, 1e-15);
  double acc = 0.0;
  for (unsigned k = 0; k <= cutoff; ++k) {
    acc += poisson_pmf(k, set.mu) * fock_yield(k, params);
  }
  out.stratified = n * acc;
  return out;
}

}  // namespace decoy
