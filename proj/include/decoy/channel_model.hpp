#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "decoy/photon_stats.hpp"

namespace decoy {

/// Lossy channel seen by the receiver. eta folds source, line and detector
/// losses into one overall transmittance; s0 is the dark-count probability
/// per pulse (detector and line backgrounds folded together).
struct ChannelParams {
  double eta = 0.0;
  double s0 = 0.0;

  void validate() const;  // throws std::invalid_argument on violation
};

/// A labeled pulse ensemble: N pulses of one intensity.
struct PulseSet {
  std::string label;
  Intensity mu;
  std::uint64_t count = 0;  // >= 1

  void validate() const;
};

/// The two decoy ensembles (vacuum + weak coherent), plus the optional
/// signal ensemble they protect.
struct DecoyScheme {
  PulseSet vacuum_set;  // mu == 0 exactly
  PulseSet weak_set;    // mu > 0
  std::optional<PulseSet> signal_set;

  void validate() const;
};

/// Probability that one pulse of intensity mu produces a click.
/// include_dark=false: 1 - e^{-eta mu}. include_dark=true: OR of photon
/// detection and dark event, 1 - (1-s0) e^{-eta mu}.
double click_probability(Intensity mu, const ChannelParams& params, bool include_dark);

/// Expected dark counts of a set under the bookkeeping that attributes dark
/// events to the vacuum component only: N s0 e^{-mu}. The simulator's OR
/// model differs from this by O(s0 (1 - e^{-eta mu})), negligible in every
/// scenario here; the estimators use this convention.
double expected_dark_counts(const PulseSet& set, double s0);

/// Click probability of an n-photon pulse: 1 - (1-s0)(1-eta)^n.
/// fock_yield(0) = s0; fock_yield(1) = 1 - (1-s0)(1-eta).
double fock_yield(unsigned n, const ChannelParams& params);

/// Expected total clicks, computed two algebraically identical ways: the
/// aggregate closed form N (1 - (1-s0) e^{-eta mu}) and the Fock-stratified
/// sum over poisson_pmf * fock_yield. The pair pins the implementation: the
/// two must agree to 1e-9 relative.
struct ExpectedCounts {
  double aggregate = 0.0;
  double stratified = 0.0;
};

ExpectedCounts expected_counts(const PulseSet& set, const ChannelParams& params);

}  // namespace decoy
