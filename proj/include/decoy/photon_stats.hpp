#pragma once

#include <cstdint>

namespace decoy {

/// Mean photon number of a weak coherent pulse. Photon number is
/// Poisson-distributed with this mean; mu = 0 encodes the vacuum state.
class Intensity {
 public:
  static constexpr double kMaxMu = 100.0;  // sanity ceiling, all scenarios use mu <= 1

  explicit Intensity(double mu);

  double value() const { return mu_; }
  bool is_vacuum() const { return mu_ == 0.0; }

 private:
  double mu_;
};

/// P(n photons) = e^{-mu} mu^n / n!, evaluated in log space so large n
/// cannot overflow the factorial.
double poisson_pmf(unsigned n, Intensity mu);

/// Fraction of pulses carrying zero photons: e^{-mu}.
double vacuum_fraction(Intensity mu);

/// Fraction of pulses carrying two or more photons: 1 - e^{-mu} - mu e^{-mu}.
/// Below mu = 1e-4 the closed form loses its leading digits to cancellation
/// (the value is ~mu^2/2), so a term-wise series takes over there.
double multi_photon_fraction(Intensity mu);

/// Smallest n_max such that the Poisson tail beyond n_max is below tail_tol.
/// Capped at kTruncationCap; throws std::domain_error if the cap is reached
/// before the tolerance (cannot happen for the scenario range mu <= 1).
unsigned truncation_cutoff(Intensity mu, double tail_tol);

inline constexpr unsigned kTruncationCap = 50;

}  // namespace decoy
