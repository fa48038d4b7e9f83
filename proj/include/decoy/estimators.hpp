#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decoy/channel_model.hpp"
#include "decoy/photon_stats.hpp"

namespace decoy {

/// Ground-truth split of a set's total clicks. Only the simulator can fill
/// this in; a real experiment observes n_t alone.
struct TruthDecomposition {
  std::uint64_t n0 = 0;  // dark-stratum clicks (zero-photon pulses)
  std::uint64_t n1 = 0;  // single-photon clicks
  std::uint64_t nm = 0;  // multi-photon clicks
};

struct ObservedCounts {
  std::string set_label;
  std::uint64_t n_t = 0;
  std::optional<TruthDecomposition> truth;

  void validate(const PulseSet& set) const;  // n_t <= count, truth sums to n_t
};

enum class BoundMode { exact, paper_approx };

/// Lower bound on the single-photon yield s1 (and, when derived from raw
/// counts, on the single-photon count n1).
struct YieldBound {
  double s1_lower = 0.0;  // in [0, 1]
  double n1_lower = 0.0;  // NaN for the rate-only (no-dark) estimator
  BoundMode mode = BoundMode::exact;
  bool clipped = false;         // raw bound was negative, reported as 0
  bool dark_corrected = false;  // a dark-count term was subtracted
};

/// Weak-decoy bound assuming zero dark counts, from the observed click rate
/// q_v of the weak set.
///
/// exact mode:        s1 >= (q_v - multi_photon_fraction(mu_v)) / (mu_v e^{-mu_v})
/// paper_approx mode: with q_v = 1 - e^{-eta mu_v} this reduces, after the
///                    small-mu approximations 1-e^{-eta mu} ~ eta mu and
///                    multi ~ mu^2/2 and denominator ~ mu, to eta - mu_v/2.
///                    The implied eta is recovered as -log1p(-q_v)/mu_v.
///
/// Throws std::domain_error when mu_v e^{-mu_v} underflows (mu_v < 1e-15).
YieldBound weak_decoy_bound_nodark(double q_v, Intensity mu_v, BoundMode mode);

/// Dark-corrected weak-decoy bound from raw counts:
///   n1 >= n_t - N s0_hat e^{-mu_v} - N multi_photon_fraction(mu_v)
/// clipped at zero, then s1 = n1 / (N mu_v e^{-mu_v}).
/// s0_hat is always an explicit input: the split between the true dark rate
/// (known only to the simulator) and the estimated one is what makes the
/// fluctuation argument observable.
YieldBound weak_decoy_bound_dark(const ObservedCounts& obs_v, const PulseSet& set_v,
                                 double s0_hat);

/// Is the scheme's weak intensity small enough to certify
/// s1 >= target_fraction * eta? Requires mu_v <= 2 (1 - target_fraction) eta;
/// the classic "mu_v <= eta" rule is target_fraction = 1/2.
struct SchemeValidity {
  bool valid = false;
  double margin = 0.0;  // 2 (1 - target_fraction) eta - mu_v
};

SchemeValidity scheme_validity(double eta, Intensity mu_v, double target_fraction = 0.5);

/// Dark rate estimated from the vacuum set: n_t / M. Requires mu = 0.
double estimate_dark_rate(const ObservedCounts& obs_0, const PulseSet& set_0);

/// One (intensity, click rate) pair fed to the truncated yield solver.
struct IntensityObservation {
  Intensity mu;
  double q = 0.0;  // in [0, 1]
};

/// Per-Fock yields recovered by constrained inversion, with the diagnostics
/// that exhibit how ill-conditioned the inversion becomes as the truncation
/// grows.
struct YieldVector {
  std::vector<double> y;          // Y_0 .. Y_{n_max}, each in [0, 1]
  double condition_number = 0.0;  // sigma_max / sigma_min of the design matrix
  double residual = 0.0;          // ||A y - q||_2 at the solution
};

/// Solves q_i = sum_{n=0}^{n_max} Y_n pmf(n, mu_i) for Y in the box
/// [0,1]^{n_max+1} by box-constrained least squares (active-set iteration,
/// gradient tolerance 1e-12, ties at a bound resolved toward the interior).
/// The condition number is that of the raw, unscaled coefficient matrix.
///
/// Throws std::invalid_argument with fewer than n_max+1 distinct
/// intensities; throws std::runtime_error if residual_tol is given and the
/// final residual exceeds it.
YieldVector truncated_yield_solver(std::span<const IntensityObservation> observations,
                                   unsigned n_max,
                                   std::optional<double> residual_tol = std::nullopt);

}  // namespace decoy
