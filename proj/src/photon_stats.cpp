#include "decoy/photon_stats.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace decoy {
namespace {

// log(n!) for n <= kTruncationCap + a margin for tail sums. Each entry comes
// from lgammal directly (no running sum, so errors do not accumulate).
constexpr unsigned kLogFactTableSize = 512;

const std::array<double, kLogFactTableSize>& log_factorial_table() {
  static const std::array<double, kLogFactTableSize> table = [] {
    std::array<double, kLogFactTableSize> t{};
    for (unsigned n = 0; n < kLogFactTableSize; ++n) {
      t[n] = static_cast<double>(std::lgamma(static_cast<long double>(n) + 1.0L));
    }
    return t;
  }();
  return table;
}

double log_factorial(unsigned n) {
  if (n < kLogFactTableSize) return log_factorial_table()[n];
  return static_cast<double>(std::lgamma(static_cast<long double>(n) + 1.0L));
}

// Series tail mass sum_{k > n_max} pmf(k, mu), summed upward until terms
// stop mattering. Used only by truncation_cutoff, where mu <= 100.
double poisson_tail(unsigned n_max, double mu) {
  double sum = 0.0;
  double term = std::exp(-mu + (n_max + 1) * std::log(mu) - log_factorial(n_max + 1));
  for (unsigned k = n_max + 1;; ++k) {
    sum += term;
    term *= mu / static_cast<double>(k + 1);
    if (term < sum * 1e-18 && static_cast<double>(k) > mu) break;
    if (k > n_max + 4000) break;  // unreachable for mu <= 100
  }
  return sum;
}

}  // namespace

Intensity::Intensity(double mu) : mu_(mu) {
  if (!(mu >= 0.0) || mu > kMaxMu) {
    throw std::invalid_argument("Intensity: mu must be in [0, " +
                                std::to_string(kMaxMu) + "], got " + std::to_string(mu));
  }
}

double poisson_pmf(unsigned n, Intensity mu) {
  const double m = mu.value();
  if (m == 0.0) return n == 0 ? 1.0 : 0.0;
  if (n == 0) return std::exp(-m);
  return std::exp(-m + n * std::log(m) - log_factorial(n));
}

double vacuum_fraction(Intensity mu) { return std::exp(-mu.value()); }

double multi_photon_fraction(Intensity mu) {
  const double m = mu.value();
  if (m == 0.0) return 0.0;
  if (m < 1e-4) {
    // e^{-mu} * sum_{n>=2} mu^n/n!, leading term mu^2/2.
    double term = m * m / 2.0;
    double sum = term;
    for (unsigned n = 3; n < 40; ++n) {
      term *= m / static_cast<double>(n);
      sum += term;
      if (term < sum * 1e-18) break;
    }
    return std::exp(-m) * sum;
  }
  const double em = std::exp(-m);
  return 1.0 - em - m * em;
}

unsigned truncation_cutoff(Intensity mu, double tail_tol) {
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) {
    throw std::invalid_argument("truncation_cutoff: tail_tol must be in (0,1)");
  }
  const double m = mu.value();
  if (m == 0.0) return 0;
  for (unsigned n = 0; n <= kTruncationCap; ++n) {
    if (poisson_tail(n, m) < tail_tol) return n;
  }
  throw std::domain_error("truncation_cutoff: cap " + std::to_string(kTruncationCap) +
                          " reached before tail tolerance for mu = " + std::to_string(m));
}

}  // namespace decoy
