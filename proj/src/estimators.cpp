#include "decoy/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/SVD>

namespace decoy {

void ObservedCounts::validate(const PulseSet& set) const {
  if (set_label != set.label) {
    throw std::invalid_argument("ObservedCounts: label '" + set_label +
                                "' does not match set '" + set.label + "'");
  }
  if (n_t > set.count) {
    throw std::invalid_argument("ObservedCounts: n_t exceeds pulse count of '" + set.label + "'");
  }
  if (truth) {
    if (truth->n0 + truth->n1 + truth->nm != n_t) {
      throw std::invalid_argument("ObservedCounts: truth decomposition does not sum to n_t");
    }
  }
}

YieldBound weak_decoy_bound_nodark(double q_v, Intensity mu_v, BoundMode mode) {
  if (!(q_v >= 0.0) || q_v > 1.0) {
    throw std::invalid_argument("weak_decoy_bound_nodark: q_v must be in [0, 1]");
  }
  const double mu = mu_v.value();
  if (mu < 1e-15) {
    throw std::domain_error("weak_decoy_bound_nodark: mu_v e^{-mu_v} underflows for mu_v < 1e-15");
  }

  YieldBound out;
  out.mode = mode;
  out.dark_corrected = false;
  out.n1_lower = std::numeric_limits<double>::quiet_NaN();

  double raw = 0.0;
  if (mode == BoundMode::paper_approx) {
    const double eta_implied = -std::log1p(-q_v) / mu;
    raw = eta_implied - mu / 2.0;
  } else {
    raw = (q_v - multi_photon_fraction(mu_v)) / (mu * std::exp(-mu));
  }
  out.clipped = raw < 0.0;
  out.s1_lower = std::clamp(raw, 0.0, 1.0);
  return out;
}

YieldBound weak_decoy_bound_dark(const ObservedCounts& obs_v, const PulseSet& set_v,
                                 double s0_hat) {
  if (!(s0_hat >= 0.0) || s0_hat >= 1.0) {
    throw std::invalid_argument("weak_decoy_bound_dark: s0_hat must be in [0, 1)");
  }
  obs_v.validate(set_v);
  const double mu = set_v.mu.value();
  if (mu < 1e-15) {
    throw std::domain_error("weak_decoy_bound_dark: mu_v e^{-mu_v} underflows for mu_v < 1e-15");
  }
  const double n = static_cast<double>(set_v.count);

  YieldBound out;
  out.mode = BoundMode::exact;
  out.dark_corrected = true;

  const double dark_term = n * s0_hat * std::exp(-mu);
  const double multi_term = n * multi_photon_fraction(set_v.mu);
  const double raw = static_cast<double>(obs_v.n_t) - dark_term - multi_term;
  out.clipped = raw < 0.0;
  out.n1_lower = std::max(raw, 0.0);
  out.s1_lower = std::clamp(out.n1_lower / (n * mu * std::exp(-mu)), 0.0, 1.0);
  return out;
}

SchemeValidity scheme_validity(double eta, Intensity mu_v, double target_fraction) {
  if (!(eta > 0.0) || eta > 1.0) {
    throw std::invalid_argument("scheme_validity: eta must be in (0, 1]");
  }
  if (!(target_fraction > 0.0) || !(target_fraction < 1.0)) {
    throw std::invalid_argument("scheme_validity: target_fraction must be in (0, 1)");
  }
  SchemeValidity out;
  out.margin = 2.0 * (1.0 - target_fraction) * eta - mu_v.value();
  out.valid = out.margin >= 0.0;
  return out;
}

double estimate_dark_rate(const ObservedCounts& obs_0, const PulseSet& set_0) {
  if (!set_0.mu.is_vacuum()) {
    throw std::invalid_argument("estimate_dark_rate: set '" + set_0.label + "' is not vacuum");
  }
  obs_0.validate(set_0);
  return static_cast<double>(obs_0.n_t) / static_cast<double>(set_0.count);
}

namespace {

// Box-constrained least squares min ||A y - q|| over [0,1]^k, active-set
// style: repeatedly solve the free subproblem, walk back to the first bound
// hit, and release the most violated KKT multiplier. Ties at a bound keep
// the variable free (interior wins).
Eigen::VectorXd solve_box_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& q) {
  const auto k = a.cols();
  constexpr double kGradTol = 1e-12;
  constexpr double kBoundTol = 1e-13;

  enum class State { lower, free, upper };
  std::vector<State> state(static_cast<std::size_t>(k), State::free);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(k);

  const double grad_scale = std::max(1.0, (a.transpose() * q).cwiseAbs().maxCoeff());
  const int max_outer = 50 * static_cast<int>(k) + 50;

  for (int outer = 0; outer < max_outer; ++outer) {
    // Inner loop: least squares on the free set, stepping back to bounds.
    for (int inner = 0; inner < max_outer; ++inner) {
      std::vector<Eigen::Index> free_idx;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (state[static_cast<std::size_t>(j)] == State::free) free_idx.push_back(j);
      }
      if (free_idx.empty()) break;

      Eigen::MatrixXd a_free(a.rows(), static_cast<Eigen::Index>(free_idx.size()));
      Eigen::VectorXd rhs = q;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (state[static_cast<std::size_t>(j)] == State::upper) rhs -= a.col(j);
      }
      for (std::size_t c = 0; c < free_idx.size(); ++c) {
        a_free.col(static_cast<Eigen::Index>(c)) = a.col(free_idx[c]);
      }
      Eigen::VectorXd z = a_free.colPivHouseholderQr().solve(rhs);

      // Feasible? Ties exactly on a bound stay free.
      double alpha = 1.0;
      for (std::size_t c = 0; c < free_idx.size(); ++c) {
        const double yi = y[free_idx[c]];
        const double zi = z[static_cast<Eigen::Index>(c)];
        if (zi < -kBoundTol) alpha = std::min(alpha, (0.0 - yi) / (zi - yi));
        if (zi > 1.0 + kBoundTol) alpha = std::min(alpha, (1.0 - yi) / (zi - yi));
      }
      if (alpha >= 1.0) {
        for (std::size_t c = 0; c < free_idx.size(); ++c) {
          y[free_idx[c]] = std::clamp(z[static_cast<Eigen::Index>(c)], 0.0, 1.0);
        }
        break;
      }
      for (std::size_t c = 0; c < free_idx.size(); ++c) {
        const Eigen::Index j = free_idx[c];
        const double zi = z[static_cast<Eigen::Index>(c)];
        double yi = y[j] + alpha * (zi - y[j]);
        if (yi <= kBoundTol && zi < 0.0) {
          y[j] = 0.0;
          state[static_cast<std::size_t>(j)] = State::lower;
        } else if (yi >= 1.0 - kBoundTol && zi > 1.0) {
          y[j] = 1.0;
          state[static_cast<std::size_t>(j)] = State::upper;
        } else {
          y[j] = std::clamp(yi, 0.0, 1.0);
        }
      }
    }

    // KKT check on the negative gradient w = A^T (q - A y).
    Eigen::VectorXd w = a.transpose() * (q - a * y);
    double worst = 0.0;
    Eigen::Index worst_j = -1;
    for (Eigen::Index j = 0; j < k; ++j) {
      const State st = state[static_cast<std::size_t>(j)];
      double violation = 0.0;
      if (st == State::free) continue;  // solved to lstsq optimality above
      if (st == State::lower && w[j] > 0.0) violation = w[j];
      if (st == State::upper && w[j] < 0.0) violation = -w[j];
      if (violation > worst) {
        worst = violation;
        worst_j = j;
      }
    }
    if (worst <= kGradTol * grad_scale || worst_j < 0) return y;
    state[static_cast<std::size_t>(worst_j)] = State::free;
  }
  return y;  // iteration cap; best feasible point found
}

}  // namespace

YieldVector truncated_yield_solver(std::span<const IntensityObservation> observations,
                                   unsigned n_max, std::optional<double> residual_tol) {
  const unsigned k = n_max + 1;
  std::set<double> distinct;
  for (const auto& obs : observations) {
    if (!(obs.q >= 0.0) || obs.q > 1.0) {
      throw std::invalid_argument("truncated_yield_solver: q must be in [0, 1]");
    }
    distinct.insert(obs.mu.value());
  }
  if (distinct.size() < k) {
    throw std::invalid_argument(
        "truncated_yield_solver: under-determined system, need at least " + std::to_string(k) +
        " distinct intensities, got " + std::to_string(distinct.size()));
  }

  const auto m = static_cast<Eigen::Index>(observations.size());
  Eigen::MatrixXd a(m, k);
  Eigen::VectorXd q(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& obs = observations[static_cast<std::size_t>(i)];
    for (unsigned n = 0; n < k; ++n) {
      a(i, static_cast<Eigen::Index>(n)) = poisson_pmf(n, obs.mu);
    }
    q[i] = obs.q;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& sv = svd.singularValues();
  const double sigma_max = sv[0];
  const double sigma_min = sv[sv.size() - 1];

  YieldVector out;
  out.condition_number =
      sigma_min > 0.0 ? sigma_max / sigma_min : std::numeric_limits<double>::infinity();

  const Eigen::VectorXd y = solve_box_least_squares(a, q);
  out.y.assign(y.data(), y.data() + y.size());
  out.residual = (a * y - q).norm();

  if (residual_tol && out.residual > *residual_tol) {
    throw std::runtime_error("truncated_yield_solver: residual " + std::to_string(out.residual) +
                             " exceeds tolerance");
  }
  return out;
}

}  // namespace decoy
