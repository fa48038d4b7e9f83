// Acceptance suite: one line per criterion, exit code = number of failures.
// Each check pins the scenario constants and tolerances in code; nothing is
// deferred to runtime configuration.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "decoy/config.hpp"
#include "decoy/estimators.hpp"
#include "decoy/fluctuation.hpp"
#include "decoy/montecarlo.hpp"

namespace {

using decoy::BoundMode;
using decoy::ChannelParams;
using decoy::ConfidenceSpec;
using decoy::Intensity;
using decoy::PulseSet;
using decoy::Scenario;
using decoy::Sidedness;

struct Criterion {
  std::string name;
  std::function<bool(std::string&)> check;
};

bool check_paper_bound_formula(std::string& detail) {
  const double eta = 1e-4;
  const double mu_v = 1e-4;
  const double q_v = -std::expm1(-eta * mu_v);

  const decoy::YieldBound paper =
      decoy::weak_decoy_bound_nodark(q_v, Intensity(mu_v), BoundMode::paper_approx);
  const decoy::YieldBound exact =
      decoy::weak_decoy_bound_nodark(q_v, Intensity(mu_v), BoundMode::exact);

  const double target = eta - mu_v / 2.0;
  const double approx_error = std::fabs(paper.s1_lower - target);
  const double mode_gap = std::fabs(exact.s1_lower - paper.s1_lower);

  std::ostringstream ss;
  ss << "paper_approx=" << paper.s1_lower << " target=" << target
     << " |paper-target|=" << approx_error << " |exact-paper|=" << mode_gap;
  detail = ss.str();
  return target == 5e-5 && approx_error <= 1e-18 && mode_gap <= 1e-8;
}

bool check_validity_frontier(std::string& detail) {
  const double eta = 1e-4;
  int agreements = 0;
  for (int i = 0; i < 100; ++i) {
    const double ratio = 0.5 + 1.5 * static_cast<double>(i) / 99.0;
    const double mu_v = ratio * eta;
    const bool expected = eta - mu_v / 2.0 >= 0.5 * eta;  // certified bound clears eta/2
    const bool got = decoy::scheme_validity(eta, Intensity(mu_v), 0.5).valid;
    if (expected == got) ++agreements;
  }
  const bool boundary_valid = decoy::scheme_validity(eta, Intensity(1e-4), 0.5).valid;
  const bool above_invalid = !decoy::scheme_validity(eta, Intensity(2e-4), 0.5).valid;
  detail = "grid agreement " + std::to_string(agreements) + "/100, boundary mu_v=eta valid=" +
           (boundary_valid ? std::string("true") : std::string("false"));
  return agreements == 100 && boundary_valid && above_invalid;
}

bool check_required_pulses(std::string& detail) {
  const ConfidenceSpec spec{1e-3, 25.0, Sidedness::two_sided, 3.0};
  const double n = decoy::required_pulses(1e-6, Intensity(1e-6), spec);
  std::ostringstream ss;
  ss << "required_N=" << n << " (window 1e13..1e15)";
  detail = ss.str();
  return n >= 1e13 && n <= 1e15;
}

bool check_production_time(std::string& detail) {
  const decoy::ProductionTime t = decoy::production_time(1e14, 8e7);
  std::ostringstream ss;
  ss << "seconds=" << t.seconds << " days=" << t.days;
  detail = ss.str();
  return t.seconds == 1.25e6 && std::fabs(t.days - 14.467592592592593) <= 1e-9 && t.days >= 14.0;
}

bool check_dark_signal_ratio(std::string& detail) {
  const PulseSet weak{"weak", Intensity(1e-4), 100000000000000ULL};
  const auto cmp = decoy::signal_vs_dark_comparison(ChannelParams{1e-4, 1e-6}, weak);
  std::ostringstream ss;
  ss << "darks/signal=" << cmp.ratio << " (window 95..105)";
  detail = ss.str();
  return cmp.ratio >= 95.0 && cmp.ratio <= 105.0;
}

Scenario coverage_scenario(double eta, double mu_v, std::uint64_t count) {
  return Scenario{ChannelParams{eta, 1e-6},
                  decoy::DecoyScheme{PulseSet{"vacuum", Intensity(0.0), count},
                                     PulseSet{"weak", Intensity(mu_v), count}, std::nullopt},
                  8e7, 20240117, 200};
}

bool check_destruction_clip_rate(std::string& detail) {
  const auto report = decoy::run_coverage(coverage_scenario(1e-4, 1e-4, 10000000000ULL), 4);
  std::ostringstream ss;
  ss << "clip_rate=" << report.clip_rate << " over 200 trials (required > 0.5)";
  detail = ss.str();
  return report.clip_rate > 0.5;
}

bool check_benign_violation_rate(std::string& detail) {
  const auto report = decoy::run_coverage(coverage_scenario(1e-2, 1e-3, 1000000000ULL), 4);
  std::ostringstream ss;
  ss << "violation_rate=" << report.violation_rate << " over 200 trials (required <= 0.01)";
  detail = ss.str();
  return report.violation_rate <= 0.01;
}

bool check_simulator_vs_analytic(std::string& detail) {
  std::mt19937_64 rng(20240117);
  std::uniform_real_distribution<double> log_mu(-4.0, 0.0);
  std::uniform_real_distribution<double> log_eta(-4.0, -0.05);
  std::uniform_real_distribution<double> log_s0(-7.0, -3.0);

  int within = 0;
  bool truth_consistent = true;
  double worst_pull = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double mu = std::pow(10.0, log_mu(rng));
    const ChannelParams params{std::pow(10.0, log_eta(rng)), std::pow(10.0, log_s0(rng))};
    const PulseSet set{"weak", Intensity(mu), 10000000ULL};
    decoy::RngStream stream = decoy::make_trial_stream(99, static_cast<std::uint64_t>(i), "weak");
    const decoy::ObservedCounts obs = decoy::simulate_set(set, params, stream);

    const double q = decoy::click_probability(set.mu, params, true);
    const double se = std::sqrt(q * (1.0 - q) / static_cast<double>(set.count));
    const double observed = static_cast<double>(obs.n_t) / static_cast<double>(set.count);
    const double pull = se > 0.0 ? std::fabs(observed - q) / se : 0.0;
    worst_pull = std::max(worst_pull, pull);
    if (pull <= 4.0) ++within;
    if (obs.truth->n0 + obs.truth->n1 + obs.truth->nm != obs.n_t) truth_consistent = false;
  }
  std::ostringstream ss;
  ss << within << "/20 scenarios within 4 se (worst pull " << worst_pull
     << "), truth sums " << (truth_consistent ? "hold" : "BROKEN");
  detail = ss.str();
  return within == 20 && truth_consistent;
}

bool check_solver_oracle(std::string& detail) {
  const ChannelParams params{0.5, 0.0};

  // Forward-generate q from the truncated Fock model at n_max = 2.
  std::vector<decoy::IntensityObservation> obs;
  for (const double mu : {0.0, 0.1, 0.2}) {
    const Intensity intensity(mu);
    double q = 0.0;
    for (unsigned n = 0; n <= 2; ++n) {
      q += decoy::poisson_pmf(n, intensity) * decoy::fock_yield(n, params);
    }
    obs.push_back({intensity, q});
  }
  const decoy::YieldVector solution = decoy::truncated_yield_solver(obs, 2);
  const double recovery_error =
      std::max({std::fabs(solution.y[0] - 0.0), std::fabs(solution.y[1] - 0.5),
                std::fabs(solution.y[2] - 0.75)});

  // Condition number must grow strictly as n_max sweeps 2..10 over a fixed
  // 11-point intensity grid in [0, 1].
  std::vector<double> mus;
  for (int i = 0; i <= 10; ++i) mus.push_back(static_cast<double>(i) / 10.0);
  bool strictly_increasing = true;
  double previous = 0.0;
  double final_condition = 0.0;
  for (unsigned n_max = 2; n_max <= 10; ++n_max) {
    std::vector<decoy::IntensityObservation> grid_obs;
    for (const double mu : mus) {
      const Intensity intensity(mu);
      double q = 0.0;
      for (unsigned n = 0; n <= n_max; ++n) {
        q += decoy::poisson_pmf(n, intensity) * decoy::fock_yield(n, params);
      }
      grid_obs.push_back({intensity, q});
    }
    const decoy::YieldVector v = decoy::truncated_yield_solver(grid_obs, n_max);
    if (v.condition_number <= previous) strictly_increasing = false;
    previous = v.condition_number;
    final_condition = v.condition_number;
  }

  std::ostringstream ss;
  ss << "recovery error " << recovery_error << ", residual " << solution.residual
     << ", cond(n_max=10)=" << final_condition
     << (strictly_increasing ? " strictly increasing" : " NOT increasing");
  detail = ss.str();
  return recovery_error <= 1e-8 && solution.residual <= 1e-10 && strictly_increasing &&
         final_condition > 1e6;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool check_determinism(std::string& detail) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "decoy_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const fs::path cfg = dir / "scenario.cfg";
  {
    std::ofstream out(cfg);
    out << "[channel]\neta = 1e-4\ns0 = 1e-6\n"
        << "[set]\nlabel = vacuum\nmu = 0\ncount = 1e8\n"
        << "[set]\nlabel = weak\nmu = 1e-4\ncount = 1e8\n"
        << "[run]\nseed = 20240117\ntrials = 32\nrep_rate = 8e7\n";
  }

  const auto run_cli = [&](const std::string& args) {
    const std::string command = std::string(DECOY_BENCH_BIN) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(command.c_str());
    return WIFEXITED(status) && WEXITSTATUS(status) == 0;
  };

  const fs::path out_a = dir / "a.csv";
  const fs::path out_b = dir / "b.csv";
  const fs::path out_c = dir / "c.csv";
  const std::string base = "coverage --config " + cfg.string();
  if (!run_cli(base + " --threads 1 --out " + out_a.string()) ||
      !run_cli(base + " --threads 1 --out " + out_b.string()) ||
      !run_cli(base + " --threads 8 --out " + out_c.string())) {
    detail = "CLI invocation failed";
    return false;
  }
  const std::string a = slurp(out_a);
  const bool rerun_identical = a == slurp(out_b);
  const bool threads_identical = a == slurp(out_c);
  detail = std::string("rerun ") + (rerun_identical ? "identical" : "DIFFERS") + ", 1 vs 8 threads " +
           (threads_identical ? "identical" : "DIFFERS");
  fs::remove_all(dir);
  return rerun_identical && threads_identical && !a.empty();
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"C1 paper-bound-formula", check_paper_bound_formula},
      {"C2 validity-frontier", check_validity_frontier},
      {"C3 required-pulses", check_required_pulses},
      {"C4 production-time", check_production_time},
      {"C5 dark-signal-ratio", check_dark_signal_ratio},
      {"C6a destruction-clip-rate", check_destruction_clip_rate},
      {"C6b benign-violation-rate", check_benign_violation_rate},
      {"C7 simulator-vs-analytic", check_simulator_vs_analytic},
      {"C8 solver-oracle", check_solver_oracle},
      {"C9 determinism", check_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::string detail;
    bool passed = false;
    try {
      passed = criterion.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s — %s\n", passed ? "PASS" : "FAIL", criterion.name.c_str(),
                detail.c_str());
    if (!passed) ++failures;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures;
}
