#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "decoy/channel_model.hpp"
#include "decoy/montecarlo.hpp"
#include "oracles.hpp"

using decoy::ChannelParams;
using decoy::Intensity;
using decoy::PulseSet;

TEST_CASE("parameter validation") {
  CHECK_NOTHROW((ChannelParams{1e-4, 1e-6}).validate());
  CHECK_NOTHROW((ChannelParams{1.0, 0.0}).validate());
  CHECK_THROWS_AS((ChannelParams{0.0, 1e-6}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((ChannelParams{1.5, 1e-6}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((ChannelParams{0.5, 1.0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((PulseSet{"x", Intensity(0.1), 0}).validate(), std::invalid_argument);
  CHECK_THROWS_AS((PulseSet{"", Intensity(0.1), 5}).validate(), std::invalid_argument);
}

TEST_CASE("scheme validation") {
  decoy::DecoyScheme scheme{PulseSet{"vacuum", Intensity(0.0), 100},
                            PulseSet{"weak", Intensity(1e-4), 100}, std::nullopt};
  CHECK_NOTHROW(scheme.validate());

  decoy::DecoyScheme bad_vacuum = scheme;
  bad_vacuum.vacuum_set.mu = Intensity(1e-9);
  CHECK_THROWS_AS(bad_vacuum.validate(), std::invalid_argument);

  decoy::DecoyScheme clash = scheme;
  clash.weak_set.label = "vacuum";
  CHECK_THROWS_AS(clash.validate(), std::invalid_argument);
}

TEST_CASE("click_probability anchors") {
  const ChannelParams paper{1e-4, 1e-6};
  // "expected value of n1+nm is N(1-e^{-eta mu_v}) <= 1e-8 N"
  const double q_paper = decoy::click_probability(Intensity(1e-4), paper, false);
  CHECK(q_paper == doctest::Approx(1e-8).epsilon(1e-6));
  CHECK(q_paper < 1e-8);

  CHECK(decoy::click_probability(Intensity(0.0), ChannelParams{0.3, 0.0}, true) == 0.0);
  CHECK(decoy::click_probability(Intensity(0.1), ChannelParams{0.5, 0.0}, true) ==
        doctest::Approx(-std::expm1(-0.05)).epsilon(1e-15));
  CHECK(decoy::click_probability(Intensity(0.1), ChannelParams{0.5, 0.0}, false) ==
        doctest::Approx(0.048770575499286).epsilon(1e-12));
}

TEST_CASE("click_probability agrees with Monte Carlo at N = 1e7") {
  const ChannelParams params{0.5, 0.0};
  const PulseSet set{"weak", Intensity(0.1), 10000000};
  decoy::RngStream rng = decoy::make_trial_stream(987654321, 0, set.label);
  const decoy::ObservedCounts obs = decoy::simulate_set(set, params, rng);
  const double q = decoy::click_probability(set.mu, params, true);
  const double sigma = std::sqrt(q * (1.0 - q) / static_cast<double>(set.count));
  const double observed = static_cast<double>(obs.n_t) / static_cast<double>(set.count);
  CHECK(std::fabs(observed - q) <= 3.0 * sigma);
}

TEST_CASE("click_probability is strictly increasing in mu and eta") {
  const double mus[] = {0.0, 1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0};
  const double etas[] = {1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0};
  for (const double eta : etas) {
    double previous = -1.0;
    for (const double mu : mus) {
      const double q = decoy::click_probability(Intensity(mu), ChannelParams{eta, 1e-6}, true);
      CHECK(q > previous);
      previous = q;
    }
  }
  for (const double mu : {1e-4, 0.1, 1.0}) {
    double previous = -1.0;
    for (const double eta : etas) {
      const double q = decoy::click_probability(Intensity(mu), ChannelParams{eta, 1e-6}, true);
      CHECK(q > previous);
      previous = q;
    }
  }
}

TEST_CASE("expected_dark_counts anchors and bound") {
  // "expected number of dark counts is around 1e-6 N"
  const PulseSet near_vacuum{"weak", Intensity(1e-6), 100000000000000ULL};
  CHECK(decoy::expected_dark_counts(near_vacuum, 1e-6) == doctest::Approx(1e8).epsilon(1e-5));

  const PulseSet any{"weak", Intensity(0.3), 1000};
  CHECK(decoy::expected_dark_counts(any, 0.0) == 0.0);

  const PulseSet million{"weak", Intensity(0.1), 1000000};
  CHECK(decoy::expected_dark_counts(million, 1e-6) ==
        doctest::Approx(0.90483741803596).epsilon(1e-12));

  // <= N s0 with equality only at mu = 0.
  const PulseSet vacuum{"vacuum", Intensity(0.0), 1000000};
  CHECK(decoy::expected_dark_counts(vacuum, 1e-6) == 1.0);
  for (const double mu : {1e-6, 1e-3, 0.1, 1.0}) {
    const PulseSet set{"weak", Intensity(mu), 1000000};
    CHECK(decoy::expected_dark_counts(set, 1e-6) < 1.0);
  }
}

TEST_CASE("fock_yield anchors") {
  CHECK(decoy::fock_yield(0, ChannelParams{0.3, 1e-6}) == 1e-6);
  CHECK(decoy::fock_yield(1, ChannelParams{1e-4, 0.0}) == doctest::Approx(1e-4).epsilon(1e-14));
  CHECK(decoy::fock_yield(3, ChannelParams{0.5, 0.0}) == doctest::Approx(0.875).epsilon(1e-14));
  CHECK(decoy::fock_yield(3, ChannelParams{0.5, 0.0}) ==
        doctest::Approx(oracle::fock_yield_enumerated(3, 0.5, 0.0)).epsilon(1e-14));
  CHECK(decoy::fock_yield(5, ChannelParams{1.0, 0.0}) == 1.0);
}

TEST_CASE("fock_yield matches survival enumeration") {
  const double etas[] = {1e-4, 0.05, 0.3, 0.9};
  const double s0s[] = {0.0, 1e-6, 0.01};
  for (const double eta : etas) {
    for (const double s0 : s0s) {
      for (unsigned n = 0; n <= 6; ++n) {
        CHECK(decoy::fock_yield(n, ChannelParams{eta, s0}) ==
              doctest::Approx(oracle::fock_yield_enumerated(n, eta, s0)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("expected_counts: aggregate and stratified routes agree") {
  const struct {
    ChannelParams params;
    double mu;
    std::uint64_t count;
  } scenarios[] = {
      {{1e-4, 1e-6}, 1e-4, 100000000000000ULL},
      {{1e-2, 1e-6}, 1e-3, 1000000000ULL},
      {{0.5, 0.0}, 0.1, 10000000ULL},
      {{0.9, 0.05}, 1.0, 1000ULL},
  };
  for (const auto& s : scenarios) {
    const PulseSet set{"weak", Intensity(s.mu), s.count};
    const decoy::ExpectedCounts counts = decoy::expected_counts(set, s.params);
    CHECK(std::fabs(counts.aggregate - counts.stratified) <= 1e-9 * counts.aggregate);
  }
}

TEST_CASE("expected_counts anchors") {
  // Vacuum set: only darks. M s0 = 1.
  const PulseSet vacuum{"vacuum", Intensity(0.0), 1000000};
  const decoy::ExpectedCounts v = decoy::expected_counts(vacuum, ChannelParams{0.5, 1e-6});
  CHECK(v.aggregate == doctest::Approx(1.0).epsilon(1e-12));

  // Paper scenario at N = 1e14: ~1e8 darks on top of ~1e6 photon counts.
  const PulseSet weak{"weak", Intensity(1e-4), 100000000000000ULL};
  const ChannelParams paper{1e-4, 1e-6};
  const decoy::ExpectedCounts w = decoy::expected_counts(weak, paper);
  const double darks = decoy::expected_dark_counts(weak, paper.s0);
  const double photons =
      static_cast<double>(weak.count) * decoy::click_probability(weak.mu, paper, false);
  CHECK(darks == doctest::Approx(1e8).epsilon(2e-4));
  CHECK(photons == doctest::Approx(1e6).epsilon(2e-4));
  // The OR model counts darks on non-vacuum pulses too, so it sits slightly
  // above the vacuum-component bookkeeping: gap = N s0 (1-e^{-mu} - q).
  CHECK(w.aggregate >= darks + photons);
  CHECK(w.aggregate == doctest::Approx(darks + photons).epsilon(2e-4));

  const PulseSet empty_channel{"weak", Intensity(0.0), 1000};
  CHECK(decoy::expected_counts(empty_channel, ChannelParams{0.5, 0.0}).aggregate == 0.0);
}
