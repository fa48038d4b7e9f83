#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

namespace decoy {

/// Counter-based stream generator in the SplittableRandom style: the state
/// is a counter advanced by a per-stream odd gamma, the output is a strong
/// 64-bit mix of the counter. Streams are keyed by (seed, trial, set label),
/// so a trial's draws are identical no matter how trials are scheduled.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t state, std::uint64_t gamma) : state_(state), gamma_(gamma | 1u) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += gamma_;
    return mix(state_);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

 private:
  std::uint64_t state_;
  std::uint64_t gamma_;
};

std::uint64_t fnv1a_hash(std::string_view text);

/// Derives the independent stream for one (trial, set) cell of a run.
RngStream make_trial_stream(std::uint64_t seed, std::uint64_t trial, std::string_view set_label);

}  // namespace decoy
