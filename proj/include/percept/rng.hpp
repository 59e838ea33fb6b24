#pragma once

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

#include "percept/errors.hpp"

namespace percept {

/// Deterministic random source used everywhere randomness is needed.
///
/// All draws go through the 53-bit path in unit(), so the stream depends only
/// on the mt19937_64 state and never on standard-library distribution
/// internals. The full generator state serializes to text and restores
/// exactly, which is what checkpoint/resume relies on.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double unit() { return (engine_() >> 11) * (1.0 / 9007199254740992.0); }

  /// Uniform double in [lo, hi). Degenerate interval returns lo but still
  /// consumes one draw, keeping streams aligned across configurations.
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  /// Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw invalid_input("Rng::below: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  std::string state() const {
    std::ostringstream os;
    os << engine_;
    return os.str();
  }

  void restore(const std::string& s) {
    std::istringstream is(s);
    is >> engine_;
    if (!is) throw invalid_input("Rng::restore: malformed state string");
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace percept
