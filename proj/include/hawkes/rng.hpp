#pragma once

// Deterministic random draws. std::mt19937_64 produces an identical bit
// stream everywhere, but the std distributions do not, so the mapping from
// bits to doubles is pinned here. Identified as "mt19937_64/canonical53" in
// run metadata.

#include <cmath>
#include <cstdint>
#include <random>

namespace hawkes {

inline constexpr const char* kRngId = "mt19937_64/canonical53";

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Exponential with the given rate; finite for all draws since uniform() < 1.
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  // Standard normal via Box-Muller, one cached value.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace hawkes
