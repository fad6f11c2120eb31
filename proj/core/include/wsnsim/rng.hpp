#pragma once

#include <cstdint>
#include <random>

namespace wsnsim {

/// Seeded generator with platform-independent draws. std::uniform_*
/// distributions are implementation-defined, so the mapping from engine bits
/// to doubles is done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace wsnsim
