#pragma once

#include <cstdint>
#include <random>

namespace lsgame {

/// Seeded stream used for every random draw in the library.
///
/// std::mt19937_64 is fully specified by the standard; the uniform and
/// normal transforms are written out here because the std:: distribution
/// objects are implementation-defined. Uniforms are (k + 1/2) / 2^53, so
/// they never hit 0 or 1. Normals use the Box-Muller cosine branch.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 of (base, stream): independent seeds for numbered sub-streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace lsgame
