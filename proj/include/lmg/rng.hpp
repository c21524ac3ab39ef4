#pragma once

#include <cmath>
#include <cstdint>

namespace lmg {

namespace detail {

inline constexpr std::uint64_t kSplitMixGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 output at an arbitrary sequence position. The generator's state
// after k steps is seed + k*gamma, so any element can be computed directly
// from (seed, k); that makes the sequence counter-based.
inline constexpr std::uint64_t splitmix64_at(std::uint64_t seed,
                                             std::uint64_t index) {
  std::uint64_t z = seed + kSplitMixGamma * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic per-trajectory random stream. Stream k draws from a
/// splitmix64 sequence whose seed is the k-th output of a master splitmix64
/// sequence, so (master_seed, stream) fully determines every draw no matter
/// which thread runs it or in what order. Gaussians use Box-Muller on (0,1]
/// uniforms; the second member of each pair is cached.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream)
      : key_(detail::splitmix64_at(master_seed, stream)) {}

  /// Uniform in (0, 1]; never 0, so log() is safe.
  double uniform() {
    const std::uint64_t bits = detail::splitmix64_at(key_, counter_++);
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * kPi * uniform();
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace lmg
