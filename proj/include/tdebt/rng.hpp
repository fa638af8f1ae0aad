#pragma once

#include <cstdint>
#include <vector>

namespace tdebt {

/// splitmix64 generator. Chosen over std::mt19937 because the standard
/// distributions are implementation-defined; this keeps every seeded result
/// identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53 bits of precision.
  double next_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in [0, bound). bound must be > 0.
  std::size_t next_index(std::size_t bound) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = next_index(i);
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed; used for per-estimator and per-fold
/// sub-seeds so results do not depend on execution order.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  Rng rng(seed ^ (0xA0761D6478BD642Full + stream * 0xE7037ED1A0B428DBull));
  return rng.next_u64();
}

}  // namespace tdebt
