#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace fairsample {

/// splitmix64 finalizer; good avalanche for seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Stable seed for a named sub-stream: FNV-1a over the tag, mixed with base.
std::uint64_t derive_seed(std::uint64_t base, std::string_view tag);

/// Deterministic generator with platform-stable draws.
///
/// std::mt19937_64 is bit-exact everywhere by the standard, but the standard
/// distributions are implementation-defined, so the draw algorithms here are
/// pinned by hand: identical seeds give identical streams on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1), 53 bits of precision.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via the Marsaglia polar method.
  double normal();

  /// Fisher–Yates with the pinned bounded draw.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// k distinct values from [0, n), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace fairsample
