#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace stance::rng {

/// 64-bit FNV-1a hash. Used for stage-name seed derivation and for the stub
/// encoder, so its output is part of the on-disk determinism contract.
std::uint64_t fnv1a(std::string_view text, std::uint64_t basis = 0xcbf29ce484222325ULL);

std::uint64_t mix(std::uint64_t x);

/// Sub-seed for a named pipeline stage.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view stage);

/// SplitMix64 generator. Everything random in the library goes through this
/// so results do not depend on the standard library's distribution code.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  /// Uniform integer in [0, n). n must be positive.
  std::size_t index(std::size_t n);
  /// Uniform integer in [lo, hi].
  long long range(long long lo, long long hi);
  /// Uniform real in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  bool bernoulli(double p);

  template <class T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace stance::rng
