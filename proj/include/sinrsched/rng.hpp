#pragma once

#include <cstdint>
#include <initializer_list>

namespace sinrsched {

/// Stateless counter-based random draws: every value is a pure function of
/// the seed and a key path (e.g. link index, field tag, counter). Adding a
/// new key path never shifts the draws of existing ones.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::initializer_list<std::uint64_t> key) const;
  /// Uniform in [0, 1).
  double uniform(std::initializer_list<std::uint64_t> key) const;
  /// Uniform in [lo, hi].
  double uniform(double lo, double hi,
                 std::initializer_list<std::uint64_t> key) const;
  /// Uniform integer in [lo, hi].
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi,
                        std::initializer_list<std::uint64_t> key) const;
  /// Standard normal (Box-Muller on two derived uniforms).
  double normal(std::initializer_list<std::uint64_t> key) const;

  /// Child generator for an independent stream (per trial, per worker).
  CounterRng derive(std::uint64_t stream) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace sinrsched
