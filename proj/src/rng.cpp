#include "sinrsched/rng.hpp"

#include <cmath>
#include <numbers>

namespace sinrsched {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::initializer_list<std::uint64_t> key) const {
  std::uint64_t h = splitmix64(seed_);
  for (std::uint64_t k : key) h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
  return h;
}

double CounterRng::uniform(std::initializer_list<std::uint64_t> key) const {
  return static_cast<double>(bits(key) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi,
                           std::initializer_list<std::uint64_t> key) const {
  return lo + (hi - lo) * uniform(key);
}

std::uint64_t CounterRng::integer(std::uint64_t lo, std::uint64_t hi,
                                  std::initializer_list<std::uint64_t> key) const {
  const std::uint64_t span = hi - lo + 1;
  if (span == 0) return bits(key);
  // Multiply-shift keeps the bias below 2^-64 * span, far under anything
  // these generators can observe.
  const auto wide = static_cast<unsigned __int128>(bits(key)) * span;
  return lo + static_cast<std::uint64_t>(wide >> 64);
}

double CounterRng::normal(std::initializer_list<std::uint64_t> key) const {
  const std::uint64_t base = bits(key);
  const CounterRng sub(base);
  double u1 = sub.uniform({1});
  const double u2 = sub.uniform({2});
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

CounterRng CounterRng::derive(std::uint64_t stream) const {
  return CounterRng(bits({0xd1b54a32d192ed03ULL, stream}));
}

}  // namespace sinrsched
