#include "normlab/rng.hpp"

#include <cmath>

namespace normlab {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_name(std::string_view name) {
  // FNV-1a, then one scrambling round so short names decorrelate.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  std::uint64_t s = h;
  return splitmix64(s);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), state_(seed) {
  // Warm up so that small consecutive seeds give unrelated streams.
  splitmix64(state_);
  splitmix64(state_);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  // Box-Muller; u1 is bounded away from zero so log stays finite.
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = kTwoPi * u2;
  cached_normal_ = radius * std::sin(angle);
  has_cached_normal_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::uniform_index(std::uint64_t n) {
  if (n == 0) return 0;
  // Rejection to avoid modulo bias; loop terminates quickly for any n.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t draw = 0;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return draw % n;
}

Rng Rng::split(std::string_view stream_name) const {
  std::uint64_t mix = seed_ ^ hash_name(stream_name);
  splitmix64(mix);
  return Rng(mix);
}

Rng Rng::split(std::uint64_t index) const {
  std::uint64_t mix = seed_ ^ (0x9e3779b97f4a7c15ULL + index * 0xd1342543de82ef95ULL);
  splitmix64(mix);
  return Rng(mix);
}

}  // namespace normlab
