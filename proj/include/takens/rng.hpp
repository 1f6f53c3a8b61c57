#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace takens::rng {

namespace detail {

/// Finalizer with full avalanche; used both to mix keys and to step streams.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Derives an independent stream key from a master seed, a purpose tag, and
/// up to two integer indices (sweep M and trial number, vector index, ...).
/// Distinct tuples give unrelated streams; equal tuples always give the same
/// stream, independent of platform, thread schedule, or call order.
[[nodiscard]] constexpr std::uint64_t derive_key(std::uint64_t seed, std::string_view tag,
                                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t h = detail::fnv1a(tag);
  h = detail::mix64(h ^ seed);
  h = detail::mix64(h ^ a);
  h = detail::mix64(h ^ b);
  return h;
}

/// Deterministic pseudo-random stream (splitmix64 core). Cheap to construct,
/// so one short-lived stream per logical unit of work is the intended use.
class Stream {
public:
  explicit Stream(std::uint64_t key) : state_(key) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; consumes exactly two raw draws per
  /// call so stream positions stay predictable.
  double gaussian() {
    // 1 - u keeps the log argument in (0, 1].
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  double gaussian(double mean, double stddev) { return mean + stddev * gaussian(); }

private:
  std::uint64_t state_;
};

}  // namespace takens::rng
