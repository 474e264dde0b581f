#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace phytoken {

// Counter-based SplitMix64 streams.
//
// Every random quantity in a generated plant is drawn from its own stream,
// keyed by the plant seed and the path of the organ that owns it:
//   key(child) = derive(key(parent), tag)
//   derive(k, t) = splitmix64(k ^ splitmix64(t + golden))
// A stream seeded with key k yields splitmix64(k + i * golden), i = 1, 2, ...
// Streams are therefore independent of generation order, worker count and
// platform.
inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

constexpr std::uint64_t derive_key(std::uint64_t parent, std::uint64_t tag) {
  return splitmix64(parent ^ splitmix64(tag + kGoldenGamma));
}

// FNV-1a, used to turn parameter names into stream tags.
constexpr std::uint64_t name_tag(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class KeyedStream {
 public:
  explicit constexpr KeyedStream(std::uint64_t key) : state_(key) {}

  constexpr std::uint64_t next() {
    state_ += kGoldenGamma;
    return splitmix64(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Standard normal by Box-Muller from two consecutive uniforms.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace phytoken
