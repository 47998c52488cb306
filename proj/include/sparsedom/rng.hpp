#pragma once

#include <cstdint>
#include <string_view>

namespace sparsedom {

/// Counter-based generator (splitmix64). One master seed determines every
/// draw in the project; per-trial streams are derived as
///   seed = mix(master ^ fnv1a(suite) ^ mix(trial)),
/// so trials are independent of evaluation order and thread count.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ull;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1), 53 random bits.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  uint64_t below(uint64_t n) { return n == 0 ? 0 : next() % n; }
  bool bernoulli(double p) { return uniform() < p; }

  static uint64_t mix(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
  }

  static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (char c : s) {
      h ^= uint8_t(c);
      h *= 0x100000001b3ull;
    }
    return h;
  }

  static Rng for_trial(uint64_t master, std::string_view suite, uint64_t trial) {
    return Rng(mix(master ^ fnv1a(suite) ^ mix(trial + 1)));
  }

 private:
  uint64_t state_;
};

}  // namespace sparsedom
