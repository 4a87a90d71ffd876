#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace blab {

// Deterministic, splittable random stream (splitmix64 core). The standard
// library engines and distributions are avoided on purpose: golden outputs
// must be byte-identical across compilers and platforms.
//
// Named splits give each consumer (template choice, referring expressions,
// greetings, emoji) an independent substream, so adding a draw in one module
// does not shift any other module's sequence.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  RandomStream split(std::string_view name) const {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (char c : name) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return RandomStream(mix(state_ ^ h));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform in [0, bound); bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    // Rejection sampling keeps the distribution exactly uniform.
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t v = next_u64();
      if (v >= threshold) return v % bound;
    }
  }

  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Index drawn proportionally to weights (all nonnegative, sum > 0).
  size_t pick_weighted(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    double x = next_unit() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      x -= weights[i];
      if (x < 0) return i;
    }
    return weights.size() - 1;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace blab
