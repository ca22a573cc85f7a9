// Copyright 2026 SVC-Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded, counter-based random number generation. Every stochastic choice in
// the toolkit draws from an explicit 64-bit seed so that identical inputs
// always produce identical outputs, independent of call order or threading.
// std::random distributions are implementation-defined, so uniform and
// gaussian draws are implemented here directly.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace svcforge {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ull;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBull;
  x ^= x >> 31;
  return x;
}

// Order-sensitive combination of two 64-bit values.
inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a + kGoldenGamma + mix64(b));
}

// FNV-1a over raw bytes; used to derive per-file seeds from relative paths.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// splitmix64 stream. Cheap to construct; one instance per (seed, stream).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent substream for a named draw site.
  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(hash_combine(seed, stream));
  }

  std::uint64_t next_u64() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Inclusive integer range. Modulo bias is below 2^-50 for the small ranges
  // used here (segment counts, interval tables).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(next_u64() % span);
  }

  bool bernoulli(double p) { return next_unit() < p; }

  // Box-Muller; one gaussian per call, second value discarded.
  double gaussian() {
    double u1 = next_unit();
    double u2 = next_unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace svcforge
