// Copyright 2026 The Tail Ledger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded randomness. Every Monte Carlo replicate owns a generator derived from
// (seed, replicate index), so results do not depend on thread scheduling.
//
// The distributions below are written out instead of using <random>'s
// distribution classes, whose algorithms are implementation-defined. That
// keeps emitted reports byte-identical across standard libraries.

#ifndef TAIL_LEDGER_RANDOM_H_
#define TAIL_LEDGER_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace tail_ledger {

using Seed = std::uint64_t;

// SplitMix64 finalizer; a bijective 64-bit mixer.
inline std::uint64_t Mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable hash of (seed, index) used for per-replicate streams.
inline Seed DeriveSeed(Seed seed, std::uint64_t index) {
  return Mix64(Mix64(seed) ^ Mix64(index + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(Seed seed) : engine_(Mix64(seed)) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double UniformOpenLeft() { return 1.0 - Uniform(); }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t Below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= limit) return r % bound;
    }
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Standard normal by the Box-Muller transform; caches the second variate.
  double Normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u = UniformOpenLeft();
    const double v = Uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * M_PI * v);
    has_spare_ = true;
    return r * std::cos(2.0 * M_PI * v);
  }

  // Index drawn from a pmf given by its cumulative sums (last entry ~1).
  std::size_t FromCumulative(std::span<const double> cumulative);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Inclusive prefix sums, renormalized so the last entry is exactly 1.
std::vector<double> CumulativeFromPmf(std::span<const double> pmf);

}  // namespace tail_ledger

#endif  // TAIL_LEDGER_RANDOM_H_
