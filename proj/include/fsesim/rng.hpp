/*
 * fsesim : Fast Spin Echo motion simulation toolkit
 *
 * Copyright 2026 The fsesim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FSESIM_RNG_HPP
#define FSESIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace fsesim {

/// SplitMix64 output function (Steele, Lea & Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and a stream id,
/// so consumers of the same base seed do not share draws.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t stream) noexcept {
  return splitmix64(seed ^ splitmix64(stream));
}

/// Counter-based generator: draw n is a pure function of (seed, n), so
/// streams are reproducible, order-independent and splittable across
/// samples. Uses the SplitMix64 stream construction; the distributions
/// below avoid std::normal_distribution on purpose so sequences are
/// identical on every platform.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t word(std::uint64_t counter) const noexcept {
    return splitmix64(seed_ + counter * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform draw in (0, 1]; never 0, so it is safe under log().
  double uniform(std::uint64_t counter) const noexcept {
    return double((word(counter) >> 11) + 1) * 0x1p-53;
  }

  /// Two independent standard normals per counter (Box-Muller).
  std::pair<double, double> normal_pair(std::uint64_t counter) const noexcept {
    const double u1 = uniform(2 * counter);
    const double u2 = uniform(2 * counter + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

private:
  std::uint64_t seed_;
};

} // namespace fsesim

#endif // FSESIM_RNG_HPP
