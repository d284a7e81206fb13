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

#ifndef FSESIM_NOISE_HPP
#define FSESIM_NOISE_HPP

#include <cstdint>

#include "fsesim/grid.hpp"
#include "fsesim/rng.hpp"

namespace fsesim {

/// Adds i.i.d. complex Gaussian noise with total complex variance
/// sigma^2 (each component N(0, sigma^2/2)). Deterministic in the seed;
/// sigma == 0 returns the input unchanged.
inline KSpace add_noise(const KSpace &ksp, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("add_noise: sigma must be >= 0");
  if (!all_finite(ksp))
    throw std::invalid_argument("add_noise: non-finite input");

  KSpace out = ksp;
  if (sigma == 0.0) return out;

  const CounterRng rng(seed);
  const double scale = sigma / std::sqrt(2.0);
  auto data = out.flat();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto [g_re, g_im] = rng.normal_pair(i);
    data[i] += cplx(scale * g_re, scale * g_im);
  }
  return out;
}

} // namespace fsesim

#endif // FSESIM_NOISE_HPP
