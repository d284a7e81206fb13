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

#ifndef FSESIM_SIGNAL_HPP
#define FSESIM_SIGNAL_HPP

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "fsesim/grid.hpp"

namespace fsesim {

/// Per-pixel tissue parameter maps. Background pixels carry pd == 0 and
/// may use t2 == 0 (and t1 == 0) as a sentinel; relaxation times must be
/// strictly positive wherever pd > 0. t1 is only needed for the
/// multi-delay multi-echo forward model.
struct ParameterMaps {
  RealImage pd;
  RealImage t2;
  std::optional<RealImage> t1;

  int ny() const { return pd.ny(); }
  int nx() const { return pd.nx(); }

  void validate() const {
    if (!same_shape(pd, t2) || (t1 && !same_shape(pd, *t1)))
      throw std::invalid_argument("ParameterMaps: shape mismatch");
    if (!all_finite(pd) || !all_finite(t2) || (t1 && !all_finite(*t1)))
      throw std::invalid_argument("ParameterMaps: non-finite values");
    for (int y = 0; y < ny(); ++y)
      for (int x = 0; x < nx(); ++x) {
        if (pd(y, x) < 0.0)
          throw std::invalid_argument("ParameterMaps: negative pd");
        if (pd(y, x) > 0.0) {
          if (t2(y, x) <= 0.0)
            throw std::invalid_argument(
                "ParameterMaps: t2 must be > 0 where pd > 0");
          if (t1 && (*t1)(y, x) <= 0.0)
            throw std::invalid_argument(
                "ParameterMaps: t1 must be > 0 where pd > 0");
        }
      }
  }
};

/// Transverse magnetization at echo time te_ms: pd * exp(-te/t2),
/// real-valued with zero imaginary part. Background (pd == 0) maps to 0.
inline ComplexImage decay_image(const ParameterMaps &maps, double te_ms) {
  if (!(te_ms > 0.0))
    throw std::invalid_argument("decay_image: te_ms must be > 0");
  maps.validate();

  ComplexImage out(maps.ny(), maps.nx());
  for (int y = 0; y < maps.ny(); ++y)
    for (int x = 0; x < maps.nx(); ++x) {
      const double pd = maps.pd(y, x);
      out(y, x) = (pd == 0.0)
                      ? cplx{0.0, 0.0}
                      : cplx{pd * std::exp(-te_ms / maps.t2(y, x)), 0.0};
    }
  return out;
}

/// Echo train: one image per echo plus its echo time.
struct EchoStack {
  std::vector<ComplexImage> echoes;
  std::vector<double> te_ms;

  int etl() const { return int(echoes.size()); }
};

constexpr int kMaxEtl = 64;

/// Simulates the echo train of a spin-echo acquisition: echo e (0-based)
/// is the decay image at te = (e+1)*esp_ms.
inline EchoStack echo_stack(const ParameterMaps &maps, int etl,
                            double esp_ms) {
  if (etl < 1 || etl > kMaxEtl)
    throw std::invalid_argument("echo_stack: etl out of range");
  if (!(esp_ms > 0.0))
    throw std::invalid_argument("echo_stack: esp_ms must be > 0");

  EchoStack stack;
  stack.echoes.reserve(etl);
  stack.te_ms.reserve(etl);
  for (int e = 0; e < etl; ++e) {
    const double te = (e + 1) * esp_ms;
    stack.echoes.push_back(decay_image(maps, te));
    stack.te_ms.push_back(te);
  }
  return stack;
}

/// Saturation-recovery x T2-decay signal for a multi-delay multi-echo
/// measurement: pd * (1 - exp(-td/t1)) * exp(-te/t2), one entry per
/// (td, te) pair, delay-major ordering.
inline std::vector<double> mdme_signal(double t1, double t2, double pd,
                                       std::span<const double> td_ms,
                                       std::span<const double> te_ms) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw std::invalid_argument("mdme_signal: relaxation times must be > 0");
  if (!(pd >= 0.0))
    throw std::invalid_argument("mdme_signal: pd must be >= 0");

  std::vector<double> s;
  s.reserve(td_ms.size() * te_ms.size());
  for (double td : td_ms) {
    const double recovery = 1.0 - std::exp(-td / t1);
    for (double te : te_ms) s.push_back(pd * recovery * std::exp(-te / t2));
  }
  return s;
}

/// Stack of per-pixel measurement vectors (pixel-major layout).
struct MdmeVolume {
  int ny = 0;
  int nx = 0;
  int n_meas = 0;
  std::vector<double> data;

  MdmeVolume() = default;
  MdmeVolume(int ny_, int nx_, int n_meas_)
      : ny(ny_), nx(nx_), n_meas(n_meas_),
        data(std::size_t(ny_) * nx_ * n_meas_, 0.0) {
    if (ny_ <= 0 || nx_ <= 0 || n_meas_ <= 0)
      throw std::invalid_argument("MdmeVolume: dimensions must be positive");
  }

  std::span<double> pixel(int y, int x) {
    return {data.data() + (std::size_t(y) * nx + x) * n_meas,
            std::size_t(n_meas)};
  }
  std::span<const double> pixel(int y, int x) const {
    return {data.data() + (std::size_t(y) * nx + x) * n_meas,
            std::size_t(n_meas)};
  }
};

/// Forward-simulates the MDME measurement stack from parameter maps.
/// Requires a t1 map; background pixels produce all-zero signals.
inline MdmeVolume simulate_mdme_volume(const ParameterMaps &maps,
                                       std::span<const double> td_ms,
                                       std::span<const double> te_ms) {
  maps.validate();
  if (!maps.t1)
    throw std::invalid_argument("simulate_mdme_volume: t1 map required");
  if (td_ms.empty() || te_ms.empty())
    throw std::invalid_argument("simulate_mdme_volume: empty timing lists");

  MdmeVolume vol(maps.ny(), maps.nx(), int(td_ms.size() * te_ms.size()));
  for (int y = 0; y < maps.ny(); ++y)
    for (int x = 0; x < maps.nx(); ++x) {
      if (maps.pd(y, x) == 0.0) continue;
      const auto s = mdme_signal((*maps.t1)(y, x), maps.t2(y, x),
                                 maps.pd(y, x), td_ms, te_ms);
      auto dst = vol.pixel(y, x);
      std::copy(s.begin(), s.end(), dst.begin());
    }
  return vol;
}

} // namespace fsesim

#endif // FSESIM_SIGNAL_HPP
