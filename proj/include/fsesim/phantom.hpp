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

#ifndef FSESIM_PHANTOM_HPP
#define FSESIM_PHANTOM_HPP

#include <array>
#include <cstdint>
#include <numbers>

#include "fsesim/dictionary.hpp"
#include "fsesim/rng.hpp"
#include "fsesim/signal.hpp"

namespace fsesim {

/// Nominal tissue classes for the procedural head phantom. The values
/// are plausible 3T numbers chosen to sit exactly on the default
/// dictionary grids (T1 on 100+20k ms, T2 on 10+2k ms), so dictionary
/// round trips on phantom pixels are exact.
struct TissueClass {
  const char *name;
  double pd;
  double t2_ms;
  double t1_ms;
};

inline constexpr std::array<TissueClass, 7> kTissueTable = {{
    {"background", 0.00, 0.0, 0.0},
    {"scalp_fat", 0.90, 70.0, 380.0},
    {"white_matter", 0.70, 80.0, 840.0},
    {"gray_matter", 0.85, 100.0, 1300.0},
    {"csf", 1.00, 1000.0, 4000.0},
    {"muscle", 0.75, 50.0, 900.0},
    {"lesion", 0.95, 250.0, 1500.0},
}};

namespace detail {

struct Ellipse {
  double cy, cx;   // center, in pixels
  double ry, rx;   // semi-axes, in pixels
  double theta;    // radians, counterclockwise
  int tissue;      // index into kTissueTable

  bool contains(double y, double x) const {
    const double dy = y - cy, dx = x - cx;
    const double c = std::cos(theta), s = std::sin(theta);
    const double u = (dx * c + dy * s) / rx;
    const double v = (-dx * s + dy * c) / ry;
    return u * u + v * v <= 1.0;
  }
};

inline void paint(ParameterMaps &maps, const Ellipse &e) {
  const TissueClass &t = kTissueTable[e.tissue];
  const double r = std::max(e.ry, e.rx);
  const int y_lo = std::max(0, int(std::floor(e.cy - r)));
  const int y_hi = std::min(maps.ny() - 1, int(std::ceil(e.cy + r)));
  const int x_lo = std::max(0, int(std::floor(e.cx - r)));
  const int x_hi = std::min(maps.nx() - 1, int(std::ceil(e.cx + r)));
  for (int y = y_lo; y <= y_hi; ++y)
    for (int x = x_lo; x <= x_hi; ++x)
      if (e.contains(y, x)) {
        maps.pd(y, x) = t.pd;
        maps.t2(y, x) = t.t2_ms;
        (*maps.t1)(y, x) = t.t1_ms;
      }
}

} // namespace detail

/// Procedural head-like phantom: scalp ellipse, cortical ribbon, white
/// matter core, paired CSF ventricles and a few randomized blobs, all
/// drawn from the fixed tissue table. Layout is jittered per seed;
/// everything outside the scalp is background (pd = 0).
inline ParameterMaps generate_phantom(int ny, int nx, std::uint64_t seed) {
  if (ny < 32 || nx < 32)
    throw std::invalid_argument("generate_phantom: matrix must be >= 32x32");

  ParameterMaps maps{RealImage(ny, nx), RealImage(ny, nx), RealImage(ny, nx)};

  const CounterRng rng(derive_seed(seed, 0x7068616e746f6dULL)); // "phantom"
  std::uint64_t ctr = 0;
  auto jitter = [&](double spread) { // uniform in [-spread, spread]
    return spread * (2.0 * rng.uniform(ctr++) - 1.0);
  };

  const double cy0 = (ny - 1) / 2.0, cx0 = (nx - 1) / 2.0;
  const double hy = ny / 2.0, hx = nx / 2.0;

  using detail::Ellipse;
  const int kScalp = 1, kWhite = 2, kGray = 3, kCsf = 4;

  const double head_cy = cy0 + hy * jitter(0.02);
  const double head_cx = cx0 + hx * jitter(0.02);
  const double head_ry = hy * (0.94 + jitter(0.03));
  const double head_rx = hx * (0.82 + jitter(0.03));
  const double tilt = jitter(6.0) * std::numbers::pi / 180.0;

  detail::paint(maps, Ellipse{head_cy, head_cx, head_ry, head_rx, tilt,
                              kScalp});
  detail::paint(maps, Ellipse{head_cy, head_cx, head_ry * 0.88,
                              head_rx * 0.86, tilt, kGray});
  detail::paint(maps, Ellipse{head_cy, head_cx, head_ry * 0.76,
                              head_rx * 0.72, tilt, kWhite});

  // paired ventricles near the center
  const double vy = head_ry * 0.26, vx = head_rx * 0.10;
  const double voff = head_rx * (0.16 + jitter(0.03));
  detail::paint(maps, Ellipse{head_cy - head_ry * 0.05, head_cx - voff, vy,
                              vx, tilt + 0.18, kCsf});
  detail::paint(maps, Ellipse{head_cy - head_ry * 0.05, head_cx + voff, vy,
                              vx, tilt - 0.18, kCsf});

  // randomized internal structures; enough asymmetric detail that the
  // phantom is not close to rotation-invariant
  const int n_blobs = 8 + int(rng.word(ctr++) % 7); // 8..14
  constexpr std::array<int, 4> blob_classes = {3, 4, 5, 6};
  for (int b = 0; b < n_blobs; ++b) {
    const double ang = rng.uniform(ctr++) * 2.0 * std::numbers::pi;
    const double rad = 0.72 * std::sqrt(rng.uniform(ctr++));
    const double bcy = head_cy + rad * head_ry * 0.76 * std::sin(ang);
    const double bcx = head_cx + rad * head_rx * 0.72 * std::cos(ang);
    const double bry = (0.05 + 0.13 * rng.uniform(ctr++)) * head_ry;
    const double brx = (0.05 + 0.13 * rng.uniform(ctr++)) * head_rx;
    const double bth = rng.uniform(ctr++) * std::numbers::pi;
    const int cls = blob_classes[rng.word(ctr++) % blob_classes.size()];
    detail::paint(maps, Ellipse{bcy, bcx, bry, brx, bth, cls});
  }

  // fine tissue heterogeneity: small table-valued speckles scaled to the
  // matrix, giving the phantom brain-like high frequency content; short-T2
  // classes only, so the echo-train decay contrast stays pronounced, and
  // elongated roughly head-foot like cortical folds and vessels
  const int n_speckle = int(0.005 * double(ny) * nx);
  const double smin = 0.006 * std::min(ny, nx), smax = 0.018 * std::min(ny, nx);
  constexpr std::array<int, 3> speckle_classes = {2, 3, 5};
  for (int b = 0; b < n_speckle; ++b) {
    const double ang = rng.uniform(ctr++) * 2.0 * std::numbers::pi;
    const double rad = 0.68 * std::sqrt(rng.uniform(ctr++));
    const double bcy = head_cy + rad * head_ry * 0.76 * std::sin(ang);
    const double bcx = head_cx + rad * head_rx * 0.72 * std::cos(ang);
    const double bry = smin + (smax - smin) * rng.uniform(ctr++);
    const double brx = 0.45 * (smin + (smax - smin) * rng.uniform(ctr++));
    const double bth = 0.7 * (rng.uniform(ctr++) - 0.5);
    const int cls = speckle_classes[rng.word(ctr++) % speckle_classes.size()];
    detail::paint(maps, Ellipse{bcy, bcx, bry, brx, bth, cls});
  }

  return maps;
}

/// Recovers parameter maps from an MDME measurement stack by dictionary
/// matched filtering; the complement of simulate_mdme_volume.
inline ParameterMaps phantom_from_mdme(const MdmeVolume &vol,
                                       const MdmeDictionary &dict) {
  return match_maps(vol, dict);
}

} // namespace fsesim

#endif // FSESIM_PHANTOM_HPP
