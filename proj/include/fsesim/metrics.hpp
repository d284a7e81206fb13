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

#ifndef FSESIM_METRICS_HPP
#define FSESIM_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <string>

#include "fsesim/grid.hpp"

namespace fsesim {

struct MetricReport {
  double ssim = 0.0;
  double nrmse = 0.0;
  std::string id;
};

/// ||est - ref||_2 / ||ref||_2 on magnitude images.
inline double nrmse(const RealImage &ref, const RealImage &est) {
  if (!same_shape(ref, est))
    throw std::invalid_argument("nrmse: shape mismatch");
  if (!all_finite(ref) || !all_finite(est))
    throw std::invalid_argument("nrmse: non-finite input");

  double err2 = 0.0, ref2 = 0.0;
  for (int y = 0; y < ref.ny(); ++y)
    for (int x = 0; x < ref.nx(); ++x) {
      const double d = est(y, x) - ref(y, x);
      err2 += d * d;
      ref2 += ref(y, x) * ref(y, x);
    }
  if (!(ref2 > 0.0))
    throw std::invalid_argument("nrmse: reference is identically zero");
  return std::sqrt(err2) / std::sqrt(ref2);
}

constexpr int kSsimWindow = 7;

/// Mean structural similarity with a 7x7 uniform window, stabilizers
/// C1 = (0.01 L)^2 and C2 = (0.03 L)^2, unbiased (n-1) variance
/// normalization, and valid-region windowing (no padding).
inline double ssim(const RealImage &ref, const RealImage &est,
                   double dynamic_range) {
  if (!same_shape(ref, est))
    throw std::invalid_argument("ssim: shape mismatch");
  if (!all_finite(ref) || !all_finite(est))
    throw std::invalid_argument("ssim: non-finite input");
  if (!(dynamic_range > 0.0))
    throw std::invalid_argument("ssim: dynamic_range must be > 0");
  if (ref.ny() < kSsimWindow || ref.nx() < kSsimWindow)
    throw std::invalid_argument("ssim: window larger than image");

  const double c1 = (0.01 * dynamic_range) * (0.01 * dynamic_range);
  const double c2 = (0.03 * dynamic_range) * (0.03 * dynamic_range);
  const int w = kSsimWindow;
  const double n = double(w) * w;

  double total = 0.0;
  long windows = 0;
  for (int y0 = 0; y0 + w <= ref.ny(); ++y0)
    for (int x0 = 0; x0 + w <= ref.nx(); ++x0) {
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      for (int y = y0; y < y0 + w; ++y)
        for (int x = x0; x < x0 + w; ++x) {
          const double a = ref(y, x), b = est(y, x);
          sx += a;
          sy += b;
          sxx += a * a;
          syy += b * b;
          sxy += a * b;
        }
      const double mx = sx / n, my = sy / n;
      const double vx = (sxx - n * (mx * mx)) / (n - 1.0);
      const double vy = (syy - n * (my * my)) / (n - 1.0);
      const double cxy = (sxy - n * (mx * my)) / (n - 1.0);
      const double num = (2.0 * mx * my + c1) * (2.0 * cxy + c2);
      const double den = (mx * mx + my * my + c1) * (vx + vy + c2);
      total += num / den;
      ++windows;
    }
  return total / double(windows);
}

/// Default dynamic range: max(ref) - min(ref).
inline double ssim(const RealImage &ref, const RealImage &est) {
  const auto [lo, hi] = std::minmax_element(ref.begin(), ref.end());
  return ssim(ref, est, *hi - *lo);
}

} // namespace fsesim

#endif // FSESIM_METRICS_HPP
