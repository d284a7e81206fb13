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

#ifndef FSESIM_RIGID_HPP
#define FSESIM_RIGID_HPP

#include <cmath>
#include <numbers>

#include "fsesim/fft.hpp"
#include "fsesim/grid.hpp"

namespace fsesim {

/// In-plane rigid motion state. Rotation is counterclockwise (in the
/// usual display orientation) about the geometric image center
/// ((ny-1)/2, (nx-1)/2); shifts are in pixels along the row/column axes.
struct RigidTransform {
  double rotation_deg = 0.0;
  double shift_y = 0.0;
  double shift_x = 0.0;

  bool identity() const {
    return rotation_deg == 0.0 && shift_y == 0.0 && shift_x == 0.0;
  }
  bool finite() const {
    return std::isfinite(rotation_deg) && std::isfinite(shift_y) &&
           std::isfinite(shift_x);
  }
};

namespace detail {

// Bilinear resample at (sy, sx) with zero fill outside the grid. Source
// coordinates within 1e-9 of an integer are snapped so that axis-aligned
// rotations reduce to exact index permutations.
inline cplx sample_bilinear(const ComplexImage &img, double sy, double sx) {
  const double rsy = std::round(sy), rsx = std::round(sx);
  if (std::abs(sy - rsy) < 1e-9) sy = rsy;
  if (std::abs(sx - rsx) < 1e-9) sx = rsx;

  const double fy = std::floor(sy), fx = std::floor(sx);
  const int y0 = int(fy), x0 = int(fx);
  const double wy = sy - fy, wx = sx - fx;

  cplx acc{0.0, 0.0};
  const int ny = img.ny(), nx = img.nx();
  auto add = [&](int y, int x, double w) {
    if (w != 0.0 && y >= 0 && y < ny && x >= 0 && x < nx) acc += w * img(y, x);
  };
  add(y0, x0, (1.0 - wy) * (1.0 - wx));
  add(y0, x0 + 1, (1.0 - wy) * wx);
  add(y0 + 1, x0, wy * (1.0 - wx));
  add(y0 + 1, x0 + 1, wy * wx);
  return acc;
}

inline ComplexImage rotate_bilinear(const ComplexImage &img, double deg) {
  const int ny = img.ny(), nx = img.nx();
  const double cy = (ny - 1) / 2.0, cx = (nx - 1) / 2.0;
  const double th = deg * std::numbers::pi / 180.0;
  const double c = std::cos(th), s = std::sin(th);

  ComplexImage out(ny, nx);
  for (int y = 0; y < ny; ++y) {
    const double dyu = cy - y; // up-positive row offset
    for (int x = 0; x < nx; ++x) {
      const double dx = x - cx;
      // inverse rotation of the output coordinate
      const double sx_rel = dx * c + dyu * s;
      const double sy_up = -dx * s + dyu * c;
      out(y, x) = sample_bilinear(img, cy - sy_up, cx + sx_rel);
    }
  }
  return out;
}

// Translation as a linear phase ramp in k-space: exact (wraparound)
// subpixel shifts, content moves toward increasing y/x.
inline ComplexImage translate_fourier(const ComplexImage &img, double dy,
                                      double dx) {
  const int ny = img.ny(), nx = img.nx();
  const int cy = ny / 2, cx = nx / 2;
  KSpace k = fft2c(img);
  for (int y = 0; y < ny; ++y) {
    const double fy = double(y - cy) / ny;
    for (int x = 0; x < nx; ++x) {
      const double fx = double(x - cx) / nx;
      const double phase =
          -2.0 * std::numbers::pi * (fy * dy + fx * dx);
      k(y, x) *= cplx(std::cos(phase), std::sin(phase));
    }
  }
  return ifft2c(k);
}

} // namespace detail

/// Rotates about the image center (bilinear, zero fill), then translates
/// via an exact k-space phase ramp. A zero transform returns the input
/// buffer unchanged.
inline ComplexImage apply_rigid(const ComplexImage &img,
                                const RigidTransform &t) {
  if (!all_finite(img))
    throw std::invalid_argument("apply_rigid: non-finite input");
  if (!t.finite())
    throw std::invalid_argument("apply_rigid: non-finite transform");

  if (t.identity()) return img;

  ComplexImage out =
      (t.rotation_deg != 0.0) ? detail::rotate_bilinear(img, t.rotation_deg)
                              : img;
  if (t.shift_y != 0.0 || t.shift_x != 0.0)
    out = detail::translate_fourier(out, t.shift_y, t.shift_x);
  return out;
}

} // namespace fsesim

#endif // FSESIM_RIGID_HPP
