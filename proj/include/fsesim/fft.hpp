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

#ifndef FSESIM_FFT_HPP
#define FSESIM_FFT_HPP

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "fsesim/grid.hpp"

namespace fsesim {

// Centered, orthonormal 2D transforms: the DC component lives at
// (ny/2, nx/2) in both domains and sum|X|^2 == sum|x|^2 (Parseval).
// Equivalent to fftshift(fft2(ifftshift(x))) / sqrt(ny*nx).

namespace detail {

// FFTW planning is not thread-safe; execution of a finished plan is.
// Plans are cached per (ny, nx, direction) for the process lifetime and
// created with FFTW_UNALIGNED so they can run on any buffer.
inline fftw_plan fft_plan_2d(int ny, int nx, int sign) {
  static std::mutex mtx;
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;

  std::lock_guard<std::mutex> lock(mtx);
  const auto key = std::make_tuple(ny, nx, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<cplx> a(std::size_t(ny) * nx), b(std::size_t(ny) * nx);
  fftw_plan p = fftw_plan_dft_2d(
      ny, nx, reinterpret_cast<fftw_complex *>(a.data()),
      reinterpret_cast<fftw_complex *>(b.data()), sign,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!p) throw std::runtime_error("fft: planner failed");
  cache.emplace(key, p);
  return p;
}

// dst[(y + ry) % ny][(x + rx) % nx] = src[y][x]
inline void roll_copy(const cplx *src, cplx *dst, int ny, int nx, int ry,
                      int rx) {
  for (int y = 0; y < ny; ++y) {
    const int yd = (y + ry) % ny;
    const cplx *srow = src + std::size_t(y) * nx;
    cplx *drow = dst + std::size_t(yd) * nx;
    for (int x = 0; x < nx; ++x) drow[(x + rx) % nx] = srow[x];
  }
}

template <typename TagIn, typename TagOut>
Grid2D<cplx, TagOut> centered_fft(const Grid2D<cplx, TagIn> &in, int sign,
                                  const char *name) {
  if (!all_finite(in))
    throw std::invalid_argument(std::string(name) + ": non-finite input");

  const int ny = in.ny(), nx = in.nx();
  const int cy = ny / 2, cx = nx / 2;

  std::vector<cplx> work(in.count()), freq(in.count());
  // ifftshift: move the centered origin to index 0
  roll_copy(in.flat().data(), work.data(), ny, nx, ny - cy, nx - cx);

  fftw_execute_dft(fft_plan_2d(ny, nx, sign),
                   reinterpret_cast<fftw_complex *>(work.data()),
                   reinterpret_cast<fftw_complex *>(freq.data()));

  Grid2D<cplx, TagOut> out(ny, nx);
  // fftshift back, with orthonormal scaling
  roll_copy(freq.data(), out.flat().data(), ny, nx, cy, cx);
  const double scale = 1.0 / std::sqrt(double(in.count()));
  for (cplx &v : out) v *= scale;
  return out;
}

} // namespace detail

/// Image -> k-space (forward centered DFT).
inline KSpace fft2c(const ComplexImage &img) {
  return detail::centered_fft<image_domain_tag, kspace_domain_tag>(
      img, FFTW_FORWARD, "fft2c");
}

/// k-space -> image; exact inverse of fft2c.
inline ComplexImage ifft2c(const KSpace &ksp) {
  return detail::centered_fft<kspace_domain_tag, image_domain_tag>(
      ksp, FFTW_BACKWARD, "ifft2c");
}

} // namespace fsesim

#endif // FSESIM_FFT_HPP
