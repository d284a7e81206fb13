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

#ifndef FSESIM_GRID_HPP
#define FSESIM_GRID_HPP

#include <cassert>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace fsesim {

using cplx = std::complex<double>;

/// Dense row-major 2D array. ny is the phase-encode (row) axis, nx the
/// readout (column) axis. The Tag parameter makes image-domain and
/// k-space grids distinct types that cannot be mixed by accident.
template <typename T, typename Tag = void>
class Grid2D {
public:
  Grid2D() = default;

  Grid2D(int ny, int nx) : ny_(ny), nx_(nx), data_(checked_count(ny, nx)) {}

  Grid2D(int ny, int nx, T fill)
      : ny_(ny), nx_(nx), data_(checked_count(ny, nx), fill) {}

  int ny() const { return ny_; }
  int nx() const { return nx_; }
  std::size_t count() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T &operator()(int y, int x) {
    assert(y >= 0 && y < ny_ && x >= 0 && x < nx_);
    return data_[std::size_t(y) * nx_ + x];
  }
  const T &operator()(int y, int x) const {
    assert(y >= 0 && y < ny_ && x >= 0 && x < nx_);
    return data_[std::size_t(y) * nx_ + x];
  }

  std::span<T> row(int y) {
    assert(y >= 0 && y < ny_);
    return {data_.data() + std::size_t(y) * nx_, std::size_t(nx_)};
  }
  std::span<const T> row(int y) const {
    assert(y >= 0 && y < ny_);
    return {data_.data() + std::size_t(y) * nx_, std::size_t(nx_)};
  }

  std::span<T> flat() { return data_; }
  std::span<const T> flat() const { return data_; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

  bool operator==(const Grid2D &) const = default;

private:
  static std::size_t checked_count(int ny, int nx) {
    if (ny <= 0 || nx <= 0)
      throw std::invalid_argument("Grid2D: dimensions must be positive");
    return std::size_t(ny) * std::size_t(nx);
  }

  int ny_ = 0;
  int nx_ = 0;
  std::vector<T> data_;
};

struct image_domain_tag {};
struct kspace_domain_tag {};

using RealImage = Grid2D<double>;
using ComplexImage = Grid2D<cplx, image_domain_tag>;
using KSpace = Grid2D<cplx, kspace_domain_tag>;

template <typename T1, typename Tag1, typename T2, typename Tag2>
bool same_shape(const Grid2D<T1, Tag1> &a, const Grid2D<T2, Tag2> &b) {
  return a.ny() == b.ny() && a.nx() == b.nx();
}

template <typename T, typename Tag>
bool all_finite(const Grid2D<T, Tag> &g) {
  for (const T &v : g) {
    if constexpr (std::is_same_v<T, cplx>) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    } else {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

template <typename Tag>
RealImage magnitude(const Grid2D<cplx, Tag> &g) {
  RealImage out(g.ny(), g.nx());
  for (int y = 0; y < g.ny(); ++y)
    for (int x = 0; x < g.nx(); ++x) out(y, x) = std::abs(g(y, x));
  return out;
}

} // namespace fsesim

#endif // FSESIM_GRID_HPP
