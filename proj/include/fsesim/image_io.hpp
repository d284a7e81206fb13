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

#ifndef FSESIM_IMAGE_IO_HPP
#define FSESIM_IMAGE_IO_HPP

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <vector>

#include "fsesim/grid.hpp"

namespace fsesim {

// Magnitude image container format, designed to be bit-exact and
// trivially parseable from any language:
//
//   offset  size  field
//   0       8     magic "FSEIMG01"
//   8       4     ny, uint32 little-endian
//   12      4     nx, uint32 little-endian
//   16      4     dtype code, uint32 little-endian (1 = float32)
//   20      4     reserved, zero
//   24      ...   ny*nx float32 little-endian, row-major
//
// Values are stored as float32; loading widens back to double.

inline constexpr char kImageMagic[8] = {'F', 'S', 'E', 'I',
                                        'M', 'G', '0', '1'};
inline constexpr std::uint32_t kImageDtypeF32 = 1;
inline constexpr std::size_t kImageHeaderBytes = 24;

static_assert(std::endian::native == std::endian::little,
              "image container assumes a little-endian host");

namespace detail {

inline void put_u32(std::string &buf, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  buf.append(b, 4);
}

inline std::uint32_t get_u32(const char *p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return v;
}

} // namespace detail

inline std::string encode_image(const RealImage &img) {
  std::string buf;
  buf.reserve(kImageHeaderBytes + img.count() * 4);
  buf.append(kImageMagic, 8);
  detail::put_u32(buf, std::uint32_t(img.ny()));
  detail::put_u32(buf, std::uint32_t(img.nx()));
  detail::put_u32(buf, kImageDtypeF32);
  detail::put_u32(buf, 0);
  for (double v : img) {
    const float f = float(v);
    char b[4];
    std::memcpy(b, &f, 4);
    buf.append(b, 4);
  }
  return buf;
}

inline RealImage decode_image(const std::string &buf,
                              const std::string &origin = "image") {
  if (buf.size() < kImageHeaderBytes ||
      std::memcmp(buf.data(), kImageMagic, 8) != 0)
    throw std::runtime_error(origin + ": bad magic");
  const std::uint32_t ny = detail::get_u32(buf.data() + 8);
  const std::uint32_t nx = detail::get_u32(buf.data() + 12);
  const std::uint32_t dtype = detail::get_u32(buf.data() + 16);
  if (dtype != kImageDtypeF32)
    throw std::runtime_error(origin + ": unsupported dtype code");
  if (ny == 0 || nx == 0 || ny > (1u << 20) || nx > (1u << 20))
    throw std::runtime_error(origin + ": implausible dimensions");
  const std::size_t expect =
      kImageHeaderBytes + std::size_t(ny) * nx * 4;
  if (buf.size() != expect)
    throw std::runtime_error(origin + ": truncated or oversized payload");

  RealImage img{int(ny), int(nx)};
  const char *p = buf.data() + kImageHeaderBytes;
  for (double &v : img) {
    float f;
    std::memcpy(&f, p, 4);
    v = double(f);
    p += 4;
  }
  return img;
}

inline void export_image(const RealImage &img,
                         const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("export_image: cannot open " +
                                     path.string());
  const std::string buf = encode_image(img);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out) throw std::runtime_error("export_image: write failed for " +
                                     path.string());
}

inline RealImage load_image(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_image: cannot open " +
                                    path.string());
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  return decode_image(buf, path.string());
}

/// Write-then-rename so readers never observe a half-written file.
inline void export_image_atomic(const RealImage &img,
                                const std::filesystem::path &path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  export_image(img, tmp);
  std::filesystem::rename(tmp, path);
}

} // namespace fsesim

#endif // FSESIM_IMAGE_IO_HPP
