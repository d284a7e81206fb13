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

#ifndef FSESIM_SCHEDULE_HPP
#define FSESIM_SCHEDULE_HPP

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "fsesim/grid.hpp"

namespace fsesim {

enum class LineOrdering { center_out };

/// Maps (tr, echo) to a phase-encode line. Center-out ordering: all
/// n_pe lines are sorted by distance from the DC line (ties to the lower
/// index) and split into etl consecutive bands of n_tr lines; echo e owns
/// band e, and within a band TR t takes the t-th line in sorted order.
/// The mapping is a bijection onto {0..n_pe-1} (Nyquist sampling), and
/// early echoes always sit closer to the k-space center than later ones.
class AcquisitionSchedule {
public:
  AcquisitionSchedule(int n_pe, int etl, double esp_ms,
                      LineOrdering ordering = LineOrdering::center_out)
      : n_pe_(n_pe), etl_(etl), esp_ms_(esp_ms), ordering_(ordering) {
    if (n_pe <= 0 || etl <= 0)
      throw std::invalid_argument("schedule: counts must be positive");
    if (n_pe % etl != 0)
      throw std::invalid_argument("schedule: etl must divide n_pe");
    if (!(esp_ms > 0.0))
      throw std::invalid_argument("schedule: esp_ms must be > 0");
    if (ordering != LineOrdering::center_out)
      throw std::invalid_argument("schedule: unsupported ordering");
    n_tr_ = n_pe / etl;

    lines_.resize(n_pe);
    std::iota(lines_.begin(), lines_.end(), 0);
    const int center = n_pe / 2;
    std::sort(lines_.begin(), lines_.end(), [center](int a, int b) {
      const int da = std::abs(a - center), db = std::abs(b - center);
      return da != db ? da < db : a < b;
    });
  }

  int n_pe() const { return n_pe_; }
  int etl() const { return etl_; }
  int n_tr() const { return n_tr_; }
  double esp_ms() const { return esp_ms_; }
  LineOrdering ordering() const { return ordering_; }

  int line_of(int tr, int echo) const {
    if (tr < 0 || tr >= n_tr_ || echo < 0 || echo >= etl_)
      throw std::out_of_range("schedule: (tr, echo) out of range");
    return lines_[std::size_t(echo) * n_tr_ + tr];
  }

  double te_ms(int echo) const {
    if (echo < 0 || echo >= etl_)
      throw std::out_of_range("schedule: echo out of range");
    return (echo + 1) * esp_ms_;
  }

  /// The n_tr lines owned by one echo, in within-band sorted order.
  std::span<const int> echo_band(int echo) const {
    if (echo < 0 || echo >= etl_)
      throw std::out_of_range("schedule: echo out of range");
    return {lines_.data() + std::size_t(echo) * n_tr_, std::size_t(n_tr_)};
  }

private:
  int n_pe_, etl_, n_tr_;
  double esp_ms_;
  LineOrdering ordering_;
  std::vector<int> lines_; // banded: band e occupies [e*n_tr, (e+1)*n_tr)
};

inline AcquisitionSchedule build_schedule(
    int n_pe, int etl, double esp_ms,
    LineOrdering ordering = LineOrdering::center_out) {
  return AcquisitionSchedule(n_pe, etl, esp_ms, ordering);
}

struct SampledLine {
  int line = 0;
  std::vector<cplx> values;
};
using SampledLines = std::vector<SampledLine>;

/// Extracts the etl phase-encode lines one TR acquires from a k-space.
/// In a motion-resolved simulation the caller passes the k-space of the
/// motion state and echo the line belongs to, one call per (tr, echo).
inline SampledLines sample_lines(const KSpace &ksp,
                                 const AcquisitionSchedule &sched, int tr) {
  if (tr < 0 || tr >= sched.n_tr())
    throw std::out_of_range("sample_lines: tr out of range");
  if (ksp.ny() != sched.n_pe())
    throw std::invalid_argument("sample_lines: k-space/schedule mismatch");

  SampledLines out;
  out.reserve(sched.etl());
  for (int e = 0; e < sched.etl(); ++e) {
    const int line = sched.line_of(tr, e);
    auto row = ksp.row(line);
    out.push_back({line, {row.begin(), row.end()}});
  }
  return out;
}

/// Places sampled lines back into a full k-space. The samples must form
/// an exact partition of all ny lines.
inline KSpace assemble_kspace(const SampledLines &samples, int ny, int nx) {
  KSpace out(ny, nx);
  std::vector<char> written(ny, 0);
  for (const SampledLine &s : samples) {
    if (s.line < 0 || s.line >= ny)
      throw std::invalid_argument("assemble_kspace: line " +
                                  std::to_string(s.line) + " out of range");
    if (written[s.line])
      throw std::invalid_argument("assemble_kspace: line " +
                                  std::to_string(s.line) + " written twice");
    if (int(s.values.size()) != nx)
      throw std::invalid_argument("assemble_kspace: line " +
                                  std::to_string(s.line) + " has wrong width");
    std::copy(s.values.begin(), s.values.end(), out.row(s.line).begin());
    written[s.line] = 1;
  }
  for (int y = 0; y < ny; ++y)
    if (!written[y])
      throw std::invalid_argument("assemble_kspace: missing line " +
                                  std::to_string(y));
  return out;
}

struct LineRange {
  int begin = 0;
  int end = 0; // half-open
  int size() const { return end - begin; }
};

/// Splits {0..n_pe-1} into n_segments contiguous blocks in natural line
/// order, sizes as equal as possible with the larger blocks first.
inline std::vector<LineRange> linear_segments(int n_pe, int n_segments) {
  if (n_pe <= 0 || n_segments <= 0)
    throw std::invalid_argument("linear_segments: counts must be positive");
  if (n_segments > n_pe)
    throw std::invalid_argument("linear_segments: more segments than lines");

  const int base = n_pe / n_segments;
  const int rem = n_pe % n_segments;
  std::vector<LineRange> segs;
  segs.reserve(n_segments);
  int pos = 0;
  for (int s = 0; s < n_segments; ++s) {
    const int len = base + (s < rem ? 1 : 0);
    segs.push_back({pos, pos + len});
    pos += len;
  }
  return segs;
}

/// Audit table, one row per acquired sample: "tr,echo,line,te_ms".
inline std::string schedule_table(const AcquisitionSchedule &sched) {
  std::string out = "tr,echo,line,te_ms\n";
  char buf[96];
  for (int tr = 0; tr < sched.n_tr(); ++tr)
    for (int e = 0; e < sched.etl(); ++e) {
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%g\n", tr, e,
                    sched.line_of(tr, e), sched.te_ms(e));
      out += buf;
    }
  return out;
}

} // namespace fsesim

#endif // FSESIM_SCHEDULE_HPP
