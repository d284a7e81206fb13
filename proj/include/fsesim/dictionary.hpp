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

#ifndef FSESIM_DICTIONARY_HPP
#define FSESIM_DICTIONARY_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "fsesim/signal.hpp"

namespace fsesim {

/// Inclusive arithmetic grid lo, lo+step, ..., hi.
struct GridRange {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;

  int count() const {
    if (!(step > 0.0) || hi < lo)
      throw std::invalid_argument("GridRange: need hi >= lo and step > 0");
    return int(std::floor((hi - lo) / step + 1e-9)) + 1;
  }
  double value(int i) const { return lo + i * step; }
};

// Default MDME protocol: four saturation delays, two echo times, and the
// matching T1/T2 search grids.
inline constexpr std::array<double, 4> kMdmeDelaysMs = {7562.0, 3504.0,
                                                        1041.0, 171.0};
inline constexpr std::array<double, 2> kMdmeEchoTimesMs = {27.0, 90.0};
inline constexpr GridRange kMdmeT1Grid = {100.0, 6000.0, 20.0};
inline constexpr GridRange kMdmeT2Grid = {10.0, 1000.0, 2.0};

/// Dictionary of unit-normalized MDME signal evolutions over a T1 x T2
/// grid. Atoms are stored row-major, T1-major (atom a covers
/// t1_values[a / n_t2], t2_values[a % n_t2]).
struct MdmeDictionary {
  std::vector<double> t1_values;
  std::vector<double> t2_values;
  std::vector<double> td_ms;
  std::vector<double> te_ms;
  int n_meas = 0;
  int n_atoms = 0;
  std::vector<double> atoms;       // n_atoms x n_meas, unit rows
  std::vector<double> model_norms; // norm of the pd = 1 signal per atom

  std::span<const double> atom(int a) const {
    return {atoms.data() + std::size_t(a) * n_meas, std::size_t(n_meas)};
  }
  double t1_of_atom(int a) const { return t1_values[a / int(t2_values.size())]; }
  double t2_of_atom(int a) const { return t2_values[a % int(t2_values.size())]; }
};

inline MdmeDictionary build_dictionary(GridRange t1_range, GridRange t2_range,
                                       std::span<const double> td_ms,
                                       std::span<const double> te_ms) {
  if (td_ms.empty() || te_ms.empty())
    throw std::invalid_argument("build_dictionary: empty timing lists");

  MdmeDictionary dict;
  const int n_t1 = t1_range.count();
  const int n_t2 = t2_range.count();
  dict.t1_values.reserve(n_t1);
  dict.t2_values.reserve(n_t2);
  for (int i = 0; i < n_t1; ++i) dict.t1_values.push_back(t1_range.value(i));
  for (int j = 0; j < n_t2; ++j) dict.t2_values.push_back(t2_range.value(j));
  dict.td_ms.assign(td_ms.begin(), td_ms.end());
  dict.te_ms.assign(te_ms.begin(), te_ms.end());
  dict.n_meas = int(td_ms.size() * te_ms.size());
  dict.n_atoms = n_t1 * n_t2;
  dict.atoms.resize(std::size_t(dict.n_atoms) * dict.n_meas);
  dict.model_norms.resize(dict.n_atoms);

  std::size_t pos = 0;
  for (int i = 0; i < n_t1; ++i)
    for (int j = 0; j < n_t2; ++j) {
      const auto s =
          mdme_signal(dict.t1_values[i], dict.t2_values[j], 1.0, td_ms, te_ms);
      double nrm = 0.0;
      for (double v : s) nrm += v * v;
      nrm = std::sqrt(nrm);
      if (!(nrm > 0.0))
        throw std::invalid_argument(
            "build_dictionary: degenerate sequence timing (zero-norm atom)");
      const int a = i * n_t2 + j;
      dict.model_norms[a] = nrm;
      for (double v : s) dict.atoms[pos++] = v / nrm;
    }
  return dict;
}

/// Dictionary matched filter: per pixel, picks the atom with the highest
/// inner product against the unit-normalized signal (first atom wins on
/// ties, i.e. lowest T1 then T2 index) and recovers pd by projection.
/// Pixels whose signal norm falls below 1e-9 x (max norm in the volume)
/// are flagged background: pd = t1 = t2 = 0.
inline ParameterMaps match_maps(const MdmeVolume &vol,
                                const MdmeDictionary &dict) {
  if (vol.n_meas != dict.n_meas)
    throw std::invalid_argument("match_maps: signal length mismatch");

  const int ny = vol.ny, nx = vol.nx, m = vol.n_meas;

  double max_norm = 0.0;
  RealImage norms(ny, nx);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      double nrm2 = 0.0;
      for (double v : vol.pixel(y, x)) nrm2 += v * v;
      norms(y, x) = std::sqrt(nrm2);
      max_norm = std::max(max_norm, norms(y, x));
    }
  const double eps = 1e-9 * max_norm;

  ParameterMaps maps{RealImage(ny, nx), RealImage(ny, nx), RealImage(ny, nx)};
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      if (norms(y, x) <= eps) continue; // background sentinel already 0

      const auto s = vol.pixel(y, x);
      int best = 0;
      double best_dot = -std::numeric_limits<double>::infinity();
      const double *atom = dict.atoms.data();
      for (int a = 0; a < dict.n_atoms; ++a, atom += m) {
        double dot = 0.0;
        for (int k = 0; k < m; ++k) dot += s[k] * atom[k];
        if (dot > best_dot) {
          best_dot = dot;
          best = a;
        }
      }
      maps.pd(y, x) = best_dot / dict.model_norms[best];
      maps.t2(y, x) = dict.t2_of_atom(best);
      (*maps.t1)(y, x) = dict.t1_of_atom(best);
    }
  return maps;
}

} // namespace fsesim

#endif // FSESIM_DICTIONARY_HPP
