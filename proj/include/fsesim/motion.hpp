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

#ifndef FSESIM_MOTION_HPP
#define FSESIM_MOTION_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fsesim/fft.hpp"
#include "fsesim/noise.hpp"
#include "fsesim/rigid.hpp"
#include "fsesim/rng.hpp"
#include "fsesim/schedule.hpp"
#include "fsesim/signal.hpp"

namespace fsesim {

/// Piecewise-constant inter-TR motion: n_events rigid states, each
/// covering a contiguous block of n_tr / n_events repetitions. Motion
/// never occurs inside an echo train.
class MotionTrajectory {
public:
  MotionTrajectory(int n_tr, std::vector<RigidTransform> event_states)
      : n_tr_(n_tr), events_(std::move(event_states)) {
    if (n_tr <= 0 || events_.empty())
      throw std::invalid_argument("MotionTrajectory: counts must be positive");
    if (n_tr % int(events_.size()) != 0)
      throw std::invalid_argument(
          "MotionTrajectory: n_events must divide n_tr");
    for (const RigidTransform &t : events_)
      if (!t.finite())
        throw std::invalid_argument("MotionTrajectory: non-finite transform");
    trs_per_event_ = n_tr / int(events_.size());
  }

  int n_tr() const { return n_tr_; }
  int n_events() const { return int(events_.size()); }
  int event_of_tr(int tr) const {
    if (tr < 0 || tr >= n_tr_)
      throw std::out_of_range("MotionTrajectory: tr out of range");
    return tr / trs_per_event_;
  }
  const RigidTransform &state_of_tr(int tr) const {
    return events_[event_of_tr(tr)];
  }
  std::span<const RigidTransform> events() const { return events_; }

  /// Per-TR states, expanded (all TRs of one event share the transform).
  std::vector<RigidTransform> states() const {
    std::vector<RigidTransform> s;
    s.reserve(n_tr_);
    for (int tr = 0; tr < n_tr_; ++tr) s.push_back(state_of_tr(tr));
    return s;
  }

  bool is_zero() const {
    for (const RigidTransform &t : events_)
      if (!t.identity()) return false;
    return true;
  }

private:
  int n_tr_;
  int trs_per_event_;
  std::vector<RigidTransform> events_;
};

/// Draws one rotation angle per event from N(0, sigma_deg^2); shifts stay
/// zero. Deterministic in the seed.
inline MotionTrajectory sample_trajectory(int n_tr, int n_events,
                                          double sigma_deg,
                                          std::uint64_t seed) {
  if (n_events <= 0 || n_tr <= 0 || n_tr % n_events != 0)
    throw std::invalid_argument(
        "sample_trajectory: n_events must divide n_tr");
  if (!(sigma_deg >= 0.0))
    throw std::invalid_argument("sample_trajectory: sigma_deg must be >= 0");

  const CounterRng rng(seed);
  std::vector<RigidTransform> events(n_events);
  for (int e = 0; e < n_events; ++e)
    events[e].rotation_deg = sigma_deg * rng.normal_pair(e).first;
  return MotionTrajectory(n_tr, std::move(events));
}

enum class Pipeline { fse_aware, fse_agnostic };

inline const char *to_string(Pipeline p) {
  return p == Pipeline::fse_aware ? "fse_aware" : "fse_agnostic";
}

struct ScheduleInfo {
  int n_pe = 0;
  int etl = 0;  // 0 when the pipeline never saw an echo train
  int n_tr = 0; // segment count for the k-space-segmented pipeline
  double esp_ms = 0.0;
};

struct SimulationOutput {
  ComplexImage clean;
  ComplexImage corrupt;
  MotionTrajectory trajectory;
  ScheduleInfo schedule;
  std::uint64_t seed = 0;
  Pipeline pipeline = Pipeline::fse_aware;
};

namespace detail {

// One k-space line per (tr, echo): echo e contributes band e of the
// center-out ordering, taken from that echo's own k-space.
inline KSpace gather_echo_train(const std::vector<KSpace> &echo_ksp,
                                const AcquisitionSchedule &sched) {
  KSpace out(sched.n_pe(), echo_ksp.front().nx());
  for (int e = 0; e < sched.etl(); ++e)
    for (int line : sched.echo_band(e)) {
      auto src = echo_ksp[e].row(line);
      std::copy(src.begin(), src.end(), out.row(line).begin());
    }
  return out;
}

inline ComplexImage simulate_gt_from_stack(const EchoStack &stack,
                                           const AcquisitionSchedule &sched) {
  std::vector<KSpace> echo_ksp;
  echo_ksp.reserve(stack.etl());
  for (const ComplexImage &echo : stack.echoes)
    echo_ksp.push_back(fft2c(echo));
  return ifft2c(gather_echo_train(echo_ksp, sched));
}

} // namespace detail

/// Motion-free reference image: per-echo decay images are transformed to
/// k-space and each echo contributes its own band of phase-encode lines.
inline ComplexImage simulate_gt(const ParameterMaps &maps,
                                const AcquisitionSchedule &sched) {
  if (maps.ny() != sched.n_pe())
    throw std::invalid_argument(
        "simulate_gt: maps shape does not match schedule");
  return detail::simulate_gt_from_stack(
      echo_stack(maps, sched.etl(), sched.esp_ms()), sched);
}

/// Echo-train-resolved motion corruption. Every echo image is rotated by
/// the motion state of its TR before sampling, so the k-space line
/// acquired at (tr, echo) sees both the correct T2 decay and the correct
/// motion state. TRs inside one motion event share a transform, so the
/// rotated k-spaces are computed once per (event, echo).
inline SimulationOutput simulate_fse_aware(const ParameterMaps &maps,
                                           const AcquisitionSchedule &sched,
                                           const MotionTrajectory &traj,
                                           double sigma_noise,
                                           std::uint64_t seed) {
  if (maps.ny() != sched.n_pe())
    throw std::invalid_argument(
        "simulate_fse_aware: maps shape does not match schedule");
  if (traj.n_tr() != sched.n_tr())
    throw std::invalid_argument(
        "simulate_fse_aware: trajectory/schedule TR count mismatch");

  const EchoStack stack = echo_stack(maps, sched.etl(), sched.esp_ms());

  std::vector<KSpace> clean_ksp;
  clean_ksp.reserve(stack.etl());
  for (const ComplexImage &echo : stack.echoes)
    clean_ksp.push_back(fft2c(echo));

  const int trs_per_event = sched.n_tr() / traj.n_events();
  KSpace corrupt_k(sched.n_pe(), maps.nx());
  for (int ev = 0; ev < traj.n_events(); ++ev) {
    const RigidTransform &state = traj.events()[ev];
    for (int e = 0; e < sched.etl(); ++e) {
      // identity events reuse the motion-free echo k-space
      const KSpace moved =
          state.identity() ? clean_ksp[e]
                           : fft2c(apply_rigid(stack.echoes[e], state));
      for (int t = 0; t < trs_per_event; ++t) {
        const int line = sched.line_of(ev * trs_per_event + t, e);
        auto src = moved.row(line);
        std::copy(src.begin(), src.end(), corrupt_k.row(line).begin());
      }
    }
  }

  SimulationOutput out{
      ifft2c(detail::gather_echo_train(clean_ksp, sched)),
      ifft2c(add_noise(corrupt_k, sigma_noise, seed)),
      traj,
      {sched.n_pe(), sched.etl(), sched.n_tr(), sched.esp_ms()},
      seed,
      Pipeline::fse_aware};
  return out;
}

/// Echo-train-agnostic baseline: the finished image is segmented into
/// n_segments contiguous k-space blocks and each block is taken from a
/// rotated copy of that single image. Decay and line ordering inside the
/// echo train are ignored, which is exactly what makes this baseline
/// drift away from real echo-train acquisitions.
inline SimulationOutput simulate_fse_agnostic(
    const ComplexImage &clean, std::span<const RigidTransform> events,
    int n_segments, double sigma_noise, std::uint64_t seed) {
  if (n_segments != int(events.size()))
    throw std::invalid_argument(
        "simulate_fse_agnostic: segment/event count mismatch");
  if (!all_finite(clean))
    throw std::invalid_argument("simulate_fse_agnostic: non-finite input");

  const auto segments = linear_segments(clean.ny(), n_segments);
  const KSpace clean_k = fft2c(clean);

  KSpace corrupt_k(clean.ny(), clean.nx());
  for (int s = 0; s < n_segments; ++s) {
    const KSpace moved = events[s].identity()
                             ? clean_k
                             : fft2c(apply_rigid(clean, events[s]));
    for (int line = segments[s].begin; line < segments[s].end; ++line) {
      auto src = moved.row(line);
      std::copy(src.begin(), src.end(), corrupt_k.row(line).begin());
    }
  }

  SimulationOutput out{
      clean,
      ifft2c(add_noise(corrupt_k, sigma_noise, seed)),
      MotionTrajectory(n_segments, {events.begin(), events.end()}),
      {clean.ny(), 0, n_segments, 0.0},
      seed,
      Pipeline::fse_agnostic};
  return out;
}

} // namespace fsesim

#endif // FSESIM_MOTION_HPP
