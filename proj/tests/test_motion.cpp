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

#include <catch2/catch.hpp>

#include "fsesim/metrics.hpp"
#include "fsesim/motion.hpp"
#include "fsesim/phantom.hpp"
#include "oracles.hpp"

using namespace fsesim;

namespace {

double rel_error(const ComplexImage &ref, const ComplexImage &est) {
  double err = 0.0, nrm = 0.0;
  for (int y = 0; y < ref.ny(); ++y)
    for (int x = 0; x < ref.nx(); ++x) {
      err += std::norm(est(y, x) - ref(y, x));
      nrm += std::norm(ref(y, x));
    }
  return std::sqrt(err / nrm);
}

// exact 90-degree index remap for real maps, mirroring oracle::rot90_ccw
RealImage rot90_real(const RealImage &img) {
  const int ny = img.ny(), nx = img.nx();
  const double cy = (ny - 1) / 2.0, cx = (nx - 1) / 2.0;
  RealImage out(ny, nx);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x) {
      const int sy = int(std::lround(cy - (cx - double(x))));
      const int sx = int(std::lround(cx + (cy - double(y))));
      out(y, x) = (sy >= 0 && sy < ny && sx >= 0 && sx < nx) ? img(sy, sx) : 0.0;
    }
  return out;
}

} // namespace

TEST_CASE("trajectory events cover contiguous TR blocks") {
  const auto traj = sample_trajectory(18, 9, 2.0, 7);
  CHECK(traj.n_tr() == 18);
  CHECK(traj.n_events() == 9);
  for (int tr = 0; tr < 18; ++tr) CHECK(traj.event_of_tr(tr) == tr / 2);
  const auto states = traj.states();
  REQUIRE(states.size() == 18);
  for (int tr = 0; tr < 18; ++tr)
    CHECK(states[tr].rotation_deg == traj.events()[tr / 2].rotation_deg);
}

TEST_CASE("trajectory sampling is deterministic and respects sigma") {
  const auto a = sample_trajectory(12, 4, 2.0, 42);
  const auto b = sample_trajectory(12, 4, 2.0, 42);
  const auto c = sample_trajectory(12, 4, 2.0, 43);
  for (int e = 0; e < 4; ++e) {
    CHECK(a.events()[e].rotation_deg == b.events()[e].rotation_deg);
    CHECK(a.events()[e].shift_x == 0.0);
    CHECK(a.events()[e].shift_y == 0.0);
  }
  bool differs = false;
  for (int e = 0; e < 4; ++e)
    differs |= a.events()[e].rotation_deg != c.events()[e].rotation_deg;
  CHECK(differs);

  const auto zero = sample_trajectory(12, 4, 0.0, 42);
  CHECK(zero.is_zero());

  CHECK_THROWS_AS(sample_trajectory(12, 5, 2.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_trajectory(12, 4, -1.0, 1), std::invalid_argument);
}

TEST_CASE("simulate_gt in the no-decay limit returns the proton density") {
  const int n = 32;
  ParameterMaps maps{RealImage(n, n, 1.0), RealImage(n, n, 1e9),
                     std::nullopt};
  const auto sched = build_schedule(n, 4, 12.0);
  const ComplexImage gt = simulate_gt(maps, sched);
  for (const cplx &v : gt) CHECK(std::abs(v - cplx{1.0, 0.0}) < 1e-6);
}

TEST_CASE("simulate_gt with a single echo is plain decay") {
  const auto maps = generate_phantom(32, 40, 5);
  const auto sched = build_schedule(32, 1, 25.0);
  const ComplexImage gt = simulate_gt(maps, sched);
  const ComplexImage direct = decay_image(maps, 25.0);
  CHECK(rel_error(direct, gt) < 1e-12);
}

TEST_CASE("simulate_gt matches a hand-assembled toy") {
  const int n = 8;
  ParameterMaps toy{RealImage(n, n), RealImage(n, n), std::nullopt};
  const CounterRng rng(9);
  std::uint64_t ctr = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      toy.pd(y, x) = rng.uniform(ctr++);
      toy.t2(y, x) = 20.0 + 100.0 * rng.uniform(ctr++);
    }
  const double esp = 12.0;
  const auto sched = build_schedule(n, 2, esp);

  // independent assembly: per-pixel decay, naive DFT, hand-derived bands
  ComplexImage e0(n, n), e1(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      e0(y, x) = toy.pd(y, x) * std::exp(-esp / toy.t2(y, x));
      e1(y, x) = toy.pd(y, x) * std::exp(-2.0 * esp / toy.t2(y, x));
    }
  const KSpace k0 = oracle::dft2c(e0), k1 = oracle::dft2c(e1);
  // center 4: sorted lines [4,3,5,2,6,1,7,0]; echo 0 owns [4,3,5,2]
  const int band0[4] = {4, 3, 5, 2}, band1[4] = {6, 1, 7, 0};
  KSpace combined(n, n);
  for (int i = 0; i < 4; ++i) {
    for (int x = 0; x < n; ++x) {
      combined(band0[i], x) = k0(band0[i], x);
      combined(band1[i], x) = k1(band1[i], x);
    }
  }
  const ComplexImage expect = oracle::idft2c(combined);
  const ComplexImage gt = simulate_gt(toy, sched);
  CHECK(rel_error(expect, gt) < 1e-9);
}

TEST_CASE("zero trajectory and zero noise reduce to the ground truth") {
  const auto maps = generate_phantom(64, 64, 17);
  const auto sched = build_schedule(64, 16, 12.0);
  const auto traj = sample_trajectory(sched.n_tr(), 4, 0.0, 17);
  const auto out = simulate_fse_aware(maps, sched, traj, 0.0, 17);
  const ComplexImage gt = simulate_gt(maps, sched);
  CHECK(out.clean == gt);
  CHECK(out.corrupt == gt); // same code path, bit-identical
  CHECK(rel_error(gt, out.corrupt) <= 1e-9);
}

TEST_CASE("constant 90-degree trajectory equals ground truth of rotated maps") {
  const auto maps = generate_phantom(64, 64, 23);
  const auto sched = build_schedule(64, 8, 12.0);
  std::vector<RigidTransform> events(4, RigidTransform{90.0, 0.0, 0.0});
  const MotionTrajectory traj(sched.n_tr(), events);
  const auto out = simulate_fse_aware(maps, sched, traj, 0.0, 1);

  ParameterMaps rotated{rot90_real(maps.pd), rot90_real(maps.t2),
                        std::nullopt};
  const ComplexImage expect = simulate_gt(rotated, sched);
  CHECK(rel_error(expect, out.corrupt) < 1e-6);
}

TEST_CASE("aware pipeline matches a hand-assembled toy with one moving event") {
  const int n = 8;
  ParameterMaps toy{RealImage(n, n), RealImage(n, n), std::nullopt};
  const CounterRng rng(31);
  std::uint64_t ctr = 0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      toy.pd(y, x) = rng.uniform(ctr++);
      toy.t2(y, x) = 30.0 + 80.0 * rng.uniform(ctr++);
    }
  const double esp = 12.0;
  const auto sched = build_schedule(n, 2, esp); // 4 TRs
  // event 0 still, event 1 rotated by an exact quarter turn
  const MotionTrajectory traj(4, {RigidTransform{},
                                  RigidTransform{90.0, 0.0, 0.0}});

  ComplexImage e0(n, n), e1(n, n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      e0(y, x) = toy.pd(y, x) * std::exp(-esp / toy.t2(y, x));
      e1(y, x) = toy.pd(y, x) * std::exp(-2.0 * esp / toy.t2(y, x));
    }
  const KSpace k0 = oracle::dft2c(e0), k1 = oracle::dft2c(e1);
  const KSpace k0r = oracle::dft2c(oracle::rot90_ccw(e0));
  const KSpace k1r = oracle::dft2c(oracle::rot90_ccw(e1));

  // bands [4,3,5,2] / [6,1,7,0]; TRs 0,1 -> event 0; TRs 2,3 -> event 1
  KSpace combined(n, n);
  const int band0[4] = {4, 3, 5, 2}, band1[4] = {6, 1, 7, 0};
  for (int tr = 0; tr < 4; ++tr) {
    const bool moved = tr >= 2;
    for (int x = 0; x < n; ++x) {
      combined(band0[tr], x) = (moved ? k0r : k0)(band0[tr], x);
      combined(band1[tr], x) = (moved ? k1r : k1)(band1[tr], x);
    }
  }
  const ComplexImage expect = oracle::idft2c(combined);
  const auto out = simulate_fse_aware(toy, sched, traj, 0.0, 0);
  CHECK(rel_error(expect, out.corrupt) < 1e-9);
}

TEST_CASE("agnostic pipeline identities") {
  const auto maps = generate_phantom(48, 48, 29);
  const auto sched = build_schedule(48, 4, 12.0);
  const ComplexImage clean = simulate_gt(maps, sched);

  SECTION("all-zero transforms reproduce the input") {
    std::vector<RigidTransform> events(3);
    const auto out = simulate_fse_agnostic(clean, events, 3, 0.0, 5);
    CHECK(rel_error(clean, out.corrupt) <= 1e-9);
  }
  SECTION("a single segment collapses to one global rotation") {
    std::vector<RigidTransform> events{RigidTransform{11.0, 0.0, 0.0}};
    const auto out = simulate_fse_agnostic(clean, events, 1, 0.0, 5);
    const ComplexImage expect = apply_rigid(clean, events[0]);
    CHECK(rel_error(expect, out.corrupt) <= 1e-9);
  }
  SECTION("event/segment count mismatch rejected") {
    std::vector<RigidTransform> events(2);
    CHECK_THROWS_AS(simulate_fse_agnostic(clean, events, 3, 0.0, 5),
                    std::invalid_argument);
  }
}

TEST_CASE("agnostic pipeline matches a hand-assembled two-segment toy") {
  const ComplexImage clean = oracle::random_complex_image(8, 8, 37);
  std::vector<RigidTransform> events{RigidTransform{},
                                     RigidTransform{10.0, 0.0, 0.0}};
  const auto out = simulate_fse_agnostic(clean, events, 2, 0.0, 0);

  const KSpace top = oracle::dft2c(clean);
  const KSpace bottom = oracle::dft2c(apply_rigid(clean, events[1]));
  KSpace combined(8, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 8; ++x)
      combined(y, x) = (y < 4 ? top : bottom)(y, x);
  const ComplexImage expect = oracle::idft2c(combined);
  CHECK(rel_error(expect, out.corrupt) < 1e-9);
}

TEST_CASE("pipelines diverge for any real motion") {
  const auto maps = generate_phantom(48, 48, 41);
  const auto sched = build_schedule(48, 4, 12.0); // 12 TRs
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    auto traj = sample_trajectory(sched.n_tr(), 3, 2.0, seed);
    // ensure the precondition: at least one event with |angle| >= 0.5 deg
    std::vector<RigidTransform> events(traj.events().begin(),
                                       traj.events().end());
    if (std::none_of(events.begin(), events.end(), [](const RigidTransform &t) {
          return std::abs(t.rotation_deg) >= 0.5;
        }))
      events[1].rotation_deg = 0.7;
    const MotionTrajectory fixed(sched.n_tr(), events);

    const auto aware = simulate_fse_aware(maps, sched, fixed, 0.0, seed);
    const auto agn =
        simulate_fse_agnostic(aware.clean, fixed.events(), 3, 0.0, seed);
    CHECK(nrmse(magnitude(aware.corrupt), magnitude(agn.corrupt)) > 0.0);
    // both pipelines carried exactly the same angles
    REQUIRE(agn.trajectory.n_events() == fixed.n_events());
    for (int e = 0; e < fixed.n_events(); ++e)
      CHECK(agn.trajectory.events()[e].rotation_deg ==
            fixed.events()[e].rotation_deg);
  }
}

TEST_CASE("simulation outputs are bit-reproducible") {
  const auto maps = generate_phantom(48, 48, 55);
  const auto sched = build_schedule(48, 8, 14.0);
  const auto traj = sample_trajectory(sched.n_tr(), 3, 2.0, 55);
  const auto a = simulate_fse_aware(maps, sched, traj, 0.25, 55);
  const auto b = simulate_fse_aware(maps, sched, traj, 0.25, 55);
  CHECK(a.clean == b.clean);
  CHECK(a.corrupt == b.corrupt);

  const auto ga = simulate_fse_agnostic(a.clean, traj.events(), 3, 0.25, 55);
  const auto gb = simulate_fse_agnostic(a.clean, traj.events(), 3, 0.25, 55);
  CHECK(ga.corrupt == gb.corrupt);
}

TEST_CASE("aware pipeline validates shapes") {
  const auto maps = generate_phantom(32, 32, 1);
  const auto sched = build_schedule(64, 8, 12.0);
  const auto traj = sample_trajectory(sched.n_tr(), 4, 1.0, 1);
  CHECK_THROWS_AS(simulate_fse_aware(maps, sched, traj, 0.0, 1),
                  std::invalid_argument);

  // trajectory was built for 8 TRs, schedule below has 4
  const auto sched2 = build_schedule(32, 8, 12.0);
  CHECK_THROWS_AS(simulate_fse_aware(maps, sched2, traj, 0.0, 1),
                  std::invalid_argument);
}
