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
#include "oracles.hpp"

using namespace fsesim;

TEST_CASE("nrmse basics") {
  const RealImage ref = oracle::random_image(10, 12, 1, 0.1, 1.0);
  SECTION("identical images give exactly zero") {
    CHECK(nrmse(ref, ref) == 0.0);
  }
  SECTION("doubling the reference gives exactly one") {
    RealImage est = ref;
    for (double &v : est) v *= 2.0;
    CHECK(nrmse(ref, est) == Approx(1.0).margin(1e-14));
  }
  SECTION("constant offset on a unit-norm reference") {
    const int n = 16;
    RealImage unit(n, n, 1.0 / double(n)); // Euclidean norm 1
    RealImage est = unit;
    const double c = 0.37;
    for (double &v : est) v += c;
    CHECK(nrmse(unit, est) == Approx(c * double(n)).epsilon(1e-12));
  }
  SECTION("zero reference rejected") {
    RealImage zero(4, 4);
    CHECK_THROWS_AS(nrmse(zero, ref), std::invalid_argument);
  }
  SECTION("shape mismatch rejected") {
    RealImage other(10, 13);
    CHECK_THROWS_AS(nrmse(ref, other), std::invalid_argument);
  }
}

TEST_CASE("nrmse scale law") {
  const RealImage ref = oracle::random_image(9, 9, 2, 0.2, 1.2);
  const RealImage d = oracle::random_image(9, 9, 3, -0.1, 0.1);
  RealImage e1 = ref, e2 = ref;
  for (int y = 0; y < 9; ++y)
    for (int x = 0; x < 9; ++x) {
      e1(y, x) += d(y, x);
      e2(y, x) += 3.5 * d(y, x);
    }
  CHECK(nrmse(ref, e2) == Approx(3.5 * nrmse(ref, e1)).epsilon(1e-12));
}

TEST_CASE("ssim of an image with itself is exactly one") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const RealImage img = oracle::random_image(12, 15, seed);
    CHECK(ssim(img, img) == 1.0);
  }
}

TEST_CASE("ssim decorrelates toward zero under overwhelming noise") {
  const RealImage ref = oracle::random_image(24, 24, 4, 0.4, 0.6);
  auto noisy_ssim = [&](double amp) {
    RealImage est = ref;
    const CounterRng rng(11);
    std::uint64_t ctr = 0;
    for (double &v : est) v += amp * (rng.normal_pair(ctr++).first);
    return ssim(ref, est, 0.2);
  };
  const double mild = noisy_ssim(0.05);
  const double heavy = noisy_ssim(1000.0);
  CHECK(mild < 1.0);
  CHECK(mild > 0.1);
  CHECK(std::abs(heavy) < 0.05);
  CHECK(std::abs(heavy) < mild);
}

TEST_CASE("ssim agrees with a two-pass reference implementation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const RealImage a = oracle::random_image(16, 16, 100 + seed);
    const RealImage b = oracle::random_image(16, 16, 200 + seed);
    const double L = 1.0;
    CHECK(ssim(a, b, L) ==
          Approx(oracle::ssim_reference(a, b, L)).margin(1e-10));
  }
}

TEST_CASE("ssim is symmetric at fixed dynamic range") {
  const RealImage a = oracle::random_image(14, 14, 7);
  const RealImage b = oracle::random_image(14, 14, 8);
  CHECK(ssim(a, b, 1.0) == ssim(b, a, 1.0));
}

TEST_CASE("ssim is invariant under a joint rescaling with matched range") {
  // v -> a*v on both images with the dynamic range scaled by the same a;
  // (offsets are not neutral: the luminance term is sensitive to shifts)
  const RealImage a = oracle::random_image(14, 14, 9);
  const RealImage b = oracle::random_image(14, 14, 10);
  const double scale = 3.0;
  RealImage a2 = a, b2 = b;
  for (double &v : a2) v *= scale;
  for (double &v : b2) v *= scale;
  CHECK(ssim(a2, b2, scale * 1.0) == Approx(ssim(a, b, 1.0)).margin(1e-12));
}

TEST_CASE("ssim argument validation") {
  const RealImage small(5, 5);
  CHECK_THROWS_AS(ssim(small, small, 1.0), std::invalid_argument);
  const RealImage a = oracle::random_image(8, 8, 1);
  CHECK_THROWS_AS(ssim(a, a, 0.0), std::invalid_argument);
  const RealImage other(8, 9);
  CHECK_THROWS_AS(ssim(a, other, 1.0), std::invalid_argument);
}
