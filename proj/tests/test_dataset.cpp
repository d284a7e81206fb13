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

#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "fsesim/dataset.hpp"

using namespace fsesim;
namespace fs = std::filesystem;

namespace {

fs::path test_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() /
      ("fsesim-ds-test-" + std::to_string(::getpid()) + "-" +
       std::to_string(counter++));
  return dir;
}

SimConfig small_config() {
  SimConfig cfg;
  cfg.ny = 64;
  cfg.nx = 64;
  cfg.etl = 8;
  cfg.n_events = 4;
  cfg.n_samples = 3;
  cfg.base_seed = 5;
  return cfg;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in),
          std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("dataset generation produces the expected files and records") {
  auto cfg = small_config();
  cfg.pipeline = PipelineMode::both;
  const auto dir = test_dir();
  const DatasetManifest m = generate_dataset(cfg, dir);

  // 3 samples x both pipelines: 3 clean + 6 corrupt files, 6 records
  CHECK(m.records.size() == 6);
  CHECK(m.complete);
  int n_files = 0;
  for (const auto &e : fs::directory_iterator(dir)) {
    (void)e;
    ++n_files;
  }
  CHECK(n_files == 3 + 6 + 1); // + manifest

  verify_manifest(m, dir);
  for (const SampleRecord &r : m.records) {
    CHECK(r.event_angles_deg.size() == 4);
    CHECK(r.ssim <= 1.0);
    CHECK(r.nrmse >= 0.0);
  }
  // pairing: aware and agnostic of one sample share the clean file
  CHECK(m.records[0].clean_file == m.records[1].clean_file);
  CHECK(m.records[0].corrupt_file != m.records[1].corrupt_file);
  // both pipelines recorded the same event angles
  for (int e = 0; e < 4; ++e)
    CHECK(m.records[0].event_angles_deg[e] ==
          m.records[1].event_angles_deg[e]);
  fs::remove_all(dir);
}

TEST_CASE("dataset manifest metrics recompute exactly from stored files") {
  const auto cfg = small_config();
  const auto dir = test_dir();
  const DatasetManifest m = generate_dataset(cfg, dir);
  REQUIRE(m.records.size() == 3);
  for (const SampleRecord &r : m.records) {
    const RealImage clean = load_image(dir / r.clean_file);
    const RealImage corrupt = load_image(dir / r.corrupt_file);
    CHECK(std::abs(ssim(clean, corrupt) - r.ssim) <= 1e-12);
    CHECK(std::abs(nrmse(clean, corrupt) - r.nrmse) <= 1e-12);
  }
  fs::remove_all(dir);
}

TEST_CASE("dataset regeneration is byte-identical") {
  const auto cfg = small_config();
  const auto dir1 = test_dir(), dir2 = test_dir();
  generate_dataset(cfg, dir1);
  generate_dataset(cfg, dir2);
  int compared = 0;
  for (const auto &e : fs::directory_iterator(dir1)) {
    const fs::path other = dir2 / e.path().filename();
    REQUIRE(fs::exists(other));
    CHECK(slurp(e.path()) == slurp(other));
    ++compared;
  }
  CHECK(compared == 3 + 3 + 1);
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("manifest text round-trips") {
  const auto cfg = small_config();
  const auto dir = test_dir();
  const DatasetManifest m = generate_dataset(cfg, dir);
  const DatasetManifest back = load_manifest(dir);
  CHECK(back.format_version == "1");
  CHECK(back.complete);
  CHECK(back.config.ny == cfg.ny);
  CHECK(back.config.n_samples == cfg.n_samples);
  REQUIRE(back.records.size() == m.records.size());
  for (std::size_t i = 0; i < m.records.size(); ++i) {
    CHECK(back.records[i].sample_id == m.records[i].sample_id);
    CHECK(back.records[i].seed == m.records[i].seed);
    CHECK(back.records[i].clean_file == m.records[i].clean_file);
    CHECK(back.records[i].ssim == m.records[i].ssim);   // %.17g round-trip
    CHECK(back.records[i].nrmse == m.records[i].nrmse);
    REQUIRE(back.records[i].event_angles_deg.size() ==
            m.records[i].event_angles_deg.size());
    for (std::size_t e = 0; e < m.records[i].event_angles_deg.size(); ++e)
      CHECK(back.records[i].event_angles_deg[e] ==
            m.records[i].event_angles_deg[e]);
  }
  verify_manifest(back, dir);
  fs::remove_all(dir);
}

TEST_CASE("manifest verification detects missing and resized files") {
  const auto cfg = small_config();
  const auto dir = test_dir();
  const DatasetManifest m = generate_dataset(cfg, dir);

  SECTION("missing file") {
    fs::remove(dir / m.records[1].corrupt_file);
    CHECK_THROWS_WITH(verify_manifest(m, dir), Catch::Contains("missing"));
  }
  SECTION("size mismatch") {
    std::ofstream(dir / m.records[0].clean_file, std::ios::app) << "x";
    CHECK_THROWS_WITH(verify_manifest(m, dir),
                      Catch::Contains("size mismatch"));
  }
  fs::remove_all(dir);
}

TEST_CASE("io failure mid-run leaves a partial manifest") {
  const auto cfg = small_config();
  const auto dir = test_dir();
  // sample 0 will succeed; sample 1's temp file collides with a directory
  fs::create_directories(dir / "sample_00001_clean.fsi.tmp");
  CHECK_THROWS_AS(generate_dataset(cfg, dir), std::exception);

  const DatasetManifest partial = load_manifest(dir);
  CHECK_FALSE(partial.complete);
  REQUIRE(partial.records.size() == 1);
  CHECK(partial.records[0].sample_id == 0);
  verify_manifest(partial, dir);
  fs::remove_all(dir);
}

TEST_CASE("dataset rejects invalid configuration up front") {
  auto cfg = small_config();
  cfg.etl = 7; // does not divide 64
  CHECK_THROWS_AS(generate_dataset(cfg, test_dir()), std::invalid_argument);
}
