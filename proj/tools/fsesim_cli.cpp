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

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "fsesim/fsesim.hpp"

namespace {

using namespace fsesim;

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> etl;
  std::optional<double> esp_ms;
  std::optional<int> events;
  std::optional<double> sigma_deg;
  std::optional<std::string> pipeline;
  std::optional<int> ny, nx;
  std::optional<double> sigma_noise;
  std::optional<int> n_samples;
};

void add_common_flags(CLI::App *cmd, CommonFlags &f) {
  cmd->add_option("--config", f.config_path, "configuration file (key = value lines)");
  cmd->add_option("--seed", f.seed, "base random seed");
  cmd->add_option("--etl", f.etl, "echo train length");
  cmd->add_option("--esp-ms", f.esp_ms, "echo spacing in ms");
  cmd->add_option("--events", f.events, "number of motion events");
  cmd->add_option("--sigma-deg", f.sigma_deg, "rotation std dev in degrees");
  cmd->add_option("--pipeline", f.pipeline,
                  "fse_aware, fse_agnostic or both");
  cmd->add_option("--ny", f.ny, "phase-encode matrix size");
  cmd->add_option("--nx", f.nx, "readout matrix size");
  cmd->add_option("--sigma-noise", f.sigma_noise,
                  "complex noise std dev in k-space");
  cmd->add_option("--samples", f.n_samples, "number of samples to generate");
}

// flags override config-file values, which override defaults; commands
// that only use part of the configuration (schedule, phantom) skip the
// full-geometry validation and rely on their own preconditions
SimConfig resolve_config(const CommonFlags &f, bool validate = true) {
  SimConfig cfg;
  if (f.config_path) cfg = load_config(*f.config_path);
  if (f.seed) cfg.base_seed = *f.seed;
  if (f.etl) cfg.etl = *f.etl;
  if (f.esp_ms) cfg.esp_ms = *f.esp_ms;
  if (f.events) cfg.n_events = *f.events;
  if (f.sigma_deg) cfg.sigma_deg = *f.sigma_deg;
  if (f.pipeline) cfg.pipeline = detail::parse_pipeline(*f.pipeline);
  if (f.ny) cfg.ny = *f.ny;
  if (f.nx) cfg.nx = *f.nx;
  if (f.sigma_noise) cfg.sigma_noise = *f.sigma_noise;
  if (f.n_samples) cfg.n_samples = *f.n_samples;
  if (validate) cfg.validate();
  return cfg;
}

void print_metrics_line(const RealImage &ref, const RealImage &est,
                        const std::string &prefix = "") {
  std::printf("%sssim=%.8g nrmse=%.8g\n", prefix.c_str(), ssim(ref, est),
              nrmse(ref, est));
}

int cmd_phantom(const CommonFlags &f, const std::string &out_prefix,
                bool with_mdme) {
  const SimConfig cfg = resolve_config(f, /*validate=*/false);
  const ParameterMaps maps = generate_phantom(cfg.ny, cfg.nx, cfg.base_seed);
  export_image(maps.pd, out_prefix + "_pd.fsi");
  export_image(maps.t2, out_prefix + "_t2.fsi");
  export_image(*maps.t1, out_prefix + "_t1.fsi");
  if (with_mdme) {
    const MdmeVolume vol =
        simulate_mdme_volume(maps, kMdmeDelaysMs, kMdmeEchoTimesMs);
    for (int m = 0; m < vol.n_meas; ++m) {
      RealImage meas(vol.ny, vol.nx);
      for (int y = 0; y < vol.ny; ++y)
        for (int x = 0; x < vol.nx; ++x) meas(y, x) = vol.pixel(y, x)[m];
      char suffix[32];
      std::snprintf(suffix, sizeof suffix, "_m%02d.fsi", m);
      export_image(meas, out_prefix + suffix);
    }
  }
  std::printf("phantom written to %s_{pd,t2,t1}.fsi\n", out_prefix.c_str());
  return 0;
}

int cmd_schedule(const CommonFlags &f, const std::string &out_path) {
  const SimConfig cfg = resolve_config(f, /*validate=*/false);
  const std::string table =
      schedule_table(build_schedule(cfg.ny, cfg.etl, cfg.esp_ms));
  if (out_path.empty()) {
    std::fputs(table.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    out << table;
  }
  return 0;
}

int cmd_simulate(const CommonFlags &f, const std::string &out_dir) {
  SimConfig cfg = resolve_config(f);
  cfg.n_samples = 1;
  const DatasetManifest manifest = generate_dataset(cfg, out_dir);
  for (const SampleRecord &r : manifest.records)
    std::printf("pipeline=%s ssim=%.8g nrmse=%.8g\n", to_string(r.pipeline),
                r.ssim, r.nrmse);
  return 0;
}

int cmd_dataset(const CommonFlags &f, const std::string &out_dir) {
  const SimConfig cfg = resolve_config(f);
  const DatasetManifest manifest = generate_dataset(cfg, out_dir);
  std::printf("wrote %zu records to %s\n", manifest.records.size(),
              (std::filesystem::path(out_dir) / kManifestName).c_str());
  return 0;
}

int cmd_metrics(const std::string &ref_path, const std::string &est_path) {
  print_metrics_line(load_image(ref_path), load_image(est_path));
  return 0;
}

int cmd_match(const std::string &in_prefix, const std::string &out_prefix) {
  // measurement stack: <prefix>_m00.fsi ... in delay-major order
  std::vector<RealImage> meas;
  for (int m = 0;; ++m) {
    char suffix[32];
    std::snprintf(suffix, sizeof suffix, "_m%02d.fsi", m);
    const std::filesystem::path p = in_prefix + suffix;
    if (!std::filesystem::exists(p)) break;
    meas.push_back(load_image(p));
  }
  const int n_expected = int(kMdmeDelaysMs.size() * kMdmeEchoTimesMs.size());
  if (int(meas.size()) != n_expected)
    throw std::runtime_error("match: expected " + std::to_string(n_expected) +
                             " measurement images, found " +
                             std::to_string(meas.size()));

  MdmeVolume vol(meas[0].ny(), meas[0].nx(), n_expected);
  for (int m = 0; m < n_expected; ++m) {
    if (!same_shape(meas[m], meas[0]))
      throw std::runtime_error("match: measurement shapes differ");
    for (int y = 0; y < vol.ny; ++y)
      for (int x = 0; x < vol.nx; ++x) vol.pixel(y, x)[m] = meas[m](y, x);
  }

  std::printf("building dictionary (%d x %d atoms)...\n",
              kMdmeT1Grid.count(), kMdmeT2Grid.count());
  const MdmeDictionary dict = build_dictionary(
      kMdmeT1Grid, kMdmeT2Grid, kMdmeDelaysMs, kMdmeEchoTimesMs);
  const ParameterMaps maps = phantom_from_mdme(vol, dict);
  export_image(maps.pd, out_prefix + "_pd.fsi");
  export_image(maps.t2, out_prefix + "_t2.fsi");
  export_image(*maps.t1, out_prefix + "_t1.fsi");
  std::printf("maps written to %s_{pd,t2,t1}.fsi\n", out_prefix.c_str());
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"fsesim: Fast Spin Echo motion artifact simulator"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string out_path, ref_path, est_path, in_prefix;
  bool with_mdme = false;

  CLI::App *phantom =
      app.add_subcommand("phantom", "generate tissue parameter maps");
  add_common_flags(phantom, flags);
  phantom->add_option("--out", out_path, "output path prefix")->required();
  phantom->add_flag("--mdme", with_mdme,
                    "also write the simulated MDME measurement stack");

  CLI::App *schedule =
      app.add_subcommand("schedule", "dump the acquisition schedule table");
  add_common_flags(schedule, flags);
  schedule->add_option("--out", out_path, "write table here (default stdout)");

  CLI::App *simulate =
      app.add_subcommand("simulate", "simulate one clean/corrupt pair");
  add_common_flags(simulate, flags);
  simulate->add_option("--out", out_path, "output directory")->required();

  CLI::App *dataset =
      app.add_subcommand("dataset", "generate a paired training dataset");
  add_common_flags(dataset, flags);
  dataset->add_option("--out", out_path, "output directory")->required();

  CLI::App *metrics =
      app.add_subcommand("metrics", "compare two stored magnitude images");
  metrics->add_option("--ref", ref_path, "reference image")->required();
  metrics->add_option("--est", est_path, "estimate image")->required();

  CLI::App *match = app.add_subcommand(
      "match", "fit parameter maps to an MDME measurement stack");
  match->add_option("--in", in_prefix, "measurement path prefix")->required();
  match->add_option("--out", out_path, "output path prefix")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (phantom->parsed()) return cmd_phantom(flags, out_path, with_mdme);
    if (schedule->parsed()) return cmd_schedule(flags, out_path);
    if (simulate->parsed()) return cmd_simulate(flags, out_path);
    if (dataset->parsed()) return cmd_dataset(flags, out_path);
    if (metrics->parsed()) return cmd_metrics(ref_path, est_path);
    if (match->parsed()) return cmd_match(in_prefix, out_path);
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
