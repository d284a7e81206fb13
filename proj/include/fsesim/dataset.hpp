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

#ifndef FSESIM_DATASET_HPP
#define FSESIM_DATASET_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fsesim/config.hpp"
#include "fsesim/image_io.hpp"
#include "fsesim/metrics.hpp"
#include "fsesim/motion.hpp"
#include "fsesim/phantom.hpp"

namespace fsesim {

/// One exported clean/corrupt pair. Metrics are computed from the files
/// as stored (float32), so re-reading the files reproduces them exactly.
struct SampleRecord {
  int sample_id = 0;
  Pipeline pipeline = Pipeline::fse_aware;
  std::uint64_t seed = 0;
  std::vector<double> event_angles_deg;
  std::string clean_file;
  std::uint64_t clean_bytes = 0;
  std::string corrupt_file;
  std::uint64_t corrupt_bytes = 0;
  double ssim = 0.0;
  double nrmse = 0.0;
};

struct DatasetManifest {
  std::string format_version = "1";
  bool complete = true;
  SimConfig config;
  std::vector<SampleRecord> records;
};

inline constexpr const char *kManifestName = "manifest.txt";

namespace detail {

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string sample_file(int id, const char *kind) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "sample_%05d_%s.fsi", id, kind);
  return buf;
}

} // namespace detail

inline std::string manifest_to_text(const DatasetManifest &m) {
  std::string out;
  out += "format_version: " + m.format_version + "\n";
  out += std::string("complete: ") + (m.complete ? "true" : "false") + "\n";
  // config echo, one key per line
  std::istringstream cfg(config_to_text(m.config));
  for (std::string line; std::getline(cfg, line);) {
    const auto eq = line.find(" = ");
    out += "config." + line.substr(0, eq) + ": " + line.substr(eq + 3) + "\n";
  }
  out += "records: " + std::to_string(m.records.size()) + "\n";
  out += "# sample_id,pipeline,seed,angles_deg,clean_file,clean_bytes,"
         "corrupt_file,corrupt_bytes,ssim,nrmse\n";
  for (const SampleRecord &r : m.records) {
    out += std::to_string(r.sample_id);
    out += ',';
    out += to_string(r.pipeline);
    out += ',';
    out += std::to_string(r.seed);
    out += ',';
    for (std::size_t i = 0; i < r.event_angles_deg.size(); ++i) {
      if (i) out += '|';
      out += detail::fmt_g17(r.event_angles_deg[i]);
    }
    out += ',';
    out += r.clean_file + ',' + std::to_string(r.clean_bytes) + ',';
    out += r.corrupt_file + ',' + std::to_string(r.corrupt_bytes) + ',';
    out += detail::fmt_g17(r.ssim) + ',' + detail::fmt_g17(r.nrmse) + '\n';
  }
  return out;
}

inline DatasetManifest manifest_from_text(const std::string &text) {
  DatasetManifest m;
  std::istringstream in(text);
  std::string line;
  long declared = -1;

  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(": ");
    if (colon == std::string::npos)
      throw std::runtime_error("manifest: malformed header line: " + line);
    const std::string key = line.substr(0, colon);
    const std::string value = line.substr(colon + 2);
    if (key == "format_version") {
      if (value != "1")
        throw std::runtime_error("manifest: unsupported format version " +
                                 value);
      m.format_version = value;
    } else if (key == "complete") {
      m.complete = (value == "true");
    } else if (key.rfind("config.", 0) == 0) {
      detail::set_config_key(m.config, key.substr(7), value);
    } else if (key == "records") {
      declared = std::stol(value);
      break;
    } else {
      throw std::runtime_error("manifest: unknown header key " + key);
    }
  }
  if (declared < 0) throw std::runtime_error("manifest: missing record count");

  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      const auto c = line.find(',', pos);
      f.push_back(line.substr(pos, c == std::string::npos ? line.size() - pos
                                                          : c - pos));
      if (c == std::string::npos) break;
      pos = c + 1;
    }
    if (f.size() != 10)
      throw std::runtime_error("manifest: record needs 10 fields: " + line);
    SampleRecord r;
    r.sample_id = std::stoi(f[0]);
    if (f[1] == "fse_aware") r.pipeline = Pipeline::fse_aware;
    else if (f[1] == "fse_agnostic") r.pipeline = Pipeline::fse_agnostic;
    else throw std::runtime_error("manifest: bad pipeline tag " + f[1]);
    r.seed = std::stoull(f[2]);
    if (!f[3].empty()) {
      std::size_t p = 0;
      while (true) {
        const auto bar = f[3].find('|', p);
        r.event_angles_deg.push_back(std::stod(f[3].substr(
            p, bar == std::string::npos ? f[3].size() - p : bar - p)));
        if (bar == std::string::npos) break;
        p = bar + 1;
      }
    }
    r.clean_file = f[4];
    r.clean_bytes = std::stoull(f[5]);
    r.corrupt_file = f[6];
    r.corrupt_bytes = std::stoull(f[7]);
    r.ssim = std::stod(f[8]);
    r.nrmse = std::stod(f[9]);
    m.records.push_back(std::move(r));
  }
  if (long(m.records.size()) != declared)
    throw std::runtime_error("manifest: record count mismatch");
  return m;
}

inline void write_manifest(const DatasetManifest &m,
                           const std::filesystem::path &dir) {
  const std::filesystem::path path = dir / kManifestName;
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("manifest: cannot open " + tmp.string());
    const std::string text = manifest_to_text(m);
    out.write(text.data(), std::streamsize(text.size()));
    if (!out)
      throw std::runtime_error("manifest: write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline DatasetManifest load_manifest(const std::filesystem::path &dir) {
  std::ifstream in(dir / kManifestName, std::ios::binary);
  if (!in)
    throw std::runtime_error("manifest: cannot open " +
                             (dir / kManifestName).string());
  std::stringstream ss;
  ss << in.rdbuf();
  return manifest_from_text(ss.str());
}

/// Checks that every referenced file exists with the declared byte size.
inline void verify_manifest(const DatasetManifest &m,
                            const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  auto check = [&](const std::string &name, std::uint64_t bytes) {
    const fs::path p = dir / name;
    if (!fs::exists(p))
      throw std::runtime_error("manifest: missing file " + name);
    if (fs::file_size(p) != bytes)
      throw std::runtime_error("manifest: size mismatch for " + name);
  };
  for (const SampleRecord &r : m.records) {
    check(r.clean_file, r.clean_bytes);
    check(r.corrupt_file, r.corrupt_bytes);
  }
}

namespace detail {

inline ParameterMaps load_maps_prefix(const std::string &prefix) {
  ParameterMaps maps{load_image(prefix + "_pd.fsi"),
                     load_image(prefix + "_t2.fsi"), std::nullopt};
  const std::filesystem::path t1_path = prefix + "_t1.fsi";
  if (std::filesystem::exists(t1_path)) maps.t1 = load_image(t1_path);
  maps.validate();
  return maps;
}

// Noise streams are separated per pipeline so the two corruptions of one
// sample never share draws with each other or with the trajectory.
inline constexpr std::uint64_t kNoiseStreamAware = 0x6177617265ULL;
inline constexpr std::uint64_t kNoiseStreamAgnostic = 0x61676e6fULL;

inline SampleRecord export_pair(const SimulationOutput &sim, int id,
                                std::uint64_t seed,
                                const std::filesystem::path &out_dir,
                                const std::string &clean_name,
                                bool write_clean) {
  namespace fs = std::filesystem;
  SampleRecord rec;
  rec.sample_id = id;
  rec.pipeline = sim.pipeline;
  rec.seed = seed;
  for (const RigidTransform &t : sim.trajectory.events())
    rec.event_angles_deg.push_back(t.rotation_deg);

  if (write_clean)
    export_image_atomic(magnitude(sim.clean), out_dir / clean_name);
  const std::string corrupt_name =
      sample_file(id, to_string(sim.pipeline));
  export_image_atomic(magnitude(sim.corrupt), out_dir / corrupt_name);

  rec.clean_file = clean_name;
  rec.corrupt_file = corrupt_name;
  rec.clean_bytes = fs::file_size(out_dir / clean_name);
  rec.corrupt_bytes = fs::file_size(out_dir / corrupt_name);

  // metrics from the stored files so they can be re-verified byte-exactly
  const RealImage clean_stored = load_image(out_dir / clean_name);
  const RealImage corrupt_stored = load_image(out_dir / corrupt_name);
  rec.ssim = ssim(clean_stored, corrupt_stored);
  rec.nrmse = nrmse(clean_stored, corrupt_stored);
  return rec;
}

} // namespace detail

/// Batch generation: n_samples phantoms, one motion trajectory each
/// (seed = base_seed + sample id), clean/corrupt magnitude pairs written
/// atomically, manifest written last. On an I/O failure the records of
/// completed samples are preserved in a partial manifest before the
/// error propagates.
inline DatasetManifest generate_dataset(const SimConfig &cfg,
                                        const std::filesystem::path &out_dir) {
  cfg.validate();
  std::filesystem::create_directories(out_dir);

  const AcquisitionSchedule sched = build_schedule(cfg.ny, cfg.etl, cfg.esp_ms);

  ParameterMaps file_maps;
  if (cfg.phantom == PhantomSource::file) {
    file_maps = detail::load_maps_prefix(cfg.phantom_file);
    if (file_maps.ny() != cfg.ny || file_maps.nx() != cfg.nx)
      throw std::invalid_argument(
          "generate_dataset: phantom file shape does not match config");
  }

  DatasetManifest manifest;
  manifest.config = cfg;

  try {
    for (int i = 0; i < cfg.n_samples; ++i) {
      const std::uint64_t seed = cfg.base_seed + std::uint64_t(i);
      const ParameterMaps maps = (cfg.phantom == PhantomSource::procedural)
                                     ? generate_phantom(cfg.ny, cfg.nx, seed)
                                     : file_maps;
      const MotionTrajectory traj =
          sample_trajectory(sched.n_tr(), cfg.n_events, cfg.sigma_deg, seed);
      const std::string clean_name = detail::sample_file(i, "clean");

      if (cfg.pipeline == PipelineMode::fse_aware ||
          cfg.pipeline == PipelineMode::both) {
        const SimulationOutput aware = simulate_fse_aware(
            maps, sched, traj, cfg.sigma_noise,
            derive_seed(seed, detail::kNoiseStreamAware));
        manifest.records.push_back(detail::export_pair(
            aware, i, seed, out_dir, clean_name, /*write_clean=*/true));
        if (cfg.pipeline == PipelineMode::both) {
          const SimulationOutput agnostic = simulate_fse_agnostic(
              aware.clean, traj.events(), cfg.n_events, cfg.sigma_noise,
              derive_seed(seed, detail::kNoiseStreamAgnostic));
          manifest.records.push_back(detail::export_pair(
              agnostic, i, seed, out_dir, clean_name, /*write_clean=*/false));
        }
      } else {
        const ComplexImage clean = simulate_gt(maps, sched);
        const SimulationOutput agnostic = simulate_fse_agnostic(
            clean, traj.events(), cfg.n_events, cfg.sigma_noise,
            derive_seed(seed, detail::kNoiseStreamAgnostic));
        manifest.records.push_back(detail::export_pair(
            agnostic, i, seed, out_dir, clean_name, /*write_clean=*/true));
      }
    }
  } catch (...) {
    manifest.complete = false;
    try {
      write_manifest(manifest, out_dir);
    } catch (...) {
      // the original error matters more
    }
    throw;
  }

  write_manifest(manifest, out_dir);
  return manifest;
}

} // namespace fsesim

#endif // FSESIM_DATASET_HPP
