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

#ifndef FSESIM_CONFIG_HPP
#define FSESIM_CONFIG_HPP

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "fsesim/motion.hpp"
#include "fsesim/signal.hpp"

namespace fsesim {

enum class PipelineMode { fse_aware, fse_agnostic, both };
enum class PhantomSource { procedural, file };

inline const char *to_string(PipelineMode m) {
  switch (m) {
    case PipelineMode::fse_aware: return "fse_aware";
    case PipelineMode::fse_agnostic: return "fse_agnostic";
    default: return "both";
  }
}
inline const char *to_string(PhantomSource s) {
  return s == PhantomSource::procedural ? "procedural" : "file";
}

/// Simulation run configuration. Defaults follow a typical clinical
/// 2D FSE protocol: 288 phase encodes x 320 readout, ETL 16, 12 ms echo
/// spacing (18 TRs at Nyquist), nine motion events at sigma = 2 degrees.
struct SimConfig {
  int ny = 288;
  int nx = 320;
  int etl = 16;
  double esp_ms = 12.0;
  int n_events = 9;
  double sigma_deg = 2.0;
  double sigma_noise = 0.0;
  int n_samples = 1;
  std::uint64_t base_seed = 0;
  PipelineMode pipeline = PipelineMode::fse_aware;
  PhantomSource phantom = PhantomSource::procedural;
  std::string phantom_file; // path prefix for <prefix>_pd/_t2[/_t1].fsi

  int n_tr() const { return ny / etl; }

  void validate() const {
    if (ny < 32 || nx < 32)
      throw std::invalid_argument("config: matrix must be at least 32x32");
    if (etl < 1 || etl > kMaxEtl)
      throw std::invalid_argument("config: etl out of range");
    if (ny % etl != 0)
      throw std::invalid_argument("config: etl must divide ny");
    if (n_events < 1 || n_tr() % n_events != 0)
      throw std::invalid_argument("config: n_events must divide ny/etl");
    if (!(esp_ms > 0.0))
      throw std::invalid_argument("config: esp_ms must be > 0");
    if (!(sigma_deg >= 0.0) || !(sigma_noise >= 0.0))
      throw std::invalid_argument("config: sigmas must be >= 0");
    if (n_samples < 1)
      throw std::invalid_argument("config: n_samples must be >= 1");
    if (phantom == PhantomSource::file && phantom_file.empty())
      throw std::invalid_argument("config: phantom_file required");
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline int parse_int(std::string_view v, const std::string &key) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw std::invalid_argument("config: bad integer for " + key);
  return out;
}

inline std::uint64_t parse_u64(std::string_view v, const std::string &key) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw std::invalid_argument("config: bad unsigned integer for " + key);
  return out;
}

inline double parse_double(std::string_view v, const std::string &key) {
  try {
    std::size_t used = 0;
    const double out = std::stod(std::string(v), &used);
    if (used != v.size()) throw std::invalid_argument("");
    return out;
  } catch (...) {
    throw std::invalid_argument("config: bad number for " + key);
  }
}

inline PipelineMode parse_pipeline(std::string_view v) {
  if (v == "fse_aware") return PipelineMode::fse_aware;
  if (v == "fse_agnostic") return PipelineMode::fse_agnostic;
  if (v == "both") return PipelineMode::both;
  throw std::invalid_argument(
      "config: pipeline must be fse_aware, fse_agnostic or both");
}

inline PhantomSource parse_phantom_source(std::string_view v) {
  if (v == "procedural") return PhantomSource::procedural;
  if (v == "file") return PhantomSource::file;
  throw std::invalid_argument("config: phantom must be procedural or file");
}

inline void set_config_key(SimConfig &cfg, const std::string &key,
                           std::string_view value) {
  if (key == "ny") cfg.ny = parse_int(value, key);
  else if (key == "nx") cfg.nx = parse_int(value, key);
  else if (key == "etl") cfg.etl = parse_int(value, key);
  else if (key == "esp_ms") cfg.esp_ms = parse_double(value, key);
  else if (key == "n_events") cfg.n_events = parse_int(value, key);
  else if (key == "sigma_deg") cfg.sigma_deg = parse_double(value, key);
  else if (key == "sigma_noise") cfg.sigma_noise = parse_double(value, key);
  else if (key == "n_samples") cfg.n_samples = parse_int(value, key);
  else if (key == "base_seed") cfg.base_seed = parse_u64(value, key);
  else if (key == "pipeline") cfg.pipeline = parse_pipeline(value);
  else if (key == "phantom") cfg.phantom = parse_phantom_source(value);
  else if (key == "phantom_file") cfg.phantom_file = std::string(value);
  else
    throw std::invalid_argument("config: unknown key '" + key + "'");
}

} // namespace detail

/// Parses "key = value" lines; '#' starts a comment, blank lines are
/// skipped, unknown and repeated keys are errors.
inline SimConfig parse_config_text(std::string_view text) {
  SimConfig cfg;
  std::vector<std::string> seen;
  std::size_t pos = 0;
  int lineno = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw std::invalid_argument("config: missing '=' on line " +
                                  std::to_string(lineno));
    const std::string key{detail::trim(line.substr(0, eq))};
    const std::string_view value = detail::trim(line.substr(eq + 1));
    for (const std::string &k : seen)
      if (k == key)
        throw std::invalid_argument("config: duplicate key '" + key + "'");
    seen.push_back(key);
    detail::set_config_key(cfg, key, value);
  }
  return cfg;
}

inline SimConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

inline std::string config_to_text(const SimConfig &cfg) {
  char buf[512];
  std::string out;
  auto kv = [&](const char *k, const std::string &v) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  };
  kv("ny", std::to_string(cfg.ny));
  kv("nx", std::to_string(cfg.nx));
  kv("etl", std::to_string(cfg.etl));
  std::snprintf(buf, sizeof buf, "%.17g", cfg.esp_ms);
  kv("esp_ms", buf);
  kv("n_events", std::to_string(cfg.n_events));
  std::snprintf(buf, sizeof buf, "%.17g", cfg.sigma_deg);
  kv("sigma_deg", buf);
  std::snprintf(buf, sizeof buf, "%.17g", cfg.sigma_noise);
  kv("sigma_noise", buf);
  kv("n_samples", std::to_string(cfg.n_samples));
  kv("base_seed", std::to_string(cfg.base_seed));
  kv("pipeline", to_string(cfg.pipeline));
  kv("phantom", to_string(cfg.phantom));
  if (!cfg.phantom_file.empty()) kv("phantom_file", cfg.phantom_file);
  return out;
}

} // namespace fsesim

#endif // FSESIM_CONFIG_HPP
