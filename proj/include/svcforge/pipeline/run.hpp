// Copyright 2026 SVC-Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Batch emission of training triples. Every file's randomness derives from
// hash(master_seed, relative path), so results are independent of worker
// count and of which other files are present. The manifest is JSON Lines,
// one record (or error entry) per input, ordered by source path.

#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "svcforge/audio/wav_io.hpp"
#include "svcforge/audio/waveform.hpp"
#include "svcforge/core/rng.hpp"
#include "svcforge/f0/contour.hpp"
#include "svcforge/f0/perturb.hpp"
#include "svcforge/f0/yin.hpp"
#include "svcforge/fx/chain.hpp"
#include "svcforge/pipeline/config.hpp"

namespace svcforge::pipeline {

struct SampleRecord {
  std::string source_path;
  std::string augmented_path;
  std::string target_path;
  std::string f0_clean_path;
  std::string f0_pert_path;
  f0::SegmentPlan segment_plan;
  fx::EffectTrace effect_trace;
  std::uint64_t per_file_seed = 0;
};

inline nlohmann::json record_to_json(const SampleRecord& r) {
  return nlohmann::json{{"source_path", r.source_path},
                        {"augmented_path", r.augmented_path},
                        {"target_path", r.target_path},
                        {"f0_clean_path", r.f0_clean_path},
                        {"f0_pert_path", r.f0_pert_path},
                        {"segment_plan", f0::plan_to_json(r.segment_plan)},
                        {"effect_trace", fx::trace_to_json(r.effect_trace)},
                        {"per_file_seed", r.per_file_seed}};
}

inline SampleRecord record_from_json(const nlohmann::json& j) {
  SampleRecord r;
  r.source_path = j.at("source_path").get<std::string>();
  r.augmented_path = j.at("augmented_path").get<std::string>();
  r.target_path = j.at("target_path").get<std::string>();
  r.f0_clean_path = j.at("f0_clean_path").get<std::string>();
  r.f0_pert_path = j.at("f0_pert_path").get<std::string>();
  r.segment_plan = f0::plan_from_json(j.at("segment_plan"));
  r.effect_trace = fx::trace_from_json(j.at("effect_trace"));
  r.per_file_seed = j.at("per_file_seed").get<std::uint64_t>();
  return r;
}

// Path-keyed seed: adding or removing other files never changes this file's
// augmentation, and worker scheduling cannot influence any draw.
inline std::uint64_t per_file_seed(std::uint64_t master_seed, const std::string& relative_path) {
  return hash_combine(master_seed, fnv1a64(relative_path));
}

struct AugmentResult {
  Waveform augmented;
  Waveform target;
  f0::F0Contour f0_clean;
  f0::F0Contour f0_pert;
  f0::SegmentPlan plan;
  fx::EffectTrace trace;
};

// One training-sample preparation step, minus the trainer: extract F0 from
// the CLEAN input, perturb it, wet-process the audio, keep the clean target.
inline AugmentResult augment_sample(const Waveform& x, const PipelineConfig& cfg,
                                    std::uint64_t file_seed) {
  if (cfg.require_sample_rate && x.sample_rate != *cfg.require_sample_rate)
    throw std::runtime_error("sample-rate policy violation: file is " +
                             std::to_string(x.sample_rate) + " Hz, config requires " +
                             std::to_string(*cfg.require_sample_rate) + " Hz");
  FrameSpec spec = cfg.frame;
  spec.sample_rate = x.sample_rate;  // analyze at the file's native rate

  AugmentResult r;
  r.f0_clean = f0::extract_f0(x, spec, cfg.f0_range);
  const std::uint64_t seed_a = hash_combine(file_seed, 1);
  const std::uint64_t seed_b = hash_combine(file_seed, 2);
  auto [pert, plan] = f0::perturb_f0(r.f0_clean, cfg.perturbation, seed_a);
  r.f0_pert = std::move(pert);
  r.plan = std::move(plan);
  auto [aug, trace] = fx::apply_chain(x, cfg.effects, seed_b);
  r.augmented = std::move(aug);
  r.trace = trace;
  r.target = x;
  return r;
}

struct InputFile {
  std::filesystem::path absolute;
  std::string relative;  // generic separators; hashed for the per-file seed
};

inline std::vector<InputFile> collect_inputs(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    throw std::runtime_error("input directory does not exist: " + dir.string());
  std::vector<InputFile> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext != ".wav") continue;
    files.push_back(
        {entry.path(), std::filesystem::relative(entry.path(), dir).generic_string()});
  }
  std::sort(files.begin(), files.end(),
            [](const InputFile& a, const InputFile& b) { return a.relative < b.relative; });
  return files;
}

struct BatchResult {
  int succeeded = 0;
  int failed = 0;
  std::filesystem::path manifest_path;
};

inline BatchResult run_batch(const std::vector<InputFile>& inputs, const PipelineConfig& cfg,
                             int jobs = 1) {
  {
    const auto errs = validate(cfg);
    if (!errs.empty()) {
      std::string msg = "invalid config:";
      for (const auto& e : errs) msg += "\n  - " + e;
      throw std::invalid_argument(msg);
    }
  }
  if (inputs.empty()) throw std::runtime_error("empty input set: no .wav files to process");

  namespace fs = std::filesystem;
  const fs::path out_root(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(out_root, ec);
  if (!fs::is_directory(out_root))
    throw std::runtime_error("cannot create output directory: " + out_root.string());

  // Canonical processing order; seeds depend on paths, never on position.
  std::vector<InputFile> sorted = inputs;
  std::sort(sorted.begin(), sorted.end(),
            [](const InputFile& a, const InputFile& b) { return a.relative < b.relative; });

  struct Planned {
    InputFile in;
    std::string source_rel;  // relative to the manifest directory
    std::string aug_rel, target_rel, f0_rel, pert_rel;
  };
  std::vector<Planned> planned;
  planned.reserve(sorted.size());
  std::set<fs::path> out_dirs;
  for (const auto& in : sorted) {
    fs::path rel(in.relative);
    const fs::path stem = rel.parent_path() / rel.stem();
    Planned p;
    p.in = in;
    const fs::path src = fs::weakly_canonical(in.absolute, ec);
    const fs::path root = fs::weakly_canonical(out_root, ec);
    const fs::path prox = src.lexically_proximate(root);
    p.source_rel = prox.empty() ? src.generic_string() : prox.generic_string();
    p.aug_rel = (stem.generic_string() + ".aug.wav");
    p.target_rel = (stem.generic_string() + ".target.wav");
    p.f0_rel = (stem.generic_string() + ".f0.json");
    p.pert_rel = (stem.generic_string() + ".f0_pert.json");
    out_dirs.insert((out_root / rel).parent_path());
    planned.push_back(std::move(p));
  }
  for (const auto& d : out_dirs) fs::create_directories(d);

  save_config(cfg, (out_root / "config.json").string());

  std::vector<std::string> lines(planned.size());
  std::vector<std::uint8_t> ok(planned.size(), 0);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= planned.size()) return;
      const Planned& p = planned[i];
      try {
        const Waveform x = load_waveform(p.in.absolute.string());
        const std::uint64_t seed = per_file_seed(cfg.master_seed, p.in.relative);
        AugmentResult r = augment_sample(x, cfg, seed);
        save_waveform(r.augmented, (out_root / p.aug_rel).string(), cfg.bit_depth);
        save_waveform(r.target, (out_root / p.target_rel).string(), cfg.bit_depth);
        f0::save_contour(r.f0_clean, (out_root / p.f0_rel).string());
        f0::save_contour(r.f0_pert, (out_root / p.pert_rel).string());
        SampleRecord rec{p.source_rel, p.aug_rel,        p.target_rel, p.f0_rel,
                         p.pert_rel,   std::move(r.plan), r.trace,      seed};
        lines[i] = record_to_json(rec).dump();
        ok[i] = 1;
      } catch (const std::exception& e) {
        lines[i] = nlohmann::json{{"error", e.what()}, {"source", p.source_rel}}.dump();
        ok[i] = 0;
      }
    }
  };

  const int n_workers = std::max(1, jobs);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  BatchResult result;
  result.manifest_path = out_root / "manifest.jsonl";
  std::ofstream manifest(result.manifest_path);
  if (!manifest)
    throw std::runtime_error("cannot write manifest: " + result.manifest_path.string());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    manifest << lines[i] << '\n';
    if (ok[i])
      ++result.succeeded;
    else
      ++result.failed;
  }
  return result;
}

}  // namespace svcforge::pipeline
