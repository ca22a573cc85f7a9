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

// Batch configuration: one JSON document mirroring the struct field names.
// Missing keys keep their defaults so small override files stay small.

#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "svcforge/audio/frame_spec.hpp"
#include "svcforge/audio/wav_io.hpp"
#include "svcforge/core/range.hpp"
#include "svcforge/f0/perturb.hpp"
#include "svcforge/f0/yin.hpp"
#include "svcforge/fx/chain.hpp"

namespace svcforge::pipeline {

struct PipelineConfig {
  f0::PerturbationConfig perturbation;
  fx::EffectChainConfig effects;
  FrameSpec frame;
  Range f0_range = f0::kDefaultF0Range;
  std::uint64_t master_seed = 0;
  std::string output_dir = ".";
  BitDepth bit_depth = BitDepth::float32;
  std::optional<int> require_sample_rate;
};

namespace detail {

inline nlohmann::json range_to_json(const Range& r) {
  return nlohmann::json::array({r.lo, r.hi});
}

inline Range range_from_json(const nlohmann::json& j, const char* key) {
  if (!j.is_array() || j.size() != 2)
    throw std::invalid_argument(std::string("config: ") + key + " must be a [lo, hi] array");
  return Range{j[0].get<double>(), j[1].get<double>()};
}

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline void read_range_if(const nlohmann::json& j, const char* key, Range& out) {
  if (j.contains(key)) out = range_from_json(j.at(key), key);
}

}  // namespace detail

inline nlohmann::json perturbation_to_json(const f0::PerturbationConfig& c) {
  return nlohmann::json{{"p_jit", c.p_jit},
                        {"p_gld", c.p_gld},
                        {"p_jmp", c.p_jmp},
                        {"seg_count_min", c.seg_count_min},
                        {"seg_count_max", c.seg_count_max},
                        {"seg_dur_min", c.seg_dur_min},
                        {"seg_dur_max", c.seg_dur_max},
                        {"jitter_depth_cents", c.jitter_depth_cents},
                        {"jitter_rate_hz", detail::range_to_json(c.jitter_rate_hz)},
                        {"glide_extent_semitones", c.glide_extent_semitones},
                        {"jump_extent_semitones", c.jump_extent_semitones},
                        {"f0_clamp", detail::range_to_json(c.f0_clamp)}};
}

inline f0::PerturbationConfig perturbation_from_json(const nlohmann::json& j) {
  f0::PerturbationConfig c;
  detail::read_if(j, "p_jit", c.p_jit);
  detail::read_if(j, "p_gld", c.p_gld);
  detail::read_if(j, "p_jmp", c.p_jmp);
  detail::read_if(j, "seg_count_min", c.seg_count_min);
  detail::read_if(j, "seg_count_max", c.seg_count_max);
  detail::read_if(j, "seg_dur_min", c.seg_dur_min);
  detail::read_if(j, "seg_dur_max", c.seg_dur_max);
  detail::read_if(j, "jitter_depth_cents", c.jitter_depth_cents);
  detail::read_range_if(j, "jitter_rate_hz", c.jitter_rate_hz);
  detail::read_if(j, "glide_extent_semitones", c.glide_extent_semitones);
  detail::read_if(j, "jump_extent_semitones", c.jump_extent_semitones);
  detail::read_range_if(j, "f0_clamp", c.f0_clamp);
  return c;
}

inline nlohmann::json effects_to_json(const fx::EffectChainConfig& c) {
  return nlohmann::json{{"p_h", c.p_h},
                        {"p_e", c.p_e},
                        {"p_r", c.p_r},
                        {"mix_h", c.mix_h},
                        {"mix_e", c.mix_e},
                        {"mix_r", c.mix_r},
                        {"harmony_intervals", c.harmony_intervals},
                        {"echo_delay", detail::range_to_json(c.echo_delay)},
                        {"echo_feedback", detail::range_to_json(c.echo_feedback)},
                        {"reverb_rt60", detail::range_to_json(c.reverb_rt60)}};
}

inline fx::EffectChainConfig effects_from_json(const nlohmann::json& j) {
  fx::EffectChainConfig c;
  detail::read_if(j, "p_h", c.p_h);
  detail::read_if(j, "p_e", c.p_e);
  detail::read_if(j, "p_r", c.p_r);
  detail::read_if(j, "mix_h", c.mix_h);
  detail::read_if(j, "mix_e", c.mix_e);
  detail::read_if(j, "mix_r", c.mix_r);
  detail::read_if(j, "harmony_intervals", c.harmony_intervals);
  detail::read_range_if(j, "echo_delay", c.echo_delay);
  detail::read_range_if(j, "echo_feedback", c.echo_feedback);
  detail::read_range_if(j, "reverb_rt60", c.reverb_rt60);
  return c;
}

inline nlohmann::json frame_to_json(const FrameSpec& f) {
  return nlohmann::json{
      {"fft_size", f.fft_size}, {"hop_size", f.hop_size}, {"sample_rate", f.sample_rate}};
}

inline FrameSpec frame_from_json(const nlohmann::json& j) {
  FrameSpec f;
  detail::read_if(j, "fft_size", f.fft_size);
  detail::read_if(j, "hop_size", f.hop_size);
  detail::read_if(j, "sample_rate", f.sample_rate);
  return f;
}

inline nlohmann::json config_to_json(const PipelineConfig& c) {
  nlohmann::json j{{"perturbation", perturbation_to_json(c.perturbation)},
                   {"effects", effects_to_json(c.effects)},
                   {"frame", frame_to_json(c.frame)},
                   {"f0_range", detail::range_to_json(c.f0_range)},
                   {"master_seed", c.master_seed},
                   {"output_dir", c.output_dir},
                   {"bit_depth", to_string(c.bit_depth)}};
  if (c.require_sample_rate)
    j["require_sample_rate"] = *c.require_sample_rate;
  else
    j["require_sample_rate"] = nullptr;
  return j;
}

inline PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  if (j.contains("perturbation")) c.perturbation = perturbation_from_json(j.at("perturbation"));
  if (j.contains("effects")) c.effects = effects_from_json(j.at("effects"));
  if (j.contains("frame")) c.frame = frame_from_json(j.at("frame"));
  detail::read_range_if(j, "f0_range", c.f0_range);
  detail::read_if(j, "master_seed", c.master_seed);
  detail::read_if(j, "output_dir", c.output_dir);
  if (j.contains("bit_depth")) {
    const auto& b = j.at("bit_depth");
    c.bit_depth = b.is_number() ? bit_depth_from_string(std::to_string(b.get<int>()))
                                : bit_depth_from_string(b.get<std::string>());
  }
  if (j.contains("require_sample_rate") && !j.at("require_sample_rate").is_null())
    c.require_sample_rate = j.at("require_sample_rate").get<int>();
  return c;
}

inline PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json j;
  in >> j;
  return config_from_json(j);
}

inline void save_config(const PipelineConfig& c, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config file: " + path);
  out << config_to_json(c).dump(2) << '\n';
}

// Collects every violated constraint across all nested configs at once.
inline std::vector<std::string> validate(const PipelineConfig& c) {
  std::vector<std::string> errs;
  for (const auto& e : f0::validate(c.perturbation)) errs.push_back("perturbation: " + e);
  for (const auto& e : fx::validate(c.effects)) errs.push_back("effects: " + e);
  if (c.frame.fft_size <= 0) errs.push_back("frame: fft_size must be positive");
  if (c.frame.hop_size <= 0) errs.push_back("frame: hop_size must be positive");
  if (c.frame.hop_size > c.frame.fft_size)
    errs.push_back("frame: hop_size must not exceed fft_size");
  if (c.frame.sample_rate <= 0) errs.push_back("frame: sample_rate must be positive");
  if (!c.f0_range.valid() || c.f0_range.lo <= 0.0)
    errs.push_back("f0_range must be a positive [lo, hi] interval");
  if (c.require_sample_rate) {
    if (*c.require_sample_rate <= 0)
      errs.push_back("require_sample_rate must be positive when set");
    else if (c.f0_range.hi >= *c.require_sample_rate / 2.0)
      errs.push_back("f0_range must lie below the required Nyquist frequency");
  }
  if (c.output_dir.empty()) errs.push_back("output_dir must not be empty");
  return errs;
}

}  // namespace svcforge::pipeline
