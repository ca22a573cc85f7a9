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

// Wet-sound simulation: harmony, echo and reverb triggered by independent
// seeded coin flips and applied in that fixed order. Mix semantics are
// out = (1-mix)*dry + mix*wet, so mix = 0 is an exact identity. The trace
// records every decision and drawn parameter needed to replay the chain.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "svcforge/audio/waveform.hpp"
#include "svcforge/core/range.hpp"
#include "svcforge/core/rng.hpp"
#include "svcforge/fx/echo.hpp"
#include "svcforge/fx/pitch_shift.hpp"
#include "svcforge/fx/reverb.hpp"

namespace svcforge::fx {

struct EffectChainConfig {
  double p_h = 0.3;
  double p_e = 0.4;
  double p_r = 0.4;
  double mix_h = 0.4;
  double mix_e = 0.35;
  double mix_r = 0.5;
  // Musically plausible parallel-harmony offsets.
  std::vector<double> harmony_intervals{3.0, 4.0, 5.0, 7.0, -5.0};
  Range echo_delay{0.08, 0.3};     // seconds
  Range echo_feedback{0.3, 0.6};
  Range reverb_rt60{0.3, 1.2};     // seconds
};

inline std::vector<std::string> validate(const EffectChainConfig& c) {
  std::vector<std::string> errs;
  auto prob = [&](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) errs.push_back(std::string(name) + " must be in [0, 1]");
  };
  prob(c.p_h, "p_h");
  prob(c.p_e, "p_e");
  prob(c.p_r, "p_r");
  prob(c.mix_h, "mix_h");
  prob(c.mix_e, "mix_e");
  prob(c.mix_r, "mix_r");
  if (c.harmony_intervals.empty()) errs.push_back("harmony_intervals must not be empty");
  for (double st : c.harmony_intervals)
    if (st < -12.0 || st > 12.0)
      errs.push_back("harmony intervals must lie within +/-12 semitones");
  if (!c.echo_delay.valid() || c.echo_delay.lo <= 0.0)
    errs.push_back("echo_delay must be a positive range in seconds");
  if (!c.echo_feedback.valid() || c.echo_feedback.lo < 0.0 || c.echo_feedback.hi >= 1.0)
    errs.push_back("echo_feedback must be a range within [0, 1)");
  if (!c.reverb_rt60.valid() || c.reverb_rt60.lo <= 0.0)
    errs.push_back("reverb_rt60 must be a positive range in seconds");
  return errs;
}

struct EffectTrace {
  bool harmony_applied = false;
  double harmony_interval = 0.0;  // semitones
  bool echo_applied = false;
  double echo_delay_s = 0.0;
  double echo_feedback = 0.0;
  bool reverb_applied = false;
  double reverb_rt60_s = 0.0;
  std::uint64_t seed = 0;

  bool any_applied() const { return harmony_applied || echo_applied || reverb_applied; }
};

inline nlohmann::json trace_to_json(const EffectTrace& t) {
  return nlohmann::json{{"harmony_applied", t.harmony_applied},
                        {"harmony_interval", t.harmony_interval},
                        {"echo_applied", t.echo_applied},
                        {"echo_delay_s", t.echo_delay_s},
                        {"echo_feedback", t.echo_feedback},
                        {"reverb_applied", t.reverb_applied},
                        {"reverb_rt60_s", t.reverb_rt60_s},
                        {"seed", t.seed}};
}

inline EffectTrace trace_from_json(const nlohmann::json& j) {
  EffectTrace t;
  t.harmony_applied = j.at("harmony_applied").get<bool>();
  t.harmony_interval = j.at("harmony_interval").get<double>();
  t.echo_applied = j.at("echo_applied").get<bool>();
  t.echo_delay_s = j.at("echo_delay_s").get<double>();
  t.echo_feedback = j.at("echo_feedback").get<double>();
  t.reverb_applied = j.at("reverb_applied").get<bool>();
  t.reverb_rt60_s = j.at("reverb_rt60_s").get<double>();
  t.seed = j.at("seed").get<std::uint64_t>();
  return t;
}

// Pitch-shifted copy blended over the dry voice.
inline Waveform apply_harmony(const Waveform& w, double interval_semitones, double mix) {
  if (interval_semitones < -12.0 || interval_semitones > 12.0)
    throw std::invalid_argument("apply_harmony: interval must lie within +/-12 semitones");
  const Waveform shifted = pitch_shift(w, interval_semitones);
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    out.samples[i] = static_cast<float>((1.0 - mix) * static_cast<double>(w.samples[i]) +
                                        mix * static_cast<double>(shifted.samples[i]));
  return out;
}

// Draw the activation flips and effect parameters without touching audio.
// The three flips come from separate substreams, so activations are
// pairwise independent across seeds.
inline EffectTrace draw_chain_trace(const EffectChainConfig& cfg, std::uint64_t seed) {
  EffectTrace t;
  t.seed = seed;
  t.harmony_applied = Rng::substream(seed, 31).bernoulli(cfg.p_h);
  t.echo_applied = Rng::substream(seed, 32).bernoulli(cfg.p_e);
  t.reverb_applied = Rng::substream(seed, 33).bernoulli(cfg.p_r);
  if (t.harmony_applied) {
    Rng rng = Rng::substream(seed, 34);
    const auto idx = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(cfg.harmony_intervals.size()) - 1));
    t.harmony_interval = cfg.harmony_intervals[idx];
  }
  if (t.echo_applied) {
    Rng rng = Rng::substream(seed, 35);
    t.echo_delay_s = rng.uniform(cfg.echo_delay.lo, cfg.echo_delay.hi);
    t.echo_feedback = rng.uniform(cfg.echo_feedback.lo, cfg.echo_feedback.hi);
  }
  if (t.reverb_applied) {
    Rng rng = Rng::substream(seed, 36);
    t.reverb_rt60_s = rng.uniform(cfg.reverb_rt60.lo, cfg.reverb_rt60.hi);
  }
  return t;
}

// Replay a trace over audio. When nothing fired the input is returned
// bit-identical; otherwise the result passes through peak_guard.
inline Waveform apply_trace(const Waveform& w, const EffectChainConfig& cfg,
                            const EffectTrace& trace) {
  if (!trace.any_applied()) return w;
  Waveform out = w;
  if (trace.harmony_applied) out = apply_harmony(out, trace.harmony_interval, cfg.mix_h);
  if (trace.echo_applied)
    out = apply_echo(out, trace.echo_delay_s, trace.echo_feedback, cfg.mix_e);
  if (trace.reverb_applied)
    out = apply_reverb(out, trace.reverb_rt60_s, cfg.mix_r,
                       hash_combine(trace.seed, 37));
  return peak_guard(out);
}

inline std::pair<Waveform, EffectTrace> apply_chain(const Waveform& w,
                                                    const EffectChainConfig& cfg,
                                                    std::uint64_t seed) {
  const EffectTrace trace = draw_chain_trace(cfg, seed);
  return {apply_trace(w, cfg, trace), trace};
}

}  // namespace svcforge::fx
