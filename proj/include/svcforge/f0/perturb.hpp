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

// Random F0 contour perturbation. A seeded plan places 2-4 non-overlapping
// segments over voiced regions and assigns each one of three operators:
//   jitter - vibrato-like sinusoidal modulation in cents
//   glide  - linear ramp in log-frequency toward a drawn offset
//   jump   - constant semitone shift with step discontinuities at the edges
// or none. Unvoiced frames (value 0) are never modified, and frames outside
// the planned segments are returned bit-identical.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "svcforge/core/range.hpp"
#include "svcforge/core/rng.hpp"
#include "svcforge/f0/contour.hpp"

namespace svcforge::f0 {

struct PerturbationConfig {
  double p_jit = 0.15;
  double p_gld = 0.15;
  double p_jmp = 0.2;
  int seg_count_min = 2;
  int seg_count_max = 4;
  double seg_dur_min = 0.2;  // seconds
  double seg_dur_max = 1.0;
  double jitter_depth_cents = 50.0;
  Range jitter_rate_hz{4.0, 7.0};
  double glide_extent_semitones = 2.0;
  double jump_extent_semitones = 3.0;
  Range f0_clamp{40.0, 1300.0};
};

// Validation gathers every violation so callers can report them all at once.
inline std::vector<std::string> validate(const PerturbationConfig& c) {
  std::vector<std::string> errs;
  auto prob = [&](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) errs.push_back(std::string(name) + " must be in [0, 1]");
  };
  prob(c.p_jit, "p_jit");
  prob(c.p_gld, "p_gld");
  prob(c.p_jmp, "p_jmp");
  if (!(c.p_jit + c.p_gld + c.p_jmp < 1.0))
    errs.push_back("p_jit + p_gld + p_jmp must be strictly below 1");
  if (c.seg_count_min < 0 || c.seg_count_max < c.seg_count_min)
    errs.push_back("segment count bounds must satisfy 0 <= seg_count_min <= seg_count_max");
  if (!(c.seg_dur_min > 0.0) || c.seg_dur_max < c.seg_dur_min)
    errs.push_back("segment durations must satisfy 0 < seg_dur_min <= seg_dur_max");
  if (c.jitter_depth_cents < 0.0) errs.push_back("jitter_depth_cents must be non-negative");
  if (!c.jitter_rate_hz.valid() || c.jitter_rate_hz.lo < 0.0)
    errs.push_back("jitter_rate_hz must be a non-negative range");
  if (c.glide_extent_semitones < 0.0) errs.push_back("glide_extent_semitones must be non-negative");
  if (c.jump_extent_semitones < 1.0)
    errs.push_back("jump_extent_semitones must be at least 1 (jump magnitude is drawn from [1, extent])");
  if (!c.f0_clamp.valid() || c.f0_clamp.lo <= 0.0)
    errs.push_back("f0_clamp must be a positive range");
  return errs;
}

enum class SegmentKind { none, jitter, glide, jump };

inline std::string to_string(SegmentKind k) {
  switch (k) {
    case SegmentKind::none: return "none";
    case SegmentKind::jitter: return "jitter";
    case SegmentKind::glide: return "glide";
    case SegmentKind::jump: return "jump";
  }
  return "none";
}

inline SegmentKind segment_kind_from_string(const std::string& s) {
  if (s == "none") return SegmentKind::none;
  if (s == "jitter") return SegmentKind::jitter;
  if (s == "glide") return SegmentKind::glide;
  if (s == "jump") return SegmentKind::jump;
  throw std::invalid_argument("unknown segment kind '" + s + "'");
}

// Half-open frame interval [start_frame, end_frame).
struct Segment {
  int start_frame = 0;
  int end_frame = 0;
  SegmentKind kind = SegmentKind::none;

  int length() const { return end_frame - start_frame; }
};

struct SegmentPlan {
  std::vector<Segment> segments;
  std::uint64_t rng_seed = 0;
};

inline nlohmann::json plan_to_json(const SegmentPlan& p) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : p.segments)
    segs.push_back({{"start_frame", s.start_frame},
                    {"end_frame", s.end_frame},
                    {"kind", to_string(s.kind)}});
  return nlohmann::json{{"segments", segs}, {"rng_seed", p.rng_seed}};
}

inline SegmentPlan plan_from_json(const nlohmann::json& j) {
  SegmentPlan p;
  p.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  for (const auto& s : j.at("segments")) {
    p.segments.push_back({s.at("start_frame").get<int>(), s.at("end_frame").get<int>(),
                          segment_kind_from_string(s.at("kind").get<std::string>())});
  }
  return p;
}

namespace detail {

struct VoicedRun {
  int start;
  int end;  // exclusive
  int length() const { return end - start; }
};

inline std::vector<VoicedRun> voiced_runs(const F0Contour& c) {
  std::vector<VoicedRun> runs;
  const int n = static_cast<int>(c.size());
  int i = 0;
  while (i < n) {
    if (c.values_hz[static_cast<std::size_t>(i)] > 0.0) {
      int j = i;
      while (j < n && c.values_hz[static_cast<std::size_t>(j)] > 0.0) ++j;
      runs.push_back({i, j});
      i = j;
    } else {
      ++i;
    }
  }
  return runs;
}

inline bool overlaps(const std::vector<Segment>& placed, int start, int end) {
  for (const auto& s : placed)
    if (start < s.end_frame && s.start_frame < end) return true;
  return false;
}

}  // namespace detail

// Draw a seeded segment plan. Segment count is uniform in
// [seg_count_min, seg_count_max]; segments are placed rejection-style inside
// voiced runs (up to 50 attempts each, accepting fewer when placement keeps
// failing); each placed segment gets a kind drawn categorically with
// P(jitter) = p_jit, P(glide) = p_gld, P(jump) = p_jmp, P(none) = 1 - sum.
inline SegmentPlan plan_segments(const F0Contour& contour, const PerturbationConfig& cfg,
                                 std::uint64_t seed) {
  SegmentPlan plan;
  plan.rng_seed = seed;

  const double frames_per_s = contour.frame_spec.frame_rate();
  const int dur_min = std::max(1, static_cast<int>(std::lround(cfg.seg_dur_min * frames_per_s)));
  const int dur_max = std::max(dur_min, static_cast<int>(std::lround(cfg.seg_dur_max * frames_per_s)));

  std::vector<detail::VoicedRun> feasible;
  for (const auto& r : detail::voiced_runs(contour))
    if (r.length() >= dur_min) feasible.push_back(r);
  if (feasible.empty()) return plan;  // entirely unvoiced: empty plan, not an error

  Rng count_rng = Rng::substream(seed, 1);
  Rng place_rng = Rng::substream(seed, 2);
  Rng kind_rng = Rng::substream(seed, 3);

  const int target = static_cast<int>(count_rng.uniform_int(cfg.seg_count_min, cfg.seg_count_max));
  constexpr int kMaxAttempts = 50;

  for (int n = 0; n < target; ++n) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      const auto& run =
          feasible[static_cast<std::size_t>(place_rng.uniform_int(0, static_cast<int>(feasible.size()) - 1))];
      const int hi = std::min(dur_max, run.length());
      const int dur = static_cast<int>(place_rng.uniform_int(dur_min, hi));
      const int start = run.start + static_cast<int>(place_rng.uniform_int(0, run.length() - dur));
      if (!detail::overlaps(plan.segments, start, start + dur)) {
        plan.segments.push_back({start, start + dur, SegmentKind::none});
        placed = true;
      }
    }
    if (!placed) break;  // accept fewer segments
  }

  std::sort(plan.segments.begin(), plan.segments.end(),
            [](const Segment& a, const Segment& b) { return a.start_frame < b.start_frame; });

  for (auto& s : plan.segments) {
    const double u = kind_rng.next_unit();
    if (u < cfg.p_jit)
      s.kind = SegmentKind::jitter;
    else if (u < cfg.p_jit + cfg.p_gld)
      s.kind = SegmentKind::glide;
    else if (u < cfg.p_jit + cfg.p_gld + cfg.p_jmp)
      s.kind = SegmentKind::jump;
    else
      s.kind = SegmentKind::none;
  }
  return plan;
}

namespace detail {

inline void clamp_voiced(double& v, Range clamp) {
  v = std::clamp(v, clamp.lo, clamp.hi);
}

}  // namespace detail

// Deterministic-parameter operators. The seeded entry points below draw the
// parameters and delegate here.

// Multiply voiced frames by 2^(depth * sin(2*pi*rate*t + phase) / 1200) with
// t measured from the segment start.
inline F0Contour apply_jitter_params(const F0Contour& contour, const Segment& seg,
                                     double depth_cents, double rate_hz, double phase,
                                     Range f0_clamp) {
  F0Contour out = contour;
  const double dt = 1.0 / contour.frame_spec.frame_rate();
  for (int i = seg.start_frame; i < seg.end_frame; ++i) {
    double& v = out.values_hz[static_cast<std::size_t>(i)];
    if (v <= 0.0) continue;
    const double t = (i - seg.start_frame) * dt;
    v *= std::exp2(depth_cents * std::sin(2.0 * M_PI * rate_hz * t + phase) / 1200.0);
    detail::clamp_voiced(v, f0_clamp);
  }
  return out;
}

// Ramp voiced frames linearly in log-frequency from 0 at the segment start
// to offset_semitones at the final frame.
inline F0Contour apply_glide_offset(const F0Contour& contour, const Segment& seg,
                                    double offset_semitones, Range f0_clamp) {
  F0Contour out = contour;
  const int n = seg.length();
  for (int i = seg.start_frame; i < seg.end_frame; ++i) {
    double& v = out.values_hz[static_cast<std::size_t>(i)];
    if (v <= 0.0) continue;
    const double frac = n > 1 ? static_cast<double>(i - seg.start_frame) / (n - 1) : 1.0;
    v *= std::exp2(offset_semitones * frac / 12.0);
    detail::clamp_voiced(v, f0_clamp);
  }
  return out;
}

// Shift every voiced frame by a constant semitone offset.
inline F0Contour apply_jump_offset(const F0Contour& contour, const Segment& seg,
                                   double offset_semitones, Range f0_clamp) {
  F0Contour out = contour;
  const double factor = std::exp2(offset_semitones / 12.0);
  for (int i = seg.start_frame; i < seg.end_frame; ++i) {
    double& v = out.values_hz[static_cast<std::size_t>(i)];
    if (v <= 0.0) continue;
    v *= factor;
    detail::clamp_voiced(v, f0_clamp);
  }
  return out;
}

inline F0Contour apply_jitter(const F0Contour& contour, const Segment& seg,
                              const PerturbationConfig& cfg, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, 11);
  const double depth = rng.uniform(0.0, cfg.jitter_depth_cents);
  const double rate = rng.uniform(cfg.jitter_rate_hz.lo, cfg.jitter_rate_hz.hi);
  const double phase = rng.uniform(0.0, 2.0 * M_PI);
  return apply_jitter_params(contour, seg, depth, rate, phase, cfg.f0_clamp);
}

inline F0Contour apply_glide(const F0Contour& contour, const Segment& seg,
                             const PerturbationConfig& cfg, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, 12);
  const double offset = rng.uniform(-cfg.glide_extent_semitones, cfg.glide_extent_semitones);
  return apply_glide_offset(contour, seg, offset, cfg.f0_clamp);
}

// Jump magnitude is at least one semitone so the discontinuity stays at an
// audible scale; the sign is a fair coin.
inline F0Contour apply_jump(const F0Contour& contour, const Segment& seg,
                            const PerturbationConfig& cfg, std::uint64_t seed) {
  Rng rng = Rng::substream(seed, 13);
  const double magnitude = rng.uniform(1.0, std::max(1.0, cfg.jump_extent_semitones));
  const double offset = rng.bernoulli(0.5) ? magnitude : -magnitude;
  return apply_jump_offset(contour, seg, offset, cfg.f0_clamp);
}

// Plan segments, then dispatch the drawn operator over each one. Returns the
// perturbed contour together with the plan trace.
inline std::pair<F0Contour, SegmentPlan> perturb_f0(const F0Contour& contour,
                                                    const PerturbationConfig& cfg,
                                                    std::uint64_t seed) {
  SegmentPlan plan = plan_segments(contour, cfg, seed);
  F0Contour out = contour;
  for (std::size_t i = 0; i < plan.segments.size(); ++i) {
    const Segment& seg = plan.segments[i];
    const std::uint64_t seg_seed = hash_combine(hash_combine(seed, 4), i);
    switch (seg.kind) {
      case SegmentKind::none: break;
      case SegmentKind::jitter: out = apply_jitter(out, seg, cfg, seg_seed); break;
      case SegmentKind::glide: out = apply_glide(out, seg, cfg, seg_seed); break;
      case SegmentKind::jump: out = apply_jump(out, seg, cfg, seg_seed); break;
    }
  }
  return {std::move(out), std::move(plan)};
}

}  // namespace svcforge::f0
