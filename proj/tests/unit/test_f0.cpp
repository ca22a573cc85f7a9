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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "support/oracle.hpp"
#include "svcforge/f0/contour.hpp"
#include "svcforge/f0/perturb.hpp"
#include "svcforge/f0/yin.hpp"

using namespace svcforge;
using f0::F0Contour;
using f0::PerturbationConfig;
using f0::Segment;
using f0::SegmentKind;

namespace {

Waveform wave(std::vector<float> s, int rate = 44100) {
  Waveform w;
  w.samples = std::move(s);
  w.sample_rate = rate;
  return w;
}

// Synthetic contour: `runs` voiced runs of `run_len` frames at `hz`,
// separated by `gap` unvoiced frames.
F0Contour synth_contour(int runs, int run_len, int gap, double hz = 220.0) {
  F0Contour c;
  for (int r = 0; r < runs; ++r) {
    for (int i = 0; i < run_len; ++i) c.values_hz.push_back(hz);
    if (r + 1 < runs)
      for (int i = 0; i < gap; ++i) c.values_hz.push_back(0.0);
  }
  return c;
}

}  // namespace

TEST_CASE("yin recovers a pure sine within one percent") {
  const auto w = wave(oracle::sine(44100, 220.0, 2.0));
  const auto c = f0::extract_f0(w, FrameSpec{});
  REQUIRE(c.size() == FrameSpec{}.frame_count(w.samples.size()));
  for (std::size_t i = 0; i < c.size(); ++i) {
    REQUIRE(c.voiced(i));
    REQUIRE(std::abs(c.values_hz[i] - 220.0) <= 2.2);
  }
}

TEST_CASE("yin marks digital silence unvoiced") {
  const auto c = f0::extract_f0(wave(oracle::silence(44100, 1.0)), FrameSpec{});
  for (double v : c.values_hz) REQUIRE(v == 0.0);
}

TEST_CASE("yin rejects white noise as mostly unvoiced") {
  const auto c = f0::extract_f0(wave(oracle::noise(44100, 2.0, 0.1, 99)), FrameSpec{});
  std::size_t voiced = 0;
  for (double v : c.values_hz) voiced += v > 0.0 ? 1 : 0;
  CHECK(static_cast<double>(voiced) / static_cast<double>(c.size()) <= 0.05);
}

TEST_CASE("yin errors on audio shorter than one window") {
  CHECK_THROWS_AS(f0::extract_f0(wave(std::vector<float>(2047, 0.1f)), FrameSpec{}),
                  std::runtime_error);
}

TEST_CASE("extract range must sit inside (0, nyquist)") {
  const auto w = wave(oracle::sine(44100, 220.0, 0.2));
  CHECK_THROWS_AS(f0::extract_f0(w, FrameSpec{}, Range{50.0, 23000.0}), std::invalid_argument);
  CHECK_THROWS_AS(f0::extract_f0(w, FrameSpec{}, Range{0.0, 1100.0}), std::invalid_argument);
}

TEST_CASE("contour json uses the documented field names") {
  F0Contour c = synth_contour(1, 4, 0, 440.0);
  const auto j = f0::contour_to_json(c);
  CHECK(j.contains("sample_rate"));
  CHECK(j.contains("hop_size"));
  CHECK(j.contains("fft_size"));
  CHECK(j.contains("values_hz"));
  const F0Contour back = f0::contour_from_json(j);
  CHECK(back.values_hz == c.values_hz);
  CHECK(back.frame_spec.hop_size == c.frame_spec.hop_size);
  CHECK(back.frame_spec.fft_size == c.frame_spec.fft_size);
  CHECK(back.frame_spec.sample_rate == c.frame_spec.sample_rate);
}

TEST_CASE("contour files round trip through disk") {
  oracle::TempDir tmp("contour");
  const auto p = tmp.path() / "c.json";
  F0Contour c = synth_contour(2, 10, 3, 330.0);
  f0::save_contour(c, p);
  const F0Contour back = f0::load_contour(p);
  CHECK(back.values_hz == c.values_hz);
}

TEST_CASE("segment plans are deterministic in the seed") {
  const F0Contour c = synth_contour(4, 40, 10);
  const PerturbationConfig cfg;
  const auto a = f0::plan_segments(c, cfg, 1234);
  const auto b = f0::plan_segments(c, cfg, 1234);
  REQUIRE(a.segments.size() == b.segments.size());
  for (std::size_t i = 0; i < a.segments.size(); ++i) {
    CHECK(a.segments[i].start_frame == b.segments[i].start_frame);
    CHECK(a.segments[i].end_frame == b.segments[i].end_frame);
    CHECK(a.segments[i].kind == b.segments[i].kind);
  }
  bool seeds_differ = false;
  for (std::uint64_t s = 0; s < 5 && !seeds_differ; ++s) {
    const auto other = f0::plan_segments(c, cfg, s);
    seeds_differ = other.segments.size() != a.segments.size() ||
                   (other.segments.size() > 0 &&
                    other.segments[0].start_frame != a.segments[0].start_frame);
  }
  CHECK(seeds_differ);
}

TEST_CASE("segments are sorted, non-overlapping, voiced and in bounds") {
  const F0Contour c = synth_contour(4, 40, 10);
  const PerturbationConfig cfg;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto plan = f0::plan_segments(c, cfg, seed);
    REQUIRE(plan.segments.size() >= 1);
    REQUIRE(plan.segments.size() <= 4);
    int prev_end = 0;
    for (const auto& s : plan.segments) {
      REQUIRE(s.start_frame >= prev_end);
      REQUIRE(s.end_frame > s.start_frame);
      REQUIRE(s.end_frame <= static_cast<int>(c.size()));
      for (int i = s.start_frame; i < s.end_frame; ++i) REQUIRE(c.voiced(i));
      prev_end = s.end_frame;
    }
  }
}

TEST_CASE("segment count respects [min, max] when enough runs exist") {
  const F0Contour c = synth_contour(5, 45, 8);
  const PerturbationConfig cfg;  // 2..4 segments of 0.2..1.0 s
  for (std::uint64_t seed = 1000; seed < 3000; ++seed) {
    const auto plan = f0::plan_segments(c, cfg, seed);
    REQUIRE(plan.segments.size() >= 2);
    REQUIRE(plan.segments.size() <= 4);
  }
}

TEST_CASE("an unvoiced contour yields an empty plan, not an error") {
  F0Contour c;
  c.values_hz.assign(200, 0.0);
  const auto plan = f0::plan_segments(c, PerturbationConfig{}, 7);
  CHECK(plan.segments.empty());
}

TEST_CASE("zero probabilities force every kind to none") {
  const F0Contour c = synth_contour(4, 40, 10);
  PerturbationConfig cfg;
  cfg.p_jit = cfg.p_gld = cfg.p_jmp = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed)
    for (const auto& s : f0::plan_segments(c, cfg, seed).segments)
      REQUIRE(s.kind == SegmentKind::none);
}

TEST_CASE("kind frequencies converge to the configured probabilities") {
  const F0Contour c = synth_contour(4, 40, 10);
  const PerturbationConfig cfg;  // 0.15 / 0.15 / 0.20
  std::map<SegmentKind, std::int64_t> counts;
  std::int64_t total = 0;
  for (std::uint64_t seed = 0; seed < 100000; ++seed) {
    for (const auto& s : f0::plan_segments(c, cfg, seed).segments) {
      ++counts[s.kind];
      ++total;
    }
  }
  REQUIRE(total > 100000);
  const double n = static_cast<double>(total);
  CHECK(std::abs(counts[SegmentKind::jitter] / n - 0.15) < 0.01);
  CHECK(std::abs(counts[SegmentKind::glide] / n - 0.15) < 0.01);
  CHECK(std::abs(counts[SegmentKind::jump] / n - 0.20) < 0.01);
  CHECK(std::abs(counts[SegmentKind::none] / n - 0.50) < 0.01);
}

TEST_CASE("jitter matches its closed form and stays bounded") {
  F0Contour c = synth_contour(1, 60, 0, 200.0);
  c.values_hz[10] = 0.0;  // embedded unvoiced frame
  const Segment seg{5, 40, SegmentKind::jitter};
  const double depth = 30.0, rate = 5.0, phase = 0.7;
  const auto out = f0::apply_jitter_params(c, seg, depth, rate, phase, Range{40.0, 1300.0});
  const double dt = 1.0 / c.frame_spec.frame_rate();
  for (int i = 0; i < 60; ++i) {
    if (i < 5 || i >= 40) {
      REQUIRE(out.values_hz[i] == c.values_hz[i]);  // untouched outside
    } else if (i == 10) {
      REQUIRE(out.values_hz[i] == 0.0);  // unvoiced stays unvoiced
    } else {
      const double t = (i - 5) * dt;
      const double expected =
          200.0 * std::exp2(depth * std::sin(2.0 * oracle::kPi * rate * t + phase) / 1200.0);
      REQUIRE(out.values_hz[i] == Catch::Approx(expected).epsilon(1e-12));
      REQUIRE(std::abs(1200.0 * std::log2(out.values_hz[i] / 200.0)) <= depth + 1e-9);
    }
  }
}

TEST_CASE("seeded jitter respects the configured depth bound") {
  const F0Contour c = synth_contour(1, 80, 0, 300.0);
  const Segment seg{0, 80, SegmentKind::jitter};
  PerturbationConfig cfg;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto out = f0::apply_jitter(c, seg, cfg, seed);
    for (int i = 0; i < 80; ++i) {
      const double cents = 1200.0 * std::log2(out.values_hz[i] / 300.0);
      REQUIRE(std::abs(cents) <= cfg.jitter_depth_cents + 1e-9);
    }
  }
}

TEST_CASE("glide ramps geometrically to the target offset") {
  const int n = 24;
  F0Contour c = synth_contour(1, n, 0, 200.0);
  const Segment seg{0, n, SegmentKind::glide};
  const auto out = f0::apply_glide_offset(c, seg, 12.0, Range{40.0, 1300.0});
  CHECK(out.values_hz[n - 1] == Catch::Approx(400.0).margin(0.01));
  for (int k = 0; k < n; ++k) {
    const double expected = 200.0 * std::exp2(static_cast<double>(k) / (n - 1));
    REQUIRE(out.values_hz[k] == Catch::Approx(expected).epsilon(1e-9));
  }
  // Consecutive ratios constant in a geometric ramp.
  const double ratio = out.values_hz[1] / out.values_hz[0];
  for (int k = 1; k + 1 < n; ++k)
    REQUIRE(out.values_hz[k + 1] / out.values_hz[k] == Catch::Approx(ratio).epsilon(1e-9));
}

TEST_CASE("single-frame glide lands on the full offset") {
  F0Contour c = synth_contour(1, 3, 0, 220.0);
  const Segment seg{1, 2, SegmentKind::glide};
  const auto out = f0::apply_glide_offset(c, seg, 12.0, Range{40.0, 1300.0});
  CHECK(out.values_hz[1] == Catch::Approx(440.0).epsilon(1e-9));
}

TEST_CASE("jump applies a constant semitone shift") {
  F0Contour c = synth_contour(1, 10, 0, 300.0);
  const Segment seg{2, 8, SegmentKind::jump};
  const auto out = f0::apply_jump_offset(c, seg, 2.0, Range{40.0, 1300.0});
  const double expected = 300.0 * std::exp2(2.0 / 12.0);  // 336.7386...
  for (int i = 2; i < 8; ++i) REQUIRE(out.values_hz[i] == Catch::Approx(expected).epsilon(1e-12));
  CHECK(out.values_hz[0] == 300.0);
  CHECK(out.values_hz[9] == 300.0);
}

TEST_CASE("perturbed values clamp into f0_clamp") {
  F0Contour c = synth_contour(1, 10, 0, 1250.0);
  const Segment seg{0, 10, SegmentKind::jump};
  const auto out = f0::apply_jump_offset(c, seg, 3.0, Range{40.0, 1300.0});
  for (double v : out.values_hz) REQUIRE(v == 1300.0);
}

TEST_CASE("perturb_f0 changes only planned segments and is deterministic") {
  const F0Contour c = synth_contour(4, 40, 10, 250.0);
  const PerturbationConfig cfg;
  const auto [out1, plan1] = f0::perturb_f0(c, cfg, 77);
  const auto [out2, plan2] = f0::perturb_f0(c, cfg, 77);
  CHECK(out1.values_hz == out2.values_hz);
  REQUIRE(plan1.segments.size() == plan2.segments.size());

  auto inside = [&](int i) {
    for (const auto& s : plan1.segments)
      if (i >= s.start_frame && i < s.end_frame) return true;
    return false;
  };
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (!inside(static_cast<int>(i)))
      REQUIRE(out1.values_hz[i] == c.values_hz[i]);
    REQUIRE((out1.values_hz[i] == 0.0 ||
             (out1.values_hz[i] >= cfg.f0_clamp.lo && out1.values_hz[i] <= cfg.f0_clamp.hi)));
    // Voicing is never created or destroyed by perturbation.
    REQUIRE((out1.values_hz[i] > 0.0) == (c.values_hz[i] > 0.0));
  }
}

TEST_CASE("perturbation validation reports every violation at once") {
  PerturbationConfig cfg;
  cfg.p_jit = 0.5;
  cfg.p_gld = 0.4;
  cfg.p_jmp = 0.3;          // sum 1.2
  cfg.seg_dur_min = -0.1;   // bad duration
  cfg.jitter_depth_cents = -5.0;
  const auto errs = f0::validate(cfg);
  REQUIRE(errs.size() >= 3);
  bool mentions_sum = false;
  for (const auto& e : errs) mentions_sum = mentions_sum || e.find("p_jit + p_gld + p_jmp") != std::string::npos;
  CHECK(mentions_sum);
}

TEST_CASE("plan json round trips") {
  const F0Contour c = synth_contour(3, 40, 10);
  const auto plan = f0::plan_segments(c, PerturbationConfig{}, 31337);
  const auto back = f0::plan_from_json(f0::plan_to_json(plan));
  CHECK(back.rng_seed == plan.rng_seed);
  REQUIRE(back.segments.size() == plan.segments.size());
  for (std::size_t i = 0; i < plan.segments.size(); ++i) {
    CHECK(back.segments[i].start_frame == plan.segments[i].start_frame);
    CHECK(back.segments[i].end_frame == plan.segments[i].end_frame);
    CHECK(back.segments[i].kind == plan.segments[i].kind);
  }
}
