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
#include <cstring>

#include "support/oracle.hpp"
#include "svcforge/fx/chain.hpp"
#include "svcforge/fx/echo.hpp"
#include "svcforge/fx/pitch_shift.hpp"
#include "svcforge/fx/reverb.hpp"

using namespace svcforge;

namespace {

Waveform wave(std::vector<float> s, int rate = 44100) {
  Waveform w;
  w.samples = std::move(s);
  w.sample_rate = rate;
  return w;
}

Waveform impulse(std::size_t len, int rate = 44100) {
  Waveform w;
  w.samples.assign(len, 0.0f);
  w.samples[0] = 1.0f;
  w.sample_rate = rate;
  return w;
}

bool same_samples(const Waveform& a, const Waveform& b) {
  return a.samples.size() == b.samples.size() &&
         (a.samples.empty() ||
          std::memcmp(a.samples.data(), b.samples.data(), a.samples.size() * sizeof(float)) == 0);
}

}  // namespace

TEST_CASE("pitch shift of zero semitones is the identity") {
  const auto w = wave(oracle::sine(44100, 440.0, 0.3));
  CHECK(same_samples(fx::pitch_shift(w, 0.0), w));
}

TEST_CASE("pitch shift preserves length for any interval") {
  const auto w = wave(oracle::sine(44100, 440.0, 0.437));
  for (double st : {7.0, -5.0, 3.0, 12.0, -12.0})
    CHECK(fx::pitch_shift(w, st).samples.size() == w.samples.size());
}

TEST_CASE("pitch shift moves a sine to the expected frequency") {
  const auto w = wave(oracle::sine(44100, 440.0, 1.0));
  const auto up = fx::pitch_shift(w, 7.0);
  const double target = 440.0 * std::exp2(7.0 / 12.0);  // 659.255
  const auto spec = oracle::spectrum(up.samples, 44100, 32768);
  // Peak bin within the search band should sit on the target.
  double best_f = 0.0, best_m = 0.0;
  for (std::size_t k = 0; k < spec.magnitude.size(); ++k) {
    const double f = k * spec.bin_hz;
    if (f > 200.0 && f < 2000.0 && spec.magnitude[k] > best_m) {
      best_m = spec.magnitude[k];
      best_f = f;
    }
  }
  CHECK(std::abs(best_f - target) < 5.0);
}

TEST_CASE("harmony at mix zero is the identity and keeps silence silent") {
  const auto w = wave(oracle::sine(44100, 440.0, 0.3));
  CHECK(same_samples(fx::apply_harmony(w, 7.0, 0.0), w));

  const auto hush = fx::apply_harmony(wave(oracle::silence(44100, 0.3)), 5.0, 0.4);
  for (float s : hush.samples) REQUIRE(std::abs(s) < 1e-7f);
}

TEST_CASE("harmony blends wet and dry at the configured ratio") {
  const auto w = wave(oracle::sine(44100, 440.0, 1.0));
  const auto out = fx::apply_harmony(w, 7.0, 0.4);
  REQUIRE(out.samples.size() == w.samples.size());
  const double shifted = 440.0 * std::exp2(7.0 / 12.0);
  const auto spec = oracle::spectrum(out.samples, 44100, 32768);
  const double dry_amp = std::sqrt(oracle::band_energy(spec, 440.0 - 12.0, 440.0 + 12.0));
  const double wet_amp = std::sqrt(oracle::band_energy(spec, shifted - 12.0, shifted + 12.0));
  const double ratio = wet_amp / dry_amp;
  CHECK(ratio > (0.4 / 0.6) * 0.75);
  CHECK(ratio < (0.4 / 0.6) * 1.25);
}

TEST_CASE("harmony rejects intervals beyond an octave") {
  const auto w = wave(oracle::sine(44100, 440.0, 0.1));
  CHECK_THROWS_AS(fx::apply_harmony(w, 13.0, 0.4), std::invalid_argument);
}

TEST_CASE("echo impulse response matches the closed form") {
  const auto out = fx::apply_echo(impulse(13231), 0.1, 0.5, 0.35);
  REQUIRE(out.samples.size() == 13231);
  // D = 4410 samples; taps (1-m) at 0, then m * g^k at k*D.
  CHECK(std::abs(out.samples[0] - 0.65) < 1e-6);
  CHECK(std::abs(out.samples[4410] - 0.175) < 1e-6);
  CHECK(std::abs(out.samples[8820] - 0.0875) < 1e-6);
  for (std::size_t t = 0; t < out.samples.size(); ++t) {
    if (t == 0 || t == 4410 || t == 8820 || t == 13230) continue;
    REQUIRE(out.samples[t] == 0.0f);
  }
  CHECK(std::abs(out.samples[13230] - 0.04375) < 1e-6);  // third repeat
}

TEST_CASE("echo with zero feedback only attenuates by the dry ratio") {
  const auto w = wave(oracle::sine(44100, 330.0, 0.2));
  const auto out = fx::apply_echo(w, 0.05, 0.0, 0.35);
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    REQUIRE(out.samples[i] == Catch::Approx(0.65 * w.samples[i]).margin(1e-7));
}

TEST_CASE("echo at mix zero returns the input exactly") {
  const auto w = wave(oracle::noise(44100, 0.1, 0.5, 11));
  CHECK(same_samples(fx::apply_echo(w, 0.1, 0.5, 0.0), w));
}

TEST_CASE("echo longer than the waveform leaves only the dry-scaled input") {
  const auto w = wave(oracle::sine(44100, 330.0, 0.05));  // 2205 samples
  const auto out = fx::apply_echo(w, 0.5, 0.5, 0.35);     // delay 22050 samples
  REQUIRE(out.samples.size() == w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i)
    REQUIRE(out.samples[i] == Catch::Approx(0.65 * w.samples[i]).margin(1e-7));
}

TEST_CASE("echo validates feedback and delay") {
  const auto w = wave(oracle::sine(44100, 330.0, 0.1));
  CHECK_THROWS_AS(fx::apply_echo(w, 0.1, 1.0, 0.35), std::invalid_argument);
  CHECK_THROWS_AS(fx::apply_echo(w, 0.1, -0.2, 0.35), std::invalid_argument);
  CHECK_THROWS_AS(fx::apply_echo(w, 1e-6, 0.5, 0.35), std::invalid_argument);
}

TEST_CASE("comb feedback follows the rt60 formula") {
  CHECK(fx::comb_feedback(0.0297, 0.6) == Catch::Approx(0.7104).margin(1e-4));
  CHECK(fx::comb_feedback(0.03, 0.3) == Catch::Approx(0.50119).margin(1e-4));
  CHECK(fx::comb_feedback(0.03, 1.2) > fx::comb_feedback(0.03, 0.6));  // longer tail
  CHECK(fx::comb_feedback(0.03, 0.6) < 1.0);
}

TEST_CASE("reverb at mix zero is the identity") {
  const auto w = wave(oracle::sine(44100, 330.0, 0.3));
  CHECK(same_samples(fx::apply_reverb(w, 0.6, 0.0, 5), w));
}

TEST_CASE("reverb impulse decays roughly rt60 over its tail") {
  const auto out = fx::apply_reverb(impulse(44100), 0.6, 1.0, 42);
  auto window_energy = [&](double t0, double t1) {
    double e = 0.0;
    for (std::size_t i = static_cast<std::size_t>(t0 * 44100);
         i < static_cast<std::size_t>(t1 * 44100); ++i)
      e += static_cast<double>(out.samples[i]) * out.samples[i];
    return e;
  };
  const double drop = oracle::db(window_energy(0.0, 0.05) / window_energy(0.55, 0.65));
  CHECK(drop >= 55.0);
  CHECK(drop <= 65.0);
}

TEST_CASE("reverb is deterministic per seed and bounded after peak_guard") {
  const auto w = wave(oracle::sine(44100, 330.0, 0.4, 0.95));
  const auto a = fx::apply_reverb(w, 0.8, 0.5, 7);
  const auto b = fx::apply_reverb(w, 0.8, 0.5, 7);
  CHECK(same_samples(a, b));
  CHECK(peak_amplitude(a) <= 1.0f);

  const auto c = fx::apply_reverb(w, 0.8, 0.5, 8);
  CHECK_FALSE(same_samples(a, c));  // delay jitter differs per seed
}

TEST_CASE("reverb rejects non-positive rt60") {
  const auto w = wave(oracle::sine(44100, 330.0, 0.1));
  CHECK_THROWS_AS(fx::apply_reverb(w, 0.0, 0.5, 1), std::invalid_argument);
}

TEST_CASE("chain with zero probabilities is bit-identical and traced as dry") {
  fx::EffectChainConfig cfg;
  cfg.p_h = cfg.p_e = cfg.p_r = 0.0;
  const auto w = wave(oracle::noise(44100, 0.2, 0.6, 21));
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto [out, trace] = fx::apply_chain(w, cfg, seed);
    REQUIRE(same_samples(out, w));
    REQUIRE_FALSE(trace.harmony_applied);
    REQUIRE_FALSE(trace.echo_applied);
    REQUIRE_FALSE(trace.reverb_applied);
  }
}

TEST_CASE("chain draws hit the configured activation rates") {
  const fx::EffectChainConfig cfg;  // 0.3 / 0.4 / 0.4
  const int n = 100000;
  int h = 0, e = 0, r = 0;
  for (int i = 0; i < n; ++i) {
    const auto t = fx::draw_chain_trace(cfg, static_cast<std::uint64_t>(i));
    h += t.harmony_applied;
    e += t.echo_applied;
    r += t.reverb_applied;
  }
  CHECK(std::abs(h / double(n) - 0.3) < 0.01);
  CHECK(std::abs(e / double(n) - 0.4) < 0.01);
  CHECK(std::abs(r / double(n) - 0.4) < 0.01);
}

TEST_CASE("chain activations are pairwise uncorrelated") {
  const fx::EffectChainConfig cfg;
  const int n = 100000;
  double sh = 0, se = 0, sr = 0, she = 0, shr = 0, ser = 0;
  for (int i = 0; i < n; ++i) {
    const auto t = fx::draw_chain_trace(cfg, static_cast<std::uint64_t>(i) + 500000);
    const double a = t.harmony_applied, b = t.echo_applied, c = t.reverb_applied;
    sh += a;
    se += b;
    sr += c;
    she += a * b;
    shr += a * c;
    ser += b * c;
  }
  auto corr = [n](double sxy, double sx, double sy) {
    const double mx = sx / n, my = sy / n;
    const double cov = sxy / n - mx * my;
    return cov / std::sqrt(mx * (1 - mx) * my * (1 - my));
  };
  CHECK(std::abs(corr(she, sh, se)) < 0.02);
  CHECK(std::abs(corr(shr, sh, sr)) < 0.02);
  CHECK(std::abs(corr(ser, se, sr)) < 0.02);
}

TEST_CASE("drawn parameters stay inside their configured ranges") {
  const fx::EffectChainConfig cfg;
  for (int i = 0; i < 2000; ++i) {
    const auto t = fx::draw_chain_trace(cfg, static_cast<std::uint64_t>(i));
    if (t.harmony_applied) {
      bool known = false;
      for (double st : cfg.harmony_intervals) known = known || st == t.harmony_interval;
      REQUIRE(known);
    }
    if (t.echo_applied) {
      REQUIRE(cfg.echo_delay.contains(t.echo_delay_s));
      REQUIRE(cfg.echo_feedback.contains(t.echo_feedback));
    }
    if (t.reverb_applied) REQUIRE(cfg.reverb_rt60.contains(t.reverb_rt60_s));
  }
}

TEST_CASE("chain output replays exactly from its trace") {
  const fx::EffectChainConfig cfg;
  const auto w = wave(oracle::sine(44100, 260.0, 0.4));
  // Find seeds covering: none, one effect, all three.
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 400 && covered != 7; ++seed) {
    const auto trace = fx::draw_chain_trace(cfg, seed);
    const int fired = trace.harmony_applied + trace.echo_applied + trace.reverb_applied;
    const int bit = fired == 0 ? 1 : (fired == 3 ? 4 : 2);
    if (covered & bit) continue;
    covered |= bit;
    const auto [direct, t2] = fx::apply_chain(w, cfg, seed);
    REQUIRE(same_samples(direct, fx::apply_trace(w, cfg, trace)));
    REQUIRE(fx::trace_to_json(t2) == fx::trace_to_json(trace));
  }
  REQUIRE(covered == 7);
}

TEST_CASE("chain preserves length and never clips") {
  const fx::EffectChainConfig cfg;
  const auto w = wave(oracle::sine(44100, 260.0, 0.35, 0.9));
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto [out, trace] = fx::apply_chain(w, cfg, seed);
    REQUIRE(out.samples.size() == w.samples.size());
    REQUIRE(peak_amplitude(out) <= 1.0f);
  }
}

TEST_CASE("effect trace json round trips") {
  fx::EffectTrace t;
  t.harmony_applied = true;
  t.harmony_interval = -5.0;
  t.echo_applied = true;
  t.echo_delay_s = 0.123456789;
  t.echo_feedback = 0.42;
  t.reverb_applied = false;
  t.seed = 0xFEEDFACEDEADBEEFull;
  const auto back = fx::trace_from_json(fx::trace_to_json(t));
  CHECK(back.harmony_applied == t.harmony_applied);
  CHECK(back.harmony_interval == t.harmony_interval);
  CHECK(back.echo_applied == t.echo_applied);
  CHECK(back.echo_delay_s == t.echo_delay_s);
  CHECK(back.echo_feedback == t.echo_feedback);
  CHECK(back.reverb_applied == t.reverb_applied);
  CHECK(back.seed == t.seed);
}

TEST_CASE("chain config validation reports all violations") {
  fx::EffectChainConfig cfg;
  cfg.p_h = 1.3;
  cfg.mix_e = -0.2;
  cfg.echo_feedback = Range{0.5, 1.5};
  cfg.harmony_intervals.clear();
  const auto errs = fx::validate(cfg);
  CHECK(errs.size() >= 4);
}
