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

// Harmonic-plus-noise source-module excitation. Voiced regions carry a bank
// of cumulative-phase sinusoids merged through a fixed linear projection and
// tanh; unvoiced regions carry low-level seeded Gaussian noise.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "svcforge/core/rng.hpp"
#include "svcforge/f0/contour.hpp"

namespace svcforge::nsf {

struct NsfConfig {
  int num_harmonics = 8;       // H
  double sine_amplitude = 0.1; // alpha
  double noise_std = 0.003;    // sigma
  // Empty means uniform 1/H. Fixed, never trained.
  std::vector<double> merge_weights;
  double merge_bias = 0.0;
  int sample_rate = 44100;
  bool random_initial_phase = false;
};

inline std::vector<std::string> validate(const NsfConfig& c) {
  std::vector<std::string> errs;
  if (c.num_harmonics < 1) errs.push_back("num_harmonics must be >= 1");
  if (!(c.sine_amplitude >= 0.0) || !std::isfinite(c.sine_amplitude))
    errs.push_back("sine_amplitude must be finite and >= 0");
  if (!(c.noise_std >= 0.0) || !std::isfinite(c.noise_std))
    errs.push_back("noise_std must be finite and >= 0");
  if (!c.merge_weights.empty() &&
      c.merge_weights.size() != static_cast<std::size_t>(c.num_harmonics))
    errs.push_back("merge_weights must be empty or have num_harmonics entries");
  if (c.sample_rate <= 0) errs.push_back("sample_rate must be positive");
  return errs;
}

struct Excitation {
  std::vector<float> samples;
  int sample_rate = 44100;
  std::vector<std::uint8_t> voiced_mask;  // 1 = voiced, per sample
};

// Frame-rate contour -> per-sample Hz track of length frame_count * hop.
// Frame i anchors at sample i*hop; consecutive voiced frames interpolate
// linearly, the last frame of a voiced run holds, unvoiced frames emit 0.
inline std::vector<double> upsample_f0(const f0::F0Contour& contour, int sample_rate) {
  if (contour.values_hz.empty()) throw std::invalid_argument("upsample_f0: empty contour");
  if (sample_rate != contour.frame_spec.sample_rate)
    throw std::invalid_argument("upsample_f0: sample rate does not match contour frame spec");
  const int hop = contour.frame_spec.hop_size;
  const std::size_t frames = contour.values_hz.size();
  std::vector<double> track(frames * static_cast<std::size_t>(hop), 0.0);
  for (std::size_t i = 0; i < frames; ++i) {
    const double cur = contour.values_hz[i];
    if (cur <= 0.0) continue;
    const bool next_voiced = i + 1 < frames && contour.values_hz[i + 1] > 0.0;
    const double nxt = next_voiced ? contour.values_hz[i + 1] : cur;
    double* block = track.data() + i * static_cast<std::size_t>(hop);
    for (int k = 0; k < hop; ++k)
      block[k] = cur + (nxt - cur) * static_cast<double>(k) / static_cast<double>(hop);
  }
  return track;
}

// H sinusoid channels over a per-sample f0 track. Channel j (1-based) is
// alpha * sin(j * phi(t)) with phi accumulated as 2*pi*f0(t)/fs including the
// current sample, so the discrete derivative of phi is exactly 2*pi*f0(t)/fs.
// Samples where j*f0 >= fs/2 or f0 == 0 are zero.
inline std::vector<std::vector<double>> harmonic_bank(const std::vector<double>& f0_track,
                                                      const NsfConfig& cfg,
                                                      std::uint64_t seed = 0) {
  const auto errs = validate(cfg);
  if (!errs.empty()) throw std::invalid_argument("harmonic_bank: " + errs.front());
  const int H = cfg.num_harmonics;
  const double fs = static_cast<double>(cfg.sample_rate);
  const double nyquist = fs / 2.0;

  std::vector<double> phase0(static_cast<std::size_t>(H), 0.0);
  if (cfg.random_initial_phase) {
    Rng rng = Rng::substream(seed, 42);
    for (auto& p : phase0) p = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  std::vector<std::vector<double>> bank(static_cast<std::size_t>(H),
                                        std::vector<double>(f0_track.size(), 0.0));
  double phi = 0.0;
  for (std::size_t t = 0; t < f0_track.size(); ++t) {
    const double f = f0_track[t];
    phi += 2.0 * std::numbers::pi * f / fs;
    if (f <= 0.0) continue;
    for (int j = 1; j <= H; ++j) {
      if (static_cast<double>(j) * f >= nyquist) break;  // higher j only worse
      bank[static_cast<std::size_t>(j - 1)][t] =
          cfg.sine_amplitude *
          std::sin(static_cast<double>(j) * phi + phase0[static_cast<std::size_t>(j - 1)]);
    }
  }
  return bank;
}

// e(t) = tanh(sum_j W[j] * h_j(t) + b), per sample.
inline std::vector<double> merge_excitation(const std::vector<std::vector<double>>& bank,
                                            const NsfConfig& cfg) {
  const std::size_t H = bank.size();
  if (H == 0) throw std::invalid_argument("merge_excitation: empty bank");
  std::vector<double> w = cfg.merge_weights;
  if (w.empty()) w.assign(H, 1.0 / static_cast<double>(H));
  if (w.size() != H)
    throw std::invalid_argument("merge_excitation: weight count does not match channel count");
  const std::size_t n = bank.front().size();
  for (const auto& ch : bank)
    if (ch.size() != n) throw std::invalid_argument("merge_excitation: ragged channel lengths");

  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    double acc = cfg.merge_bias;
    for (std::size_t j = 0; j < H; ++j) acc += w[j] * bank[j][t];
    out[t] = std::tanh(acc);
  }
  return out;
}

inline Excitation generate_excitation(const f0::F0Contour& contour, const NsfConfig& cfg,
                                      std::uint64_t seed) {
  const std::vector<double> track = upsample_f0(contour, cfg.sample_rate);
  const auto bank = harmonic_bank(track, cfg, seed);
  const std::vector<double> harmonic = merge_excitation(bank, cfg);

  Excitation e;
  e.sample_rate = cfg.sample_rate;
  e.samples.resize(track.size());
  e.voiced_mask.resize(track.size());
  Rng noise = Rng::substream(seed, 41);
  for (std::size_t t = 0; t < track.size(); ++t) {
    if (track[t] > 0.0) {
      e.voiced_mask[t] = 1;
      e.samples[t] = static_cast<float>(harmonic[t]);
    } else {
      e.voiced_mask[t] = 0;
      const double v = cfg.noise_std * noise.gaussian();
      e.samples[t] = static_cast<float>(std::clamp(v, -1.0, 1.0));
    }
  }
  return e;
}

}  // namespace svcforge::nsf
