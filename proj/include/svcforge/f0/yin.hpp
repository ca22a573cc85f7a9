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

// YIN pitch tracking (de Cheveigne & Kawahara 2002): squared difference
// function, cumulative mean normalization, absolute threshold, parabolic
// interpolation. Deterministic and dependency-free.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "svcforge/audio/frame_spec.hpp"
#include "svcforge/audio/waveform.hpp"
#include "svcforge/core/range.hpp"
#include "svcforge/f0/contour.hpp"

namespace svcforge::f0 {

inline constexpr double kYinThreshold = 0.1;
inline constexpr Range kDefaultF0Range{50.0, 1100.0};

namespace detail {

// One analysis frame: x[0 .. fft_size). The integration window is
// fft_size / 2 so the frame is self-contained. Returns 0 for unvoiced.
inline double yin_frame(const float* x, int fft_size, int sample_rate, Range range) {
  const int w = fft_size / 2;
  int tau_lo = static_cast<int>(std::floor(sample_rate / range.hi));
  int tau_hi = static_cast<int>(std::ceil(sample_rate / range.lo));
  tau_lo = std::max(tau_lo, 2);
  tau_hi = std::min(tau_hi, w - 2);
  if (tau_lo >= tau_hi) return 0.0;

  std::vector<double> diff(static_cast<std::size_t>(tau_hi) + 2, 0.0);
  for (int tau = 1; tau <= tau_hi + 1; ++tau) {
    double acc = 0.0;
    for (int j = 0; j < w; ++j) {
      const double d = static_cast<double>(x[j]) - static_cast<double>(x[j + tau]);
      acc += d * d;
    }
    diff[static_cast<std::size_t>(tau)] = acc;
  }

  // Cumulative mean normalized difference; d'(0) := 1 by definition.
  std::vector<double> cmnd(diff.size(), 1.0);
  double cum = 0.0;
  for (int tau = 1; tau <= tau_hi + 1; ++tau) {
    cum += diff[static_cast<std::size_t>(tau)];
    cmnd[static_cast<std::size_t>(tau)] =
        cum > 0.0 ? diff[static_cast<std::size_t>(tau)] * tau / cum : 1.0;
  }

  int tau = -1;
  for (int t = tau_lo; t <= tau_hi; ++t) {
    if (cmnd[static_cast<std::size_t>(t)] < kYinThreshold) {
      tau = t;
      while (tau + 1 <= tau_hi &&
             cmnd[static_cast<std::size_t>(tau + 1)] < cmnd[static_cast<std::size_t>(tau)])
        ++tau;
      break;
    }
  }
  if (tau < 0) return 0.0;  // aperiodic frame

  // Parabolic interpolation around the minimum.
  double refined = tau;
  const double a = cmnd[static_cast<std::size_t>(tau - 1)];
  const double b = cmnd[static_cast<std::size_t>(tau)];
  const double c = cmnd[static_cast<std::size_t>(tau + 1)];
  const double denom = a - 2.0 * b + c;
  if (std::fabs(denom) > 1e-12) {
    double delta = 0.5 * (a - c) / denom;
    delta = std::clamp(delta, -0.5, 0.5);
    refined += delta;
  }

  const double hz = sample_rate / refined;
  return std::clamp(hz, range.lo, range.hi);
}

}  // namespace detail

// Extract a frame-rate F0 contour. Frames step by spec.hop_size and are
// spec.fft_size samples wide; frames without a periodicity dip below the
// YIN threshold are reported as 0 (unvoiced).
inline F0Contour extract_f0(const Waveform& w, FrameSpec spec, Range range = kDefaultF0Range) {
  spec.validate();
  if (w.empty()) throw std::invalid_argument("extract_f0: empty waveform");
  if (spec.sample_rate != w.sample_rate)
    throw std::invalid_argument("extract_f0: frame spec sample rate differs from waveform");
  if (!(range.lo > 0.0) || !(range.hi < w.sample_rate / 2.0) || !(range.lo < range.hi))
    throw std::invalid_argument("extract_f0: f0 range must lie within (0, sample_rate/2)");
  const std::size_t frames = spec.frame_count(w.size());
  if (frames == 0)
    throw std::runtime_error("extract_f0: waveform shorter than one analysis window");

  F0Contour c;
  c.frame_spec = spec;
  c.values_hz.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    const float* frame = w.samples.data() + i * static_cast<std::size_t>(spec.hop_size);
    c.values_hz[i] = detail::yin_frame(frame, spec.fft_size, spec.sample_rate, range);
  }
  return c;
}

}  // namespace svcforge::f0
