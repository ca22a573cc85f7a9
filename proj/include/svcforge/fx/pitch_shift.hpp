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

// Duration-preserving pitch shift: phase-vocoder time stretch (STFT with
// 2048-point frames, hop 512, Hann analysis/synthesis windows, horizontal
// phase propagation) followed by linear resampling of the stretched signal
// back to the original length.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "svcforge/audio/waveform.hpp"
#include "svcforge/dsp/fft.hpp"

namespace svcforge::fx {

namespace detail {

inline double princarg(double phase) {
  return phase - 2.0 * M_PI * std::round(phase / (2.0 * M_PI));
}

// Time-stretch x by `ratio` (output duration = input * ratio, pitch
// unchanged). Frames are centered; overlap-add is normalized by the
// accumulated squared window so gain stays at unity everywhere.
inline std::vector<double> phase_vocoder_stretch(const std::vector<float>& x, double ratio,
                                                 int fft_size, int hop) {
  const std::size_t n = x.size();
  const std::size_t half = static_cast<std::size_t>(fft_size) / 2;
  const std::vector<double> window = dsp::hann_window(static_cast<std::size_t>(fft_size));

  const std::size_t num_frames = n / static_cast<std::size_t>(hop) + 2;
  std::vector<std::vector<std::complex<double>>> stft(num_frames);
  std::vector<std::complex<double>> frame(static_cast<std::size_t>(fft_size));
  for (std::size_t m = 0; m < num_frames; ++m) {
    const std::ptrdiff_t center = static_cast<std::ptrdiff_t>(m) * hop;
    for (std::size_t j = 0; j < static_cast<std::size_t>(fft_size); ++j) {
      const std::ptrdiff_t idx = center - static_cast<std::ptrdiff_t>(half) + static_cast<std::ptrdiff_t>(j);
      const double v = (idx >= 0 && idx < static_cast<std::ptrdiff_t>(n))
                           ? static_cast<double>(x[static_cast<std::size_t>(idx)])
                           : 0.0;
      frame[j] = v * window[j];
    }
    dsp::fft_inplace(frame, false);
    stft[m].assign(frame.begin(), frame.begin() + static_cast<std::ptrdiff_t>(half) + 1);
  }

  const std::size_t out_len = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio));
  const std::size_t num_out_frames = out_len / static_cast<std::size_t>(hop) + 2;

  std::vector<double> acc(num_out_frames * static_cast<std::size_t>(hop) + static_cast<std::size_t>(fft_size), 0.0);
  std::vector<double> norm(acc.size(), 0.0);

  std::vector<double> phase_acc(half + 1);
  for (std::size_t k = 0; k <= half; ++k) phase_acc[k] = std::arg(stft[0][k]);

  std::vector<std::complex<double>> synth(static_cast<std::size_t>(fft_size));
  for (std::size_t m = 0; m < num_out_frames; ++m) {
    const double tau = static_cast<double>(m) / ratio;
    std::size_t fl = static_cast<std::size_t>(tau);
    if (fl >= num_frames - 1) fl = num_frames - 2;
    const double frac = std::min(std::max(tau - static_cast<double>(fl), 0.0), 1.0);

    for (std::size_t k = 0; k <= half; ++k) {
      const double mag =
          (1.0 - frac) * std::abs(stft[fl][k]) + frac * std::abs(stft[fl + 1][k]);
      synth[k] = std::polar(mag, phase_acc[k]);

      // Advance by the instantaneous phase increment between the two source
      // frames, with the expected advance re-centred to kill wraparound.
      const double expected = 2.0 * M_PI * static_cast<double>(k) * hop / fft_size;
      const double dphi =
          expected + princarg(std::arg(stft[fl + 1][k]) - std::arg(stft[fl][k]) - expected);
      phase_acc[k] += dphi;
    }
    for (std::size_t k = half + 1; k < static_cast<std::size_t>(fft_size); ++k)
      synth[k] = std::conj(synth[static_cast<std::size_t>(fft_size) - k]);

    dsp::fft_inplace(synth, true);
    const std::size_t base = m * static_cast<std::size_t>(hop);
    for (std::size_t j = 0; j < static_cast<std::size_t>(fft_size); ++j) {
      acc[base + j] += synth[j].real() * window[j];
      norm[base + j] += window[j] * window[j];
    }
  }

  std::vector<double> stretched(out_len, 0.0);
  for (std::size_t i = 0; i < out_len; ++i) {
    const std::size_t p = i + half;  // frames are centered, offset back
    if (p < acc.size() && norm[p] > 1e-9) stretched[i] = acc[p] / norm[p];
  }
  return stretched;
}

}  // namespace detail

// Shift pitch by `semitones` while keeping duration; output length equals
// input length exactly.
inline Waveform pitch_shift(const Waveform& w, double semitones, int fft_size = 2048,
                            int hop = 512) {
  const double ratio = std::exp2(semitones / 12.0);
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(w.samples.size());
  if (w.empty()) return out;
  if (semitones == 0.0) {
    out.samples = w.samples;
    return out;
  }

  const std::vector<double> stretched = detail::phase_vocoder_stretch(w.samples, ratio, fft_size, hop);

  // Read the stretched signal at step `ratio`: duration returns to the
  // original, frequencies scale by `ratio`.
  const std::size_t sn = stretched.size();
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    const double pos = static_cast<double>(i) * ratio;
    const std::size_t i0 = static_cast<std::size_t>(pos);
    if (i0 + 1 < sn) {
      const double frac = pos - static_cast<double>(i0);
      out.samples[i] = static_cast<float>((1.0 - frac) * stretched[i0] + frac * stretched[i0 + 1]);
    } else if (i0 < sn) {
      out.samples[i] = static_cast<float>(stretched[i0]);
    } else {
      out.samples[i] = 0.0f;
    }
  }
  return out;
}

}  // namespace svcforge::fx
