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

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace svcforge {

// Mono sample buffer. Loaded audio is normalized to [-1, 1]; intermediate
// processing may exceed that range transiently, peak_guard restores it.
struct Waveform {
  std::vector<float> samples;
  int sample_rate = 44100;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double duration_s() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

inline void validate_waveform(const Waveform& w) {
  if (w.sample_rate <= 0) throw std::invalid_argument("waveform: sample_rate must be positive");
  if (w.samples.empty()) throw std::invalid_argument("waveform: empty sample buffer");
  for (float s : w.samples)
    if (!std::isfinite(s)) throw std::invalid_argument("waveform: non-finite sample");
}

inline float peak_amplitude(const Waveform& w) {
  float peak = 0.0f;
  for (float s : w.samples) peak = std::max(peak, std::fabs(s));
  return peak;
}

// Rescale so that max |sample| == 1 when the input exceeds full scale;
// otherwise the input is returned unchanged. Idempotent.
inline Waveform peak_guard(const Waveform& w) {
  const float peak = peak_amplitude(w);
  if (peak <= 1.0f) return w;
  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i) out.samples[i] = w.samples[i] / peak;
  return out;
}

}  // namespace svcforge
