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
#include <stdexcept>
#include <vector>

#include "svcforge/audio/waveform.hpp"

namespace svcforge::fx {

// Feedback delay: wet(t) = sum_{k>=1} g^k * x(t - kD), blended as
// (1-mix)*dry + mix*wet and truncated to the input length. A delay longer
// than the signal leaves the wet path silent, so the output is the
// dry-scaled input.
inline Waveform apply_echo(const Waveform& w, double delay_s, double feedback, double mix) {
  if (!(feedback >= 0.0 && feedback < 1.0))
    throw std::invalid_argument("apply_echo: feedback must be in [0, 1)");
  const long long delay = std::llround(delay_s * w.sample_rate);
  if (delay < 1) throw std::invalid_argument("apply_echo: delay must span at least one sample");

  const std::size_t n = w.samples.size();
  const std::size_t d = static_cast<std::size_t>(delay);
  std::vector<double> wet(n, 0.0);
  for (std::size_t t = d; t < n; ++t)
    wet[t] = feedback * (static_cast<double>(w.samples[t - d]) + wet[t - d]);

  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    out.samples[t] = static_cast<float>((1.0 - mix) * static_cast<double>(w.samples[t]) + mix * wet[t]);
  return out;
}

}  // namespace svcforge::fx
