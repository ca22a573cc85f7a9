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

// Schroeder reverberator: four parallel feedback combs with mutually prime
// delays near 29.7/37.1/41.1/43.7 ms, each with feedback 10^(-3*delay/rt60)
// so the tail reaches -60 dB at rt60, followed by two series allpasses at
// 5.0 and 1.7 ms with gain 0.7. Fully synthetic, parameterized by rt60; the
// seed jitters the comb delays a little for decorrelation between draws.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "svcforge/audio/waveform.hpp"
#include "svcforge/core/rng.hpp"

namespace svcforge::fx {

// -60 dB tail criterion: amplitude loss per trip through a delay line.
inline double comb_feedback(double delay_s, double rt60_s) {
  return std::pow(10.0, -3.0 * delay_s / rt60_s);
}

namespace detail {

inline bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; static_cast<long long>(d) * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int next_prime_at_least(int n) {
  while (!is_prime(n)) ++n;
  return n;
}

// y[n] = x[n] + g * y[n - d]; taps g^k at t = k*d, anchoring the decay
// envelope at t = 0.
inline void add_comb(const std::vector<float>& x, std::vector<double>& sum, int d, double g) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  const std::size_t dd = static_cast<std::size_t>(d);
  for (std::size_t t = 0; t < n; ++t) {
    double v = static_cast<double>(x[t]);
    if (t >= dd) v += g * y[t - dd];
    y[t] = v;
    sum[t] += v;
  }
}

// y[n] = -g*x[n] + x[n-d] + g*y[n-d]
inline void allpass_inplace(std::vector<double>& x, int d, double g) {
  const std::size_t n = x.size();
  std::vector<double> y(n, 0.0);
  const std::size_t dd = static_cast<std::size_t>(d);
  for (std::size_t t = 0; t < n; ++t) {
    double v = -g * x[t];
    if (t >= dd) v += x[t - dd] + g * y[t - dd];
    y[t] = v;
  }
  x.swap(y);
}

}  // namespace detail

inline Waveform apply_reverb(const Waveform& w, double rt60_s, double mix, std::uint64_t seed) {
  if (!(rt60_s > 0.0)) throw std::invalid_argument("apply_reverb: rt60 must be positive");

  static constexpr double kCombDelaysMs[4] = {29.7, 37.1, 41.1, 43.7};
  static constexpr double kAllpassDelaysMs[2] = {5.0, 1.7};
  static constexpr double kAllpassGain = 0.7;
  static constexpr double kDelayJitter = 0.02;

  const std::size_t n = w.samples.size();
  const double fs = static_cast<double>(w.sample_rate);
  Rng jitter = Rng::substream(seed, 21);

  std::vector<double> wet(n, 0.0);
  for (double ms : kCombDelaysMs) {
    const double jittered = ms * (1.0 + jitter.uniform(-kDelayJitter, kDelayJitter));
    // Prime delays are pairwise coprime, keeping the comb tap lattices from
    // lining up.
    const int d = detail::next_prime_at_least(
        std::max(2, static_cast<int>(std::lround(jittered * 1e-3 * fs))));
    const double g = comb_feedback(d / fs, rt60_s);
    detail::add_comb(w.samples, wet, d, g);
  }
  for (double& v : wet) v *= 0.25;  // average of the four parallel branches

  for (double ms : kAllpassDelaysMs) {
    const int d = std::max(1, static_cast<int>(std::lround(ms * 1e-3 * fs)));
    detail::allpass_inplace(wet, d, kAllpassGain);
  }

  Waveform out;
  out.sample_rate = w.sample_rate;
  out.samples.resize(n);
  for (std::size_t t = 0; t < n; ++t)
    out.samples[t] = static_cast<float>((1.0 - mix) * static_cast<double>(w.samples[t]) + mix * wet[t]);
  return peak_guard(out);
}

}  // namespace svcforge::fx
