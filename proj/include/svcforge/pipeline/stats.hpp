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

// Empirical sanity check of a manifest: activation rates, perturbation-kind
// frequencies, segment-count histogram, and 3-sigma deviation flags against
// the configured probabilities.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "svcforge/pipeline/config.hpp"
#include "svcforge/pipeline/run.hpp"

namespace svcforge::pipeline {

struct StatsReport {
  std::int64_t records = 0;
  std::int64_t error_entries = 0;
  std::int64_t malformed_lines = 0;
  std::int64_t segments = 0;
  double harmony_rate = 0.0;
  double echo_rate = 0.0;
  double reverb_rate = 0.0;
  std::map<std::string, std::int64_t> kind_counts;   // jitter/glide/jump/none
  std::map<std::string, double> kind_freqs;          // fractions of all segments
  std::map<int, std::int64_t> segment_count_histogram;
  std::vector<std::string> flags;                    // >3-sigma deviations, warnings
};

namespace detail {

inline void flag_if_deviates(StatsReport& rep, const std::string& name, double empirical,
                             double expected, std::int64_t n) {
  if (n <= 0) return;
  const double sigma = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
  if (std::abs(empirical - expected) > 3.0 * sigma) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s rate %.4f deviates >3 sigma from expected %.4f (n=%lld)",
                  name.c_str(), empirical, expected, static_cast<long long>(n));
    rep.flags.emplace_back(buf);
  }
}

}  // namespace detail

inline StatsReport stats_report(const std::string& manifest_path, const PipelineConfig& expected) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open manifest: " + manifest_path);

  StatsReport rep;
  rep.kind_counts = {{"jitter", 0}, {"glide", 0}, {"jump", 0}, {"none", 0}};
  std::int64_t harmony = 0, echo = 0, reverb = 0;

  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      ++rep.malformed_lines;
      continue;
    }
    if (j.contains("error")) {
      ++rep.error_entries;
      continue;
    }
    SampleRecord rec;
    try {
      rec = record_from_json(j);
    } catch (const std::exception&) {
      ++rep.malformed_lines;
      continue;
    }
    ++rep.records;
    if (rec.effect_trace.harmony_applied) ++harmony;
    if (rec.effect_trace.echo_applied) ++echo;
    if (rec.effect_trace.reverb_applied) ++reverb;
    ++rep.segment_count_histogram[static_cast<int>(rec.segment_plan.segments.size())];
    for (const auto& seg : rec.segment_plan.segments) {
      ++rep.kind_counts[f0::to_string(seg.kind)];
      ++rep.segments;
    }
  }

  if (rep.records == 0) {
    rep.flags.emplace_back("warning: manifest contains no sample records");
    return rep;
  }

  const double n = static_cast<double>(rep.records);
  rep.harmony_rate = harmony / n;
  rep.echo_rate = echo / n;
  rep.reverb_rate = reverb / n;
  for (const auto& [kind, count] : rep.kind_counts)
    rep.kind_freqs[kind] =
        rep.segments > 0 ? static_cast<double>(count) / static_cast<double>(rep.segments) : 0.0;

  detail::flag_if_deviates(rep, "harmony", rep.harmony_rate, expected.effects.p_h, rep.records);
  detail::flag_if_deviates(rep, "echo", rep.echo_rate, expected.effects.p_e, rep.records);
  detail::flag_if_deviates(rep, "reverb", rep.reverb_rate, expected.effects.p_r, rep.records);
  if (rep.segments > 0) {
    const auto& p = expected.perturbation;
    detail::flag_if_deviates(rep, "jitter", rep.kind_freqs["jitter"], p.p_jit, rep.segments);
    detail::flag_if_deviates(rep, "glide", rep.kind_freqs["glide"], p.p_gld, rep.segments);
    detail::flag_if_deviates(rep, "jump", rep.kind_freqs["jump"], p.p_jmp, rep.segments);
    detail::flag_if_deviates(rep, "none", rep.kind_freqs["none"],
                             1.0 - p.p_jit - p.p_gld - p.p_jmp, rep.segments);
  }
  return rep;
}

inline nlohmann::json report_to_json(const StatsReport& r) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [count, files] : r.segment_count_histogram)
    hist[std::to_string(count)] = files;
  return nlohmann::json{{"records", r.records},
                        {"error_entries", r.error_entries},
                        {"malformed_lines", r.malformed_lines},
                        {"segments", r.segments},
                        {"harmony_rate", r.harmony_rate},
                        {"echo_rate", r.echo_rate},
                        {"reverb_rate", r.reverb_rate},
                        {"kind_counts", r.kind_counts},
                        {"kind_freqs", r.kind_freqs},
                        {"segment_count_histogram", hist},
                        {"flags", r.flags}};
}

}  // namespace svcforge::pipeline
