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

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "svcforge/audio/frame_spec.hpp"

namespace svcforge::f0 {

// Frame-rate pitch track in Hz; 0 marks an unvoiced frame.
struct F0Contour {
  std::vector<double> values_hz;
  FrameSpec frame_spec;

  std::size_t size() const { return values_hz.size(); }
  bool voiced(std::size_t i) const { return values_hz[i] > 0.0; }
};

// On-disk format: {"sample_rate": int, "hop_size": int, "fft_size": int,
// "values_hz": [float, ...]}.
inline nlohmann::json contour_to_json(const F0Contour& c) {
  return nlohmann::json{{"sample_rate", c.frame_spec.sample_rate},
                        {"hop_size", c.frame_spec.hop_size},
                        {"fft_size", c.frame_spec.fft_size},
                        {"values_hz", c.values_hz}};
}

inline F0Contour contour_from_json(const nlohmann::json& j) {
  F0Contour c;
  c.frame_spec.sample_rate = j.at("sample_rate").get<int>();
  c.frame_spec.hop_size = j.at("hop_size").get<int>();
  c.frame_spec.fft_size = j.at("fft_size").get<int>();
  c.values_hz = j.at("values_hz").get<std::vector<double>>();
  c.frame_spec.validate();
  return c;
}

inline void save_contour(const F0Contour& c, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << contour_to_json(c).dump() << '\n';
  if (!out) throw std::runtime_error("write failure on '" + path.string() + "'");
}

inline F0Contour load_contour(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "' for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("'" + path.string() + "': invalid contour JSON: " + e.what());
  }
  return contour_from_json(j);
}

}  // namespace svcforge::f0
