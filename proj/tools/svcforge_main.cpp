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

// svcforge: deterministic augmentation toolkit for singing-voice corpora.
//
// One subcommand per pipeline stage. Machine-readable one-line JSON goes to
// stdout; human diagnostics go to stderr. Exit codes: 0 success, 1 I/O
// failure, 2 invalid arguments or config, 3 partial batch failure.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "svcforge/svcforge.hpp"

namespace {

namespace sf = svcforge;
namespace fs = std::filesystem;

void emit(const nlohmann::json& j) { std::cout << j.dump() << '\n'; }

void diag(const std::string& msg) { std::cerr << "svcforge: " << msg << '\n'; }

sf::pipeline::PipelineConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return {};
  try {
    return sf::pipeline::load_config(path);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config file " + path + " is not valid JSON: " + e.what());
  }
}

// Config/argument problems exit 2 and list every violation at once.
void require_valid(const std::vector<std::string>& errs) {
  if (errs.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : errs) msg += "\n  - " + e;
  throw std::invalid_argument(msg);
}

sf::f0::F0Contour load_contour_checked(const std::string& path) {
  try {
    return sf::f0::load_contour(path);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed contour JSON " + path + ": " + e.what());
  }
}

struct ForceSpec {
  sf::fx::EffectTrace trace;
  bool any = false;
};

// --force harmony=+7 | echo=<delay_s>:<feedback> | reverb=<rt60_s>
// When any --force is present, exactly the forced effects fire.
ForceSpec parse_forces(const std::vector<std::string>& forces, std::uint64_t seed) {
  ForceSpec f;
  f.trace.seed = seed;
  for (const auto& spec : forces) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("--force expects <effect>=<params>, got '" + spec + "'");
    const std::string name = spec.substr(0, eq);
    const std::string val = spec.substr(eq + 1);
    try {
      if (name == "harmony") {
        f.trace.harmony_applied = true;
        f.trace.harmony_interval = std::stod(val);
      } else if (name == "echo") {
        const auto colon = val.find(':');
        if (colon == std::string::npos)
          throw std::invalid_argument("echo force expects <delay_s>:<feedback>");
        f.trace.echo_applied = true;
        f.trace.echo_delay_s = std::stod(val.substr(0, colon));
        f.trace.echo_feedback = std::stod(val.substr(colon + 1));
      } else if (name == "reverb") {
        f.trace.reverb_applied = true;
        f.trace.reverb_rt60_s = std::stod(val);
      } else {
        throw std::invalid_argument("unknown effect '" + name + "' in --force");
      }
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse --force value '" + spec + "'");
    }
  }
  f.any = !forces.empty();
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"svcforge — seeded F0 perturbation, wet-sound simulation, and "
               "harmonic-noise excitation for singing-voice training data"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "pipeline config JSON file");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit master seed")
                       ->envname("SVC_FORGE_SEED")
                       ->capture_default_str();

  // extract-f0
  auto* c_ext = app.add_subcommand("extract-f0", "extract an F0 contour from a WAV file");
  c_ext->fallthrough();
  std::string ext_in, ext_out;
  double fmin = sf::f0::kDefaultF0Range.lo, fmax = sf::f0::kDefaultF0Range.hi;
  c_ext->add_option("--in", ext_in, "input WAV")->required();
  c_ext->add_option("--out", ext_out, "output contour JSON")->required();
  auto* fmin_opt = c_ext->add_option("--fmin", fmin, "lowest detectable F0 in Hz")
                       ->capture_default_str();
  auto* fmax_opt = c_ext->add_option("--fmax", fmax, "highest detectable F0 in Hz")
                       ->capture_default_str();

  // perturb-f0
  auto* c_pert = app.add_subcommand("perturb-f0", "apply seeded jitter/glide/jump segments");
  c_pert->fallthrough();
  std::string pert_in, pert_out, pert_plan_out;
  c_pert->add_option("--in", pert_in, "input contour JSON")->required();
  c_pert->add_option("--out", pert_out, "output contour JSON")->required();
  c_pert->add_option("--plan-out", pert_plan_out, "also write the segment plan JSON");

  // fx
  auto* c_fx = app.add_subcommand("fx", "run the harmony/echo/reverb chain on a WAV");
  c_fx->fallthrough();
  std::string fx_in, fx_out, fx_trace_out, fx_depth = "float32";
  std::vector<std::string> fx_forces;
  double mix_h = 0.4, mix_e = 0.35, mix_r = 0.5;
  c_fx->add_option("--in", fx_in, "input WAV")->required();
  c_fx->add_option("--out", fx_out, "output WAV")->required();
  c_fx->add_option("--trace-out", fx_trace_out, "also write the effect trace JSON");
  c_fx->add_option("--force", fx_forces,
                   "force an effect: harmony=<st> | echo=<delay_s>:<fb> | reverb=<rt60_s>; "
                   "when present, only forced effects fire");
  auto* mix_h_opt = c_fx->add_option("--mix-h", mix_h, "harmony wet mix")->capture_default_str();
  auto* mix_e_opt = c_fx->add_option("--mix-e", mix_e, "echo wet mix")->capture_default_str();
  auto* mix_r_opt = c_fx->add_option("--mix-r", mix_r, "reverb wet mix")->capture_default_str();
  c_fx->add_option("--bit-depth", fx_depth, "output depth: 16 | 24 | float32")
      ->capture_default_str();

  // excite
  auto* c_exc = app.add_subcommand("excite", "generate harmonic+noise excitation from a contour");
  c_exc->fallthrough();
  std::string exc_f0, exc_out, exc_mask_out, exc_depth = "float32";
  sf::nsf::NsfConfig nsf_defaults;
  int harmonics = nsf_defaults.num_harmonics;
  double amplitude = nsf_defaults.sine_amplitude;
  double noise_std = nsf_defaults.noise_std;
  c_exc->add_option("--f0", exc_f0, "input contour JSON")->required();
  c_exc->add_option("--out", exc_out, "output WAV")->required();
  c_exc->add_option("--harmonics", harmonics, "number of sine harmonics")->capture_default_str();
  c_exc->add_option("--amplitude", amplitude, "per-harmonic sine amplitude")
      ->capture_default_str();
  c_exc->add_option("--noise-std", noise_std, "unvoiced Gaussian noise std")
      ->capture_default_str();
  c_exc->add_option("--mask-out", exc_mask_out, "also write voiced mask JSON (0/1 per sample)");
  c_exc->add_option("--bit-depth", exc_depth, "output depth: 16 | 24 | float32")
      ->capture_default_str();

  // run
  auto* c_run = app.add_subcommand("run", "batch-augment a corpus and write a manifest");
  c_run->fallthrough();
  std::string run_in, run_out;
  int jobs = 1;
  c_run->add_option("--in", run_in, "input directory (scanned recursively for .wav)")
      ->required();
  c_run->add_option("--out", run_out, "output directory")->required();
  c_run->add_option("--jobs", jobs, "worker thread count")->capture_default_str();

  // stats
  auto* c_stats = app.add_subcommand("stats", "summarize a manifest and flag rate deviations");
  c_stats->fallthrough();
  std::string stats_manifest;
  c_stats->add_option("manifest", stats_manifest, "manifest.jsonl path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    sf::pipeline::PipelineConfig cfg = load_config_or_default(config_path);
    if (seed_opt->count() > 0) cfg.master_seed = seed;

    if (app.got_subcommand(c_ext)) {
      const sf::Waveform w = sf::load_waveform(ext_in);
      sf::FrameSpec spec = cfg.frame;
      spec.sample_rate = w.sample_rate;
      sf::Range range = cfg.f0_range;
      if (fmin_opt->count() > 0) range.lo = fmin;
      if (fmax_opt->count() > 0) range.hi = fmax;
      const auto contour = sf::f0::extract_f0(w, spec, range);
      sf::f0::save_contour(contour, ext_out);
      std::size_t voiced = 0;
      for (double v : contour.values_hz) voiced += v > 0.0 ? 1 : 0;
      emit({{"command", "extract-f0"},
            {"out", ext_out},
            {"frames", contour.values_hz.size()},
            {"voiced_frames", voiced}});
      return 0;
    }

    if (app.got_subcommand(c_pert)) {
      require_valid(sf::f0::validate(cfg.perturbation));
      const auto contour = load_contour_checked(pert_in);
      const auto [pert, plan] = sf::f0::perturb_f0(contour, cfg.perturbation, cfg.master_seed);
      sf::f0::save_contour(pert, pert_out);
      if (!pert_plan_out.empty()) {
        std::ofstream out(pert_plan_out);
        if (!out) throw std::runtime_error("cannot write plan file: " + pert_plan_out);
        out << sf::f0::plan_to_json(plan).dump(2) << '\n';
      }
      emit({{"command", "perturb-f0"},
            {"out", pert_out},
            {"seed", cfg.master_seed},
            {"plan", sf::f0::plan_to_json(plan)}});
      return 0;
    }

    if (app.got_subcommand(c_fx)) {
      if (mix_h_opt->count() > 0) cfg.effects.mix_h = mix_h;
      if (mix_e_opt->count() > 0) cfg.effects.mix_e = mix_e;
      if (mix_r_opt->count() > 0) cfg.effects.mix_r = mix_r;
      require_valid(sf::fx::validate(cfg.effects));
      const sf::Waveform w = sf::load_waveform(fx_in);
      const ForceSpec force = parse_forces(fx_forces, cfg.master_seed);
      sf::Waveform out;
      sf::fx::EffectTrace trace;
      if (force.any) {
        trace = force.trace;
        out = sf::fx::apply_trace(w, cfg.effects, trace);
      } else {
        auto [y, t] = sf::fx::apply_chain(w, cfg.effects, cfg.master_seed);
        out = std::move(y);
        trace = t;
      }
      sf::save_waveform(out, fx_out, sf::bit_depth_from_string(fx_depth));
      if (!fx_trace_out.empty()) {
        std::ofstream tf(fx_trace_out);
        if (!tf) throw std::runtime_error("cannot write trace file: " + fx_trace_out);
        tf << sf::fx::trace_to_json(trace).dump(2) << '\n';
      }
      emit({{"command", "fx"}, {"out", fx_out}, {"trace", sf::fx::trace_to_json(trace)}});
      return 0;
    }

    if (app.got_subcommand(c_exc)) {
      const auto contour = load_contour_checked(exc_f0);
      sf::nsf::NsfConfig ncfg;
      ncfg.num_harmonics = harmonics;
      ncfg.sine_amplitude = amplitude;
      ncfg.noise_std = noise_std;
      ncfg.sample_rate = contour.frame_spec.sample_rate;
      require_valid(sf::nsf::validate(ncfg));
      const auto exc = sf::nsf::generate_excitation(contour, ncfg, cfg.master_seed);
      sf::Waveform w;
      w.samples = exc.samples;
      w.sample_rate = exc.sample_rate;
      sf::save_waveform(w, exc_out, sf::bit_depth_from_string(exc_depth));
      if (!exc_mask_out.empty()) {
        nlohmann::json mask = nlohmann::json::array();
        for (auto v : exc.voiced_mask) mask.push_back(static_cast<int>(v));
        std::ofstream mf(exc_mask_out);
        if (!mf) throw std::runtime_error("cannot write mask file: " + exc_mask_out);
        mf << mask.dump() << '\n';
      }
      std::size_t voiced = 0;
      for (auto v : exc.voiced_mask) voiced += v;
      emit({{"command", "excite"},
            {"out", exc_out},
            {"samples", exc.samples.size()},
            {"voiced_samples", voiced},
            {"seed", cfg.master_seed}});
      return 0;
    }

    if (app.got_subcommand(c_run)) {
      cfg.output_dir = run_out;
      require_valid(sf::pipeline::validate(cfg));
      const auto inputs = sf::pipeline::collect_inputs(run_in);
      const auto result = sf::pipeline::run_batch(inputs, cfg, jobs);
      emit({{"command", "run"},
            {"manifest", result.manifest_path.generic_string()},
            {"succeeded", result.succeeded},
            {"failed", result.failed},
            {"master_seed", cfg.master_seed}});
      if (result.failed > 0 && result.succeeded > 0) return 3;
      if (result.succeeded == 0) return 1;
      return 0;
    }

    if (app.got_subcommand(c_stats)) {
      sf::pipeline::PipelineConfig expected = cfg;
      if (config_path.empty()) {
        const fs::path sibling = fs::path(stats_manifest).parent_path() / "config.json";
        if (fs::exists(sibling)) expected = sf::pipeline::load_config(sibling.string());
      }
      const auto report = sf::pipeline::stats_report(stats_manifest, expected);
      for (const auto& f : report.flags) diag(f);
      emit(sf::pipeline::report_to_json(report));
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    diag(e.what());
    return 2;
  } catch (const std::exception& e) {
    diag(e.what());
    return 1;
  }
  return 2;
}
