/*
 * Copyright 2026 The sdrkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <variant>

#include <spdlog/spdlog.h>

#include "common.hpp"
#include "sdrkit/mixer.hpp"
#include "sdrkit/parallel.hpp"
#include "sdrkit/wav.hpp"

namespace sdrkit::cli {
namespace {

struct MixOptions {
  CommonOptions common;
  std::string manifest;
  std::string out_dir;
  std::string calibration = "post";
  bool pcm16 = false;
  // Planning mode.
  std::size_t plan = 0;
  std::string clean_dir, ssn_dir, eco_dir, rir_dir;
  double ssn_fraction = 0.3;
};

struct MixRecord {
  std::string mixture;
  double target_sir_db = 0.0;
  double achieved_sir_db = 0.0;
  double image_sir_db = 0.0;
  double gain = 0.0;
};

// Noise cut (or looped) to `length` samples from a seed-determined offset.
Signal FitNoise(std::span<const double> noise, std::size_t length, std::uint64_t seed) {
  if (noise.empty()) Fail(ErrorCode::kDegenerate, "mix: noise file is empty");
  std::size_t offset = 0;
  if (noise.size() > length) {
    std::mt19937_64 rng(seed);
    offset = static_cast<std::size_t>(rng() % (noise.size() - length + 1));
  }
  Signal out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = noise[(offset + i) % noise.size()];
  return out;
}

std::filesystem::path Resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_relative() ? base / path : path;
}

std::string ItemName(const char* kind, std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s_%05zu.wav", kind, index);
  return buf;
}

MixRecord RenderItem(const ManifestEntry& e, std::size_t index, const MixOptions& opt,
                     const std::filesystem::path& base) {
  const auto violations = ValidateGeometry(e.geometry);
  if (!violations.empty()) {
    std::string msg = "mix: geometry out of range:";
    for (const auto& v : violations) msg += " " + v + ";";
    Fail(ErrorCode::kInvalidArgument, msg);
  }
  const AudioBuffer clean = LoadAudio(Resolve(base, e.clean_path));
  const AudioBuffer noise = LoadAudio(Resolve(base, e.noise_path));
  const AudioBuffer rir_c = LoadAudio(Resolve(base, e.rir_clean_path));
  const AudioBuffer rir_n = LoadAudio(Resolve(base, e.rir_noise_path));
  if (noise.sample_rate() != clean.sample_rate())
    Fail(ErrorCode::kSampleRateMismatch, "mix: clean and noise differ in sample rate");

  const AudioBuffer noise_fit =
      AudioBuffer::Mono(FitNoise(noise.channel(0), clean.length(), e.seed), noise.sample_rate());
  MixSpec spec;
  spec.target_sir_db = e.target_sir_db;
  spec.ref_channel = opt.common.ref_channel;
  spec.seed = e.seed;
  const SpatialMix m = MixSources(clean, noise_fit, rir_c, rir_n, spec,
                                  opt.calibration == "pre" ? SirCalibration::kPreRir
                                                           : SirCalibration::kPostRir);

  const std::filesystem::path out(opt.out_dir);
  const WavFormat fmt = opt.pcm16 ? WavFormat::kPcm16 : WavFormat::kFloat32;
  const std::size_t clipped = WriteWav(m.mix.mixture, out / ItemName("mix", index), fmt).clipped_samples +
                              WriteWav(m.clean_image, out / ItemName("clean", index), fmt).clipped_samples +
                              WriteWav(m.mix.scaled_noise, out / ItemName("noise", index), fmt).clipped_samples;
  if (clipped > 0) spdlog::warn("mix: item {} clipped {} samples in PCM16 output", index, clipped);

  const std::size_t ref = opt.common.ref_channel;
  MixRecord r;
  r.mixture = (out / ItemName("mix", index)).string();
  r.target_sir_db = e.target_sir_db;
  r.achieved_sir_db = m.mix.achieved_sir_db;
  r.image_sir_db = 10.0 * std::log10(Energy(m.clean_image.channel(ref)) /
                                     Energy(m.mix.scaled_noise.channel(ref)));
  r.gain = m.mix.gain;
  return r;
}

int RunPlan(const MixOptions& opt) {
  ManifestPlanInputs in;
  const auto names = [](const std::string& dir) {
    std::vector<std::string> out;
    if (dir.empty()) return out;
    for (const auto& p : ListWavFiles(dir)) out.push_back(p.string());
    return out;
  };
  in.clean = names(opt.clean_dir);
  in.ssn = names(opt.ssn_dir);
  in.ecological = names(opt.eco_dir);
  in.rirs = names(opt.rir_dir);
  in.count = opt.plan;
  in.seed = opt.common.seed;
  in.ssn_fraction = opt.ssn_fraction;
  for (const ManifestEntry& e : PlanManifest(in)) std::cout << ManifestLineJson(e) << '\n';
  return kExitOk;
}

int RunMix(const MixOptions& opt) {
  if (opt.plan > 0) return RunPlan(opt);
  if (opt.manifest.empty() || opt.out_dir.empty())
    throw UsageError("mix: give --manifest and --out-dir, or --plan N with source directories");

  std::ifstream in(opt.manifest);
  if (!in) {
    if (!std::filesystem::exists(opt.manifest))
      Fail(ErrorCode::kMissingFile, opt.manifest + ": no such file");
    Fail(ErrorCode::kIoFailure, opt.manifest + ": cannot open");
  }
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      entries.push_back(ParseManifestLine(line));
    } catch (const Error& e) {
      Fail(e.code(), opt.manifest + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path base = std::filesystem::path(opt.manifest).parent_path();

  std::vector<std::variant<MixRecord, ItemError>> results(entries.size());
  ParallelFor(entries.size(), opt.common.jobs, [&](std::size_t i) {
    try {
      results[i] = RenderItem(entries[i], i, opt, base);
    } catch (...) {
      results[i] = CaptureItemError(i, entries[i].clean_path);
    }
  });

  std::vector<ItemError> errors;
  Json out = Json::array();
  if (opt.common.format == OutputFormat::kCsv)
    std::cout << "index,mixture,target_sir_db,achieved_sir_db,image_sir_db,gain\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto* r = std::get_if<MixRecord>(&results[i]);
    if (r == nullptr) {
      errors.push_back(std::get<ItemError>(results[i]));
      continue;
    }
    if (opt.common.format == OutputFormat::kCsv) {
      std::cout << i << ',' << r->mixture << ',' << FormatCsvNumber(r->target_sir_db) << ','
                << FormatCsvNumber(r->achieved_sir_db) << ',' << FormatCsvNumber(r->image_sir_db)
                << ',' << FormatCsvNumber(r->gain) << '\n';
    } else {
      Json row;
      row["index"] = i;
      row["mixture"] = r->mixture;
      row["target_sir_db"] = JsonNumber(r->target_sir_db);
      row["achieved_sir_db"] = JsonNumber(r->achieved_sir_db);
      row["image_sir_db"] = JsonNumber(r->image_sir_db);
      row["gain"] = JsonNumber(r->gain);
      out.push_back(std::move(row));
    }
  }
  if (opt.common.format == OutputFormat::kJson) PrintJson(out);
  return FinishBatch(errors, entries.size());
}

}  // namespace

void RegisterMix(CLI::App& app, Action& action) {
  auto opt = std::make_shared<MixOptions>();
  CLI::App* sub = app.add_subcommand("mix", "Render a mixture manifest or plan a new one");
  AddCommonOptions(sub, &opt->common);
  sub->add_option("--manifest", opt->manifest, "JSON-lines mixture manifest");
  sub->add_option("--out-dir", opt->out_dir, "Directory for rendered wav files");
  sub->add_option("--calibration", opt->calibration,
                  "Where the SIR is levelled: post (reverberant images) or pre (dry sources)")
      ->check(CLI::IsMember({"post", "pre"}));
  sub->add_flag("--pcm16", opt->pcm16, "Write 16-bit PCM instead of 32-bit float");
  sub->add_option("--plan", opt->plan, "Print a manifest of N sampled mixtures instead");
  sub->add_option("--clean-dir", opt->clean_dir, "Planning: clean speech directory");
  sub->add_option("--ssn-dir", opt->ssn_dir, "Planning: speech-shaped noise directory");
  sub->add_option("--eco-dir", opt->eco_dir, "Planning: ecological noise directory");
  sub->add_option("--rir-dir", opt->rir_dir, "Planning: room impulse response directory");
  sub->add_option("--ssn-fraction", opt->ssn_fraction, "Planning: share of SSN items")
      ->check(CLI::Range(0.0, 1.0));
  sub->callback([opt, &action] { action = [opt] { return RunMix(*opt); }; });
}

}  // namespace sdrkit::cli
