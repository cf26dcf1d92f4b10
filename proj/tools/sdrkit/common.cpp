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

#include "common.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "sdrkit/wav.hpp"

namespace sdrkit::cli {

StftConfig CommonOptions::Stft() const {
  StftConfig c;
  c.fft_size = stft_size;
  c.hop = hop;
  return c;
}

MelOptions CommonOptions::Mel() const {
  MelOptions m;
  m.bands = mel_bands;
  return m;
}

std::optional<ClampRange> CommonOptions::Clamp() const {
  if (clamp_db.empty()) return std::nullopt;
  const auto comma = clamp_db.find(',');
  double lo = 0.0, hi = 0.0;
  try {
    if (comma == std::string::npos) throw std::invalid_argument("no comma");
    std::size_t used_lo = 0, used_hi = 0;
    const std::string a = clamp_db.substr(0, comma), b = clamp_db.substr(comma + 1);
    lo = std::stod(a, &used_lo);
    hi = std::stod(b, &used_hi);
    if (used_lo != a.size() || used_hi != b.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw UsageError("--clamp-db expects 'lo,hi', got '" + clamp_db + "'");
  }
  if (!(lo < hi)) throw UsageError("--clamp-db needs lo < hi");
  return ClampRange{lo, hi};
}

MetricConfig CommonOptions::Metrics() const {
  MetricConfig m;
  m.stft = Stft();
  m.mel = Mel();
  m.gamma = gamma;
  m.ref_channel = ref_channel;
  if (auto c = Clamp()) m.fw_clamp = *c;
  return m;
}

LossConfig CommonOptions::Loss(LossId id, int sample_rate) const {
  LossConfig c = LossConfig::FromId(id);
  c.gamma = gamma;
  c.stft = Stft();
  c.sample_rate = sample_rate;
  c.mel = Mel();
  if (auto r = Clamp()) c.clamp = *r;
  return c;
}

void AddCommonOptions(CLI::App* app, CommonOptions* opt) {
  app->option_defaults()->always_capture_default();
  app->add_option("--stft-size", opt->stft_size, "STFT size in samples");
  app->add_option("--hop", opt->hop, "STFT hop in samples");
  app->add_option("--mel-bands", opt->mel_bands, "Number of Mel bands");
  app->add_option("--gamma", opt->gamma, "Spectral-magnitude weighting exponent");
  app->add_option("--ref-channel", opt->ref_channel, "Reference microphone channel");
  app->add_option("--clamp-db", opt->clamp_db, "Clamp range for per-bin ratios, 'lo,hi'");
  app->add_option("--seed", opt->seed, "Random seed");
  app->add_option("--jobs", opt->jobs, "Worker threads")->check(CLI::Range(1u, 1024u));
  const std::map<std::string, OutputFormat> formats{{"json", OutputFormat::kJson},
                                                    {"csv", OutputFormat::kCsv}};
  app->add_option("--format", opt->format, "Output format: json or csv")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return kExitUsage;
    case ErrorCode::kMissingFile:
    case ErrorCode::kIoFailure:
    case ErrorCode::kMalformedHeader:
    case ErrorCode::kUnsupportedCodec:
    case ErrorCode::kSampleRateMismatch:
      return kExitIo;
    case ErrorCode::kTooShort:
    case ErrorCode::kDegenerate:
      return kExitDegenerate;
  }
  return kExitCheckFailed;
}

std::string ErrorRecord(std::string_view code, int exit_code, std::string_view message) {
  Json j;
  j["error"]["code"] = code;
  j["error"]["exit_code"] = exit_code;
  j["error"]["message"] = message;
  return j.dump();
}

AudioBuffer LoadAudio(const std::filesystem::path& path) {
  spdlog::debug("reading {}", path.string());
  return ReadWav(path);
}

std::vector<std::filesystem::path> ListWavFiles(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir))
    Fail(ErrorCode::kMissingFile, dir.string() + ": not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    std::string ext = entry.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (entry.is_regular_file() && ext == ".wav") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

Signal Channel(const AudioBuffer& buffer, std::size_t ref) {
  Require(ref < buffer.channels(), "--ref-channel " + std::to_string(ref) + " out of range (" +
                                       std::to_string(buffer.channels()) + " channels)");
  const auto c = buffer.channel(ref);
  return Signal(c.begin(), c.end());
}

std::vector<std::vector<std::filesystem::path>> ReadFileList(const std::filesystem::path& list,
                                                             std::size_t columns) {
  std::ifstream in(list);
  if (!in) {
    if (!std::filesystem::exists(list)) Fail(ErrorCode::kMissingFile, list.string() + ": no such file");
    Fail(ErrorCode::kIoFailure, list.string() + ": cannot open");
  }
  const std::filesystem::path base = list.parent_path();
  std::vector<std::vector<std::filesystem::path>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<std::filesystem::path> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      const auto a = field.find_first_not_of(" \t");
      const auto b = field.find_last_not_of(" \t");
      std::filesystem::path p = a == std::string::npos ? "" : field.substr(a, b - a + 1);
      row.push_back(p.is_relative() ? base / p : p);
    }
    if (row.size() != columns)
      Fail(ErrorCode::kMalformedHeader, list.string() + ":" + std::to_string(line_no) +
                                            ": expected " + std::to_string(columns) + " paths");
    rows.push_back(std::move(row));
  }
  return rows;
}

Json JsonNumber(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

void PrintJson(const Json& j) { std::cout << j.dump(2) << '\n'; }

ItemError CaptureItemError(std::size_t index, const std::string& path) {
  ItemError e{index, path, "internal", "unknown failure"};
  try {
    throw;
  } catch (const Error& err) {
    e.code = ErrorCodeName(err.code());
    e.message = err.what();
  } catch (const std::exception& err) {
    e.message = err.what();
  }
  return e;
}

int FinishBatch(const std::vector<ItemError>& errors, std::size_t total) {
  for (const ItemError& e : errors) {
    Json j;
    j["error"]["code"] = e.code;
    j["error"]["item"] = e.index;
    j["error"]["path"] = e.path;
    j["error"]["message"] = e.message;
    std::cerr << j.dump() << '\n';
  }
  if (errors.empty()) return kExitOk;
  spdlog::error("{} of {} items failed", errors.size(), total);
  return kExitPartialBatch;
}

}  // namespace sdrkit::cli
