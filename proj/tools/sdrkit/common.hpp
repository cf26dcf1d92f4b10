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

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdrkit/audio.hpp"
#include "sdrkit/error.hpp"
#include "sdrkit/loss.hpp"
#include "sdrkit/metrics.hpp"

namespace sdrkit::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kExitOk = 0,
  kExitCheckFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitDegenerate = 4,
  kExitPartialBatch = 5,
};

// Bad flag values detected after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { kJson, kCsv };

// Flags shared by every subcommand.
struct CommonOptions {
  std::size_t stft_size = 512;
  std::size_t hop = 256;
  std::size_t mel_bands = 18;
  double gamma = 0.2;
  std::size_t ref_channel = 0;
  std::string clamp_db;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  OutputFormat format = OutputFormat::kJson;

  StftConfig Stft() const;
  MelOptions Mel() const;
  // Parsed --clamp-db "lo,hi", when given.
  std::optional<ClampRange> Clamp() const;
  MetricConfig Metrics() const;
  LossConfig Loss(LossId id, int sample_rate) const;
};

void AddCommonOptions(CLI::App* app, CommonOptions* opt);

// A subcommand registers itself and returns the action run after parsing.
using Action = std::function<int()>;

void RegisterEval(CLI::App& app, Action& action);
void RegisterLoss(CLI::App& app, Action& action);
void RegisterGradcheck(CLI::App& app, Action& action);
void RegisterSsn(CLI::App& app, Action& action);
void RegisterMix(CLI::App& app, Action& action);
void RegisterPhoneme(CLI::App& app, Action& action);

int ExitCodeFor(ErrorCode code);
// One-line machine-readable failure record.
std::string ErrorRecord(std::string_view code, int exit_code, std::string_view message);

AudioBuffer LoadAudio(const std::filesystem::path& path);
// Regular *.wav files in `dir`, sorted by path.
std::vector<std::filesystem::path> ListWavFiles(const std::filesystem::path& dir);
Signal Channel(const AudioBuffer& buffer, std::size_t ref);

// Rows of a comma-separated file list, `columns` paths per row. Blank lines
// and '#' comments are skipped; relative paths resolve against the list's
// directory.
std::vector<std::vector<std::filesystem::path>> ReadFileList(const std::filesystem::path& list,
                                                             std::size_t columns);

// Finite values as numbers, infinities as "inf" / "-inf".
Json JsonNumber(double v);

// Pretty JSON with a trailing newline.
void PrintJson(const Json& j);

// Outcome of one batch item, kept in input order.
struct ItemError {
  std::size_t index = 0;
  std::string path;
  std::string code;
  std::string message;
};

ItemError CaptureItemError(std::size_t index, const std::string& path);

// Logs item failures in input order and picks the summary exit code.
int FinishBatch(const std::vector<ItemError>& errors, std::size_t total);

}  // namespace sdrkit::cli
