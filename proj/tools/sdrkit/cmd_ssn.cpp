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

#include <iostream>
#include <memory>

#include <spdlog/spdlog.h>

#include "common.hpp"
#include "sdrkit/mixer.hpp"
#include "sdrkit/wav.hpp"

namespace sdrkit::cli {
namespace {

struct SsnOptions {
  CommonOptions common;
  std::string corpus;
  double duration_s = 0.0;
  std::string out;
  bool pcm16 = false;
};

int RunSsn(const SsnOptions& opt) {
  if (!(opt.duration_s > 0.0)) throw UsageError("ssn: --dur must be positive");
  const auto files = ListWavFiles(opt.corpus);
  std::vector<AudioBuffer> corpus;
  for (const auto& f : files) corpus.push_back(LoadAudio(f));
  spdlog::info("ssn: {} corpus files from {}", corpus.size(), opt.corpus);

  const AudioBuffer ssn = GenerateSsn(corpus, opt.duration_s, opt.common.seed);
  const WavWriteReport w = WriteWav(ssn, opt.out, opt.pcm16 ? WavFormat::kPcm16 : WavFormat::kFloat32);
  if (w.clipped_samples > 0) spdlog::warn("ssn: {} samples clipped in PCM16 output", w.clipped_samples);

  Json j;
  j["out"] = opt.out;
  j["corpus_files"] = corpus.size();
  j["sample_rate"] = ssn.sample_rate();
  j["samples"] = ssn.length();
  j["seed"] = opt.common.seed;
  j["clipped_samples"] = w.clipped_samples;
  if (opt.common.format == OutputFormat::kCsv) {
    std::cout << "out,corpus_files,sample_rate,samples,seed,clipped_samples\n"
              << opt.out << ',' << corpus.size() << ',' << ssn.sample_rate() << ','
              << ssn.length() << ',' << opt.common.seed << ',' << w.clipped_samples << '\n';
  } else {
    PrintJson(j);
  }
  return kExitOk;
}

}  // namespace

void RegisterSsn(CLI::App& app, Action& action) {
  auto opt = std::make_shared<SsnOptions>();
  CLI::App* sub = app.add_subcommand("ssn", "Generate speech-shaped noise from a speech corpus");
  AddCommonOptions(sub, &opt->common);
  sub->add_option("--corpus", opt->corpus, "Directory of speech wav files")->required();
  sub->add_option("--dur", opt->duration_s, "Output duration in seconds")->required();
  sub->add_option("--out", opt->out, "Output wav path")->required();
  sub->add_flag("--pcm16", opt->pcm16, "Write 16-bit PCM instead of 32-bit float");
  sub->callback([opt, &action] { action = [opt] { return RunSsn(*opt); }; });
}

}  // namespace sdrkit::cli
