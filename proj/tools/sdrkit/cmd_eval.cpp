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
#include <variant>

#include <spdlog/spdlog.h>

#include "common.hpp"
#include "sdrkit/parallel.hpp"

namespace sdrkit::cli {
namespace {

struct EvalOptions {
  CommonOptions common;
  std::vector<std::string> paths;  // est mix clean noise
  std::string list;
  bool no_stoi = false;
};

MetricReport EvaluateItem(const std::vector<std::filesystem::path>& p, const MetricConfig& cfg) {
  const AudioBuffer est = LoadAudio(p[0]), mix = LoadAudio(p[1]);
  const AudioBuffer clean = LoadAudio(p[2]), noise = LoadAudio(p[3]);
  return Report(mix, est, clean, noise, cfg);
}

int RunEval(const EvalOptions& opt) {
  std::vector<std::vector<std::filesystem::path>> items;
  if (!opt.list.empty()) {
    if (!opt.paths.empty()) throw UsageError("eval: give either four paths or --list, not both");
    items = ReadFileList(opt.list, 4);
  } else {
    if (opt.paths.size() != 4) throw UsageError("eval: expected EST MIX CLEAN NOISE");
    items.push_back({opt.paths.begin(), opt.paths.end()});
  }
  MetricConfig cfg = opt.common.Metrics();
  cfg.with_stoi = !opt.no_stoi;
  cfg.stft.Validate();

  const bool batch = !opt.list.empty();
  std::vector<std::variant<MetricReport, ItemError>> results(items.size());
  ParallelFor(items.size(), opt.common.jobs, [&](std::size_t i) {
    if (!batch) {
      results[i] = EvaluateItem(items[i], cfg);
      return;
    }
    try {
      results[i] = EvaluateItem(items[i], cfg);
    } catch (...) {
      results[i] = CaptureItemError(i, items[i][0].string());
    }
  });

  std::vector<ItemError> errors;
  if (opt.common.format == OutputFormat::kCsv) {
    std::cout << ReportCsvHeader() << '\n';
    for (const auto& r : results) {
      if (const auto* report = std::get_if<MetricReport>(&r))
        std::cout << ReportToCsvRow(*report) << '\n';
      else
        errors.push_back(std::get<ItemError>(r));
    }
  } else if (!batch) {
    PrintJson(Json::parse(ReportToJson(std::get<MetricReport>(results[0]))));
  } else {
    Json out = Json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      if (const auto* report = std::get_if<MetricReport>(&results[i])) {
        Json row;
        row["est"] = items[i][0].string();
        row["report"] = Json::parse(ReportToJson(*report));
        out.push_back(std::move(row));
      } else {
        errors.push_back(std::get<ItemError>(results[i]));
      }
    }
    PrintJson(out);
  }
  return FinishBatch(errors, items.size());
}

}  // namespace

void RegisterEval(CLI::App& app, Action& action) {
  auto opt = std::make_shared<EvalOptions>();
  CLI::App* sub = app.add_subcommand("eval", "Evaluate an enhanced signal against its sources");
  AddCommonOptions(sub, &opt->common);
  sub->add_option("paths", opt->paths, "EST MIX CLEAN NOISE wav files");
  sub->add_option("--list", opt->list, "CSV file list: est,mix,clean,noise per line");
  sub->add_flag("--no-stoi", opt->no_stoi, "Skip STOI");
  sub->callback([opt, &action] { action = [opt] { return RunEval(*opt); }; });
}

}  // namespace sdrkit::cli
