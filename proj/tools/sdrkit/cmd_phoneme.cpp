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
#include "sdrkit/phoneme.hpp"

namespace sdrkit::cli {
namespace {

struct PhonemeOptions {
  CommonOptions common;
  std::string align;
  std::vector<std::string> paths;  // est mix clean noise
  std::string list;
  std::string label = "est";
  std::string aggregation = "concat";
};

struct ItemTable {
  CategoryTable table;
  std::size_t unknown_phones = 0;
};

ItemTable RunItem(const std::vector<std::filesystem::path>& p, const PhonemeOptions& opt,
                  const MetricConfig& cfg, CategoryAggregation mode) {
  const Alignment a = LoadAlignment(p[0]);
  const AudioBuffer est = LoadAudio(p[1]), mix = LoadAudio(p[2]);
  const AudioBuffer clean = LoadAudio(p[3]), noise = LoadAudio(p[4]);
  const int sr = clean.sample_rate();
  for (const AudioBuffer* b : {&est, &mix, &noise})
    if (b->sample_rate() != sr)
      Fail(ErrorCode::kSampleRateMismatch, "phoneme: inputs differ in sample rate");
  const std::size_t ref = opt.common.ref_channel;
  return {PerCategoryMetrics(Channel(est, ref), Channel(mix, ref), Channel(clean, ref),
                             Channel(noise, ref), sr, a.segments, cfg, mode),
          a.unknown_phones};
}

int RunPhoneme(const PhonemeOptions& opt) {
  std::vector<std::vector<std::filesystem::path>> items;
  if (!opt.list.empty()) {
    if (!opt.paths.empty() || !opt.align.empty())
      throw UsageError("phoneme: give either --align with four paths or --list, not both");
    items = ReadFileList(opt.list, 5);
  } else {
    if (opt.align.empty() || opt.paths.size() != 4)
      throw UsageError("phoneme: expected --align CSV EST MIX CLEAN NOISE");
    items.push_back({opt.align, opt.paths[0], opt.paths[1], opt.paths[2], opt.paths[3]});
  }
  MetricConfig cfg = opt.common.Metrics();
  cfg.stft.Validate();
  const CategoryAggregation mode = opt.aggregation == "segment-mean"
                                       ? CategoryAggregation::kSegmentMean
                                       : CategoryAggregation::kConcatenate;

  const bool batch = !opt.list.empty();
  std::vector<std::variant<ItemTable, ItemError>> results(items.size());
  ParallelFor(items.size(), opt.common.jobs, [&](std::size_t i) {
    if (!batch) {
      results[i] = RunItem(items[i], opt, cfg, mode);
      return;
    }
    try {
      results[i] = RunItem(items[i], opt, cfg, mode);
    } catch (...) {
      results[i] = CaptureItemError(i, items[i][1].string());
    }
  });

  std::vector<CategoryTable> tables;
  std::vector<ItemError> errors;
  std::size_t unknown = 0;
  for (const auto& r : results) {
    if (const auto* t = std::get_if<ItemTable>(&r)) {
      tables.push_back(t->table);
      unknown += t->unknown_phones;
    } else {
      errors.push_back(std::get<ItemError>(r));
    }
  }
  const CategoryTable table = AverageTables(tables);
  if (unknown > 0) spdlog::warn("phoneme: {} unrecognised phone labels counted as 'other'", unknown);
  if (table.truncated_segments > 0)
    spdlog::warn("phoneme: {} segments truncated at the end of the audio", table.truncated_segments);

  if (opt.common.format == OutputFormat::kCsv) {
    std::cout << PhonemeCsvHeader() << '\n';
    for (const CategoryRow& row : table.rows) std::cout << PhonemeCsvRow(opt.label, row) << '\n';
  } else {
    Json out;
    out["loss"] = opt.label;
    out["utterances"] = tables.size();
    out["truncated_segments"] = table.truncated_segments;
    out["unknown_phones"] = unknown;
    out["rows"] = Json::array();
    for (const CategoryRow& row : table.rows) {
      Json j = Json::parse(ReportToJson(row.report));
      j.erase("stoi_in");
      j.erase("stoi_out");
      Json r;
      r["phoneme"] = CategoryName(row.category);
      r.update(j);
      out["rows"].push_back(std::move(r));
    }
    PrintJson(out);
  }
  return FinishBatch(errors, items.size());
}

}  // namespace

void RegisterPhoneme(CLI::App& app, Action& action) {
  auto opt = std::make_shared<PhonemeOptions>();
  CLI::App* sub = app.add_subcommand("phoneme", "Metrics per phoneme category");
  AddCommonOptions(sub, &opt->common);
  sub->add_option("--align", opt->align, "Alignment CSV with header start,end,phone");
  sub->add_option("paths", opt->paths, "EST MIX CLEAN NOISE wav files");
  sub->add_option("--list", opt->list, "CSV file list: align,est,mix,clean,noise per line");
  sub->add_option("--label", opt->label, "Value of the Loss column");
  sub->add_option("--aggregation", opt->aggregation,
                  "concat: splice spans per category; segment-mean: average per span")
      ->check(CLI::IsMember({"concat", "segment-mean"}));
  sub->callback([opt, &action] { action = [opt] { return RunPhoneme(*opt); }; });
}

}  // namespace sdrkit::cli
