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

#include <fstream>
#include <iostream>
#include <memory>

#include <spdlog/spdlog.h>

#include "common.hpp"

namespace sdrkit::cli {
namespace {

struct LossOptions {
  CommonOptions common;
  std::vector<std::string> ids;
  std::vector<std::string> paths;  // est clean noise
  std::string map_csv;
  std::string weight_source = "estimate";
};

void WriteBinDbCsv(std::ostream& out, const RealMatrix& m) {
  out << "bin,frame,db\n";
  out.precision(17);
  for (std::size_t b = 0; b < m.rows(); ++b)
    for (std::size_t t = 0; t < m.cols(); ++t) out << b << ',' << t << ',' << m(b, t) << '\n';
}

void WriteMap(const std::string& path, const LossValue& v, LossId id) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIoFailure, path + ": cannot open for writing");
  if (v.weights)
    WriteWeightMapCsv(out, *v.weights);
  else if (v.bin_db)
    WriteBinDbCsv(out, *v.bin_db);
  else
    spdlog::warn("{} has no per-bin map; {} left empty", LossIdName(id), path);
  if (!out) Fail(ErrorCode::kIoFailure, path + ": write failed");
}

int RunLoss(const LossOptions& opt) {
  if (opt.paths.size() != 3) throw UsageError("loss: expected EST CLEAN NOISE");
  std::vector<LossId> ids;
  for (const std::string& s : opt.ids) {
    const auto id = ParseLossId(s);
    if (!id) throw UsageError("loss: unknown loss id '" + s + "'");
    ids.push_back(*id);
  }
  if (!opt.map_csv.empty() && ids.size() != 1)
    throw UsageError("loss: --map-csv needs exactly one --id");

  const AudioBuffer est = LoadAudio(opt.paths[0]);
  const AudioBuffer clean = LoadAudio(opt.paths[1]);
  const AudioBuffer noise = LoadAudio(opt.paths[2]);
  if (est.sample_rate() != clean.sample_rate() || est.sample_rate() != noise.sample_rate())
    Fail(ErrorCode::kSampleRateMismatch, "loss: inputs differ in sample rate");
  const std::size_t ref = opt.common.ref_channel;
  const Signal e = Channel(est, ref), c = Channel(clean, ref), n = Channel(noise, ref);

  std::vector<double> values;
  for (LossId id : ids) {
    LossConfig cfg = opt.common.Loss(id, est.sample_rate());
    cfg.weight_source = opt.weight_source == "oracle" ? WeightSource::kOracleMixture
                                                      : WeightSource::kEstimate;
    const LossValue v = SdrLoss(cfg).Evaluate(e, c, n);
    if (!opt.map_csv.empty()) WriteMap(opt.map_csv, v, id);
    values.push_back(v.value);
  }

  if (opt.common.format == OutputFormat::kCsv) {
    std::cout << "Loss,value\n";
    for (std::size_t i = 0; i < ids.size(); ++i)
      std::cout << LossIdName(ids[i]) << ',' << FormatCsvNumber(values[i]) << '\n';
    return kExitOk;
  }
  Json out = Json::array();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Json row;
    row["id"] = LossIdName(ids[i]);
    row["value"] = JsonNumber(values[i]);
    out.push_back(std::move(row));
  }
  PrintJson(ids.size() == 1 ? out[0] : out);
  return kExitOk;
}

}  // namespace

void RegisterLoss(CLI::App& app, Action& action) {
  auto opt = std::make_shared<LossOptions>();
  CLI::App* sub = app.add_subcommand("loss", "Evaluate loss functions on one triple");
  AddCommonOptions(sub, &opt->common);
  sub->add_option("--id", opt->ids, "Loss id L1..L11 (repeatable)")->required()->allow_extra_args(false);
  sub->add_option("paths", opt->paths, "EST CLEAN NOISE wav files");
  sub->add_option("--map-csv", opt->map_csv, "Write the weight or per-bin dB map as CSV");
  sub->add_option("--weight-source", opt->weight_source,
                  "SIR weight source for L8-L11: estimate or oracle")
      ->check(CLI::IsMember({"estimate", "oracle"}));
  sub->callback([opt, &action] { action = [opt] { return RunLoss(*opt); }; });
}

}  // namespace sdrkit::cli
