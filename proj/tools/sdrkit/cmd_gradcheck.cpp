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

#include "common.hpp"
#include "sdrkit/parallel.hpp"

namespace sdrkit::cli {
namespace {

struct GradcheckOptions {
  CommonOptions common;
  std::vector<std::string> ids;
  std::size_t trials = 10;
  std::size_t length = 1024;
  double step = 1e-5;
  double tolerance = 1e-5;
  int sample_rate = 16000;
};

int RunGradcheck(const GradcheckOptions& opt) {
  std::vector<LossId> ids;
  for (const std::string& s : opt.ids) {
    const auto id = ParseLossId(s);
    if (!id) throw UsageError("gradcheck: unknown loss id '" + s + "'");
    ids.push_back(*id);
  }
  if (ids.empty()) ids = AllLossIds();
  if (opt.trials == 0 || opt.length == 0) throw UsageError("gradcheck: trials and length must be positive");

  std::vector<GradCheckReport> reports(ids.size());
  ParallelFor(ids.size(), opt.common.jobs, [&](std::size_t i) {
    reports[i] = GradCheck(opt.common.Loss(ids[i], opt.sample_rate), opt.trials, opt.length,
                           opt.common.seed, opt.step);
  });

  bool all_pass = true;
  for (const auto& r : reports) all_pass = all_pass && r.max_relative_error < opt.tolerance;

  if (opt.common.format == OutputFormat::kCsv) {
    std::cout << "Loss,trials,length,max_rel_error,pass\n";
    for (const auto& r : reports)
      std::cout << LossIdName(r.id) << ',' << r.trials << ',' << r.length << ','
                << FormatCsvNumber(r.max_relative_error) << ','
                << (r.max_relative_error < opt.tolerance ? "true" : "false") << '\n';
  } else {
    Json out = Json::array();
    for (const auto& r : reports) {
      Json row;
      row["id"] = LossIdName(r.id);
      row["trials"] = r.trials;
      row["length"] = r.length;
      row["seed"] = r.seed;
      row["step"] = r.step;
      row["max_relative_error"] = JsonNumber(r.max_relative_error);
      row["pass"] = r.max_relative_error < opt.tolerance;
      out.push_back(std::move(row));
    }
    PrintJson(out);
  }
  return all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

void RegisterGradcheck(CLI::App& app, Action& action) {
  auto opt = std::make_shared<GradcheckOptions>();
  CLI::App* sub = app.add_subcommand(
      "gradcheck", "Compare analytic gradients with central finite differences");
  AddCommonOptions(sub, &opt->common);
  sub->add_option("--id", opt->ids, "Loss id L1..L11 (repeatable; default all)")->allow_extra_args(false);
  sub->add_option("--trials", opt->trials, "Random triples per loss");
  sub->add_option("--length", opt->length, "Samples per triple");
  sub->add_option("--step", opt->step, "Finite-difference step");
  sub->add_option("--tol", opt->tolerance, "Pass threshold on max relative error");
  sub->add_option("--sample-rate", opt->sample_rate, "Sample rate assumed for the triples");
  sub->callback([opt, &action] { action = [opt] { return RunGradcheck(*opt); }; });
}

}  // namespace sdrkit::cli
