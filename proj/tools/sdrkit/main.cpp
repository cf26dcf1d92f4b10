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

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "common.hpp"

namespace {

void SetupLogging() {
  auto logger = spdlog::stderr_logger_st("sdrkit");
  logger->set_pattern("[sdrkit] [%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SDRKIT_LOG")) {
    const auto level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string_view(env) != "off")
      spdlog::warn("SDRKIT_LOG='{}' is not a log level; keeping 'warn'", env);
    else
      spdlog::set_level(level);
  }
}

}  // namespace

int main(int argc, char** argv) {
  using namespace sdrkit::cli;
  SetupLogging();

  CLI::App app{"sdrkit: frequency-weighted SDR losses, metrics and mixture tools", "sdrkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sdrkit 0.1.0");
  Action action;
  RegisterEval(app, action);
  RegisterLoss(app, action);
  RegisterGradcheck(app, action);
  RegisterSsn(app, action);
  RegisterMix(app, action);
  RegisterPhoneme(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << ErrorRecord("usage", kExitUsage, e.what()) << '\n';
    return kExitUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << ErrorRecord("usage", kExitUsage, e.what()) << '\n';
    return kExitUsage;
  } catch (const sdrkit::Error& e) {
    const int code = ExitCodeFor(e.code());
    std::cerr << ErrorRecord(sdrkit::ErrorCodeName(e.code()), code, e.what()) << '\n';
    return code;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << ErrorRecord("io_failure", kExitIo, e.what()) << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << ErrorRecord("internal", kExitCheckFailed, e.what()) << '\n';
    return kExitCheckFailed;
  }
}
