// Copyright 2026 The CenterTrack Authors
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

// Command-line driver: centertrack <subcommand> --config <path> [--set k=v]...

#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "centertrack/config.hpp"
#include "centertrack/errors.hpp"
#include "centertrack/build_info.hpp"
#include "centertrack/pipeline.hpp"

namespace {

using centertrack::ExitCode;
using centertrack::Json;
using centertrack::RunConfig;
using Stage = std::function<Json(const RunConfig&)>;

int code(ExitCode c) { return static_cast<int>(c); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Center-based 3D detection and tracking pipeline"};
  app.set_version_flag("--version", std::string(CENTERTRACK_BUILD_ID));
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, Stage>> stages{
      {"simulate", centertrack::run_simulate},   {"encode", centertrack::run_encode},
      {"decode", centertrack::run_decode},       {"refine", centertrack::run_refine},
      {"track", centertrack::run_track},         {"eval", centertrack::run_eval},
      {"losses-check", centertrack::run_losses_check},
  };
  const std::map<std::string, std::string> help{
      {"simulate", "Generate a scenario: ground truth, noisy detections and occupancy features"},
      {"encode", "Render target maps from ground truth"},
      {"decode", "Decode detections from target maps"},
      {"refine", "Rescore and refine detections with the second stage"},
      {"track", "Track detections frame by frame"},
      {"eval", "Compute detection and tracking metrics"},
      {"losses-check", "Check analytic loss gradients against finite differences"},
  };

  std::string config_path;
  std::vector<std::string> overrides;
  for (const auto& [name, stage] : stages) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("--config", config_path, "Run configuration (JSON)")->required();
    sub->add_option("--set", overrides, "Override a config field, e.g. --set decode.top_k=100");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(ExitCode::kConfig);
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const RunConfig cfg = centertrack::load_run_config(config_path, overrides);
    for (const auto& [n, stage] : stages) {
      if (n == name) {
        std::cout << stage(cfg).dump() << '\n';
        break;
      }
    }
  } catch (const centertrack::Error& e) {
    std::cerr << "centertrack " << name << ": " << e.what() << '\n';
    return code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "centertrack " << name << ": " << e.what() << '\n';
    return code(ExitCode::kConfig);
  }
  return code(ExitCode::kOk);
}
