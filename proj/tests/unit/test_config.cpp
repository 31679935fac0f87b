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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "centertrack/config.hpp"
#include "centertrack/errors.hpp"

namespace centertrack {
namespace {

TEST(Config, DefaultsAreValid) {
  const RunConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  ASSERT_EQ(cfg.num_classes(), 2u);
  EXPECT_EQ(cfg.classes[0].name, "car");
  EXPECT_EQ(cfg.tracker_config().class_thresholds, (std::vector<double>{4.0, 1.0}));
  EXPECT_EQ(cfg.max_age, 3);
  EXPECT_EQ(cfg.grid.num_x(), 128u);
}

TEST(Config, EmptyObjectGivesDefaults) {
  const RunConfig cfg = run_config_from_json(Json::object());
  EXPECT_EQ(to_json(cfg), to_json(RunConfig{}));
}

TEST(Config, JsonRoundTrip) {
  Json j = to_json(RunConfig{});
  apply_overrides(j, {"grid.cell=0.5", "tracker.max_age=5", "refine.scorer=random_projection",
                      "metrics.ap_thresholds=[0.5,1.5]", "paths.out_dir=/tmp/x"});
  const RunConfig cfg = run_config_from_json(j);
  EXPECT_EQ(cfg.grid.cell(), 0.5);
  EXPECT_EQ(cfg.max_age, 5);
  EXPECT_EQ(cfg.refine.scorer, ScorerKind::kRandomProjection);
  EXPECT_EQ(cfg.metrics.ap_thresholds, (std::vector<double>{0.5, 1.5}));
  EXPECT_EQ(cfg.paths.resolve("a.jsonl"), std::filesystem::path("/tmp/x/a.jsonl"));
  EXPECT_EQ(cfg.paths.resolve("/abs/b"), std::filesystem::path("/abs/b"));
  EXPECT_EQ(to_json(run_config_from_json(to_json(cfg))), to_json(cfg));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  const auto bad = [](const std::vector<std::string>& set) {
    Json j = Json::object();
    apply_overrides(j, set);
    return run_config_from_json(j);
  };
  EXPECT_THROW(bad({"bogus=1"}), ConfigError);
  EXPECT_THROW(bad({"grid.bogus=1"}), ConfigError);
  EXPECT_THROW(bad({"grid.cell=-1"}), ConfigError);
  EXPECT_THROW(bad({"grid.cell=\"wide\""}), ConfigError);
  EXPECT_THROW(bad({"tracker.max_age=-1"}), ConfigError);
  EXPECT_THROW(bad({"tracker.max_age=1.5"}), ConfigError);
  EXPECT_THROW(bad({"noise.miss_probability=1.5"}), ConfigError);
  EXPECT_THROW(bad({"refine.scorer=magic"}), ConfigError);
  EXPECT_THROW(bad({"classes=[]"}), ConfigError);
  EXPECT_THROW(bad({"decode.nms_iou=1"}), ConfigError);
  Json j;
  EXPECT_THROW(apply_overrides(j, {"novalue"}), ConfigError);
}

TEST(Config, LoadFromFile) {
  const auto dir = std::filesystem::temp_directory_path() / "centertrack_config_test";
  std::filesystem::create_directories(dir);
  const auto good = dir / "good.json";
  std::ofstream(good) << R"({"tracker": {"max_age": 2}})";
  EXPECT_EQ(load_run_config(good).max_age, 2);
  EXPECT_EQ(load_run_config(good, {"tracker.max_age=7"}).max_age, 7);
  const auto broken = dir / "broken.json";
  std::ofstream(broken) << "{";
  EXPECT_THROW(load_run_config(broken), ConfigError);
  EXPECT_THROW(load_run_config(dir / "missing.json"), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace centertrack
