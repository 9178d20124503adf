// Copyright 2026 The qficd Authors
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


#include "qficd/config.hpp"

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

namespace qficd {
namespace {

RunConfig small_config() {
  RunConfig c;
  c.n_t = 16;
  c.n_w = 4;
  c.lambda_width = 3;
  c.lambda_depth = 2;
  c.agp_width = 3;
  c.agp_depth = 2;
  c.epochs = 3;
  return c;
}

TEST(RunConfig, DefaultsAreValid) {
  const RunConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.n_t, 256u);
  EXPECT_EQ(c.n_w, 16u);
  EXPECT_EQ(c.order, 3);
  EXPECT_EQ(c.lr, 1e-4);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.net_shape().basis_size, basis_size(2, 2));
}

TEST(RunConfig, RejectsEachBrokenRule) {
  const auto broken = [](auto mutate) {
    RunConfig c;
    mutate(c);
    return c;
  };
  EXPECT_THROW(broken([](RunConfig& c) { c.k = 1; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.k = 3; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.n_t = 2; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.n_w = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.n_w = 10; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.order = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.order = 4; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.lr = 0.0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.epochs = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.delta_rel = -1e-6; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.model.q = 0; }).validate(), std::invalid_argument);
  EXPECT_THROW(broken([](RunConfig& c) { c.weights.eps_t = -1.0; }).validate(), std::invalid_argument);
}

TEST(RunConfig, JsonRoundTripKeepsEveryField) {
  RunConfig c = small_config();
  c.model.family = Family::Dipolar;
  c.model.q = 3;
  c.model.h = 0.7;
  c.model.omega = 1.3;
  c.model.T = 2.0;
  c.k = 3;
  c.order = 2;
  c.schedule = ScheduleMode::Reference;
  c.weights.w_phase = 0.5;
  c.lr = 3e-3;
  c.seed = 7;
  c.initial = InitialState::PlusProduct;
  c.delta_rel = 1e-4;
  c.frame = ExtremalFrame::Evolved;
  c.output_dir = "somewhere/else";
  const RunConfig back = config_from_json(to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(back.model.family, Family::Dipolar);
  EXPECT_EQ(back.model.T, 2.0);
  EXPECT_EQ(back.initial, InitialState::PlusProduct);
  EXPECT_EQ(back.frame, ExtremalFrame::Evolved);
}

TEST(RunConfig, PartialDocumentsFillDefaults) {
  const RunConfig c = config_from_json(nlohmann::json{{"grid", {{"n_t", 32}, {"n_w", 8}}}});
  EXPECT_EQ(c.n_t, 32u);
  EXPECT_EQ(c.n_w, 8u);
  EXPECT_EQ(c.order, 3);
  EXPECT_EQ(c.model.q, 2);
  const RunConfig d = config_from_json(nlohmann::json{{"model", {{"family", "trapped-ions"}, {"q", 3}}}});
  EXPECT_EQ(d.model.family, Family::VanDerWaals);
  EXPECT_EQ(d.model.h, 1.0);
}

TEST(RunConfig, UnknownKeysAreRejected) {
  EXPECT_THROW(config_from_json(nlohmann::json{{"bogus", 1}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"grid", {{"n_tt", 64}}}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"model", {{"gamma", 1.0}}}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"optimizer", {{"momentum", 0.9}}}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"network", {{"width", 3}}}}), std::invalid_argument);
}

TEST(RunConfig, SchemaVersionIsChecked) {
  EXPECT_NO_THROW(config_from_json(nlohmann::json{{"schema_version", kConfigSchemaVersion}}));
  EXPECT_THROW(config_from_json(nlohmann::json{{"schema_version", kConfigSchemaVersion + 1}}),
               std::invalid_argument);
}

TEST(RunConfig, TypeErrorsAndInvalidValuesSurfaceAsInvalidArgument) {
  EXPECT_THROW(config_from_json(nlohmann::json{{"grid", {{"n_t", "many"}}}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"optimizer", {{"epochs", 0}}}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"optimizer", {{"epochs", -5}}}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"schedule", "cubic"}}), std::invalid_argument);
  EXPECT_THROW(config_from_json(nlohmann::json{{"grid", {{"n_t", 100}, {"n_w", 16}}}}), std::invalid_argument);
}

TEST(ApplyOverride, ParsesJsonValuesAndFallsBackToStrings) {
  nlohmann::json doc = to_json(RunConfig{});
  apply_override(doc, "grid.n_t=64");
  apply_override(doc, "grid.n_w=8");
  apply_override(doc, "optimizer.lr=0.001");
  apply_override(doc, "model.family=dipolar");
  apply_override(doc, "output_dir=runs/x");
  const RunConfig c = config_from_json(doc);
  EXPECT_EQ(c.n_t, 64u);
  EXPECT_EQ(c.n_w, 8u);
  EXPECT_EQ(c.lr, 1e-3);
  EXPECT_EQ(c.model.family, Family::Dipolar);
  EXPECT_EQ(c.output_dir, "runs/x");
}

TEST(ApplyOverride, CreatesMissingObjectsAndRejectsMalformedInput) {
  nlohmann::json doc = nlohmann::json::object();
  apply_override(doc, "loss.w_eta=2");
  EXPECT_EQ(doc["loss"]["w_eta"], 2);
  EXPECT_THROW(apply_override(doc, "no-equals-sign"), std::invalid_argument);
  EXPECT_THROW(apply_override(doc, "=3"), std::invalid_argument);
  doc["seed"] = 5;
  EXPECT_THROW(apply_override(doc, "seed.inner=1"), std::invalid_argument);
  nlohmann::json unknown = to_json(RunConfig{});
  apply_override(unknown, "grid.bogus=1");
  EXPECT_THROW(config_from_json(unknown), std::invalid_argument);
}

TEST(ConfigHash, IsStableHexAndIgnoresOutputDirectory) {
  RunConfig a;
  RunConfig b;
  b.output_dir = "elsewhere";
  const std::string h = config_hash(a);
  EXPECT_EQ(h.size(), 64u);
  EXPECT_EQ(h.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_EQ(h, config_hash(a));
  EXPECT_EQ(h, config_hash(b));
  b.seed = 43;
  EXPECT_NE(h, config_hash(b));
  RunConfig c;
  c.weights.w_eta = 1.0 + 1e-15;
  EXPECT_NE(h, config_hash(c));
}

TEST(Checkpoint, RoundTripsThroughDisk) {
  const RunConfig cfg = small_config();
  DualBranchNet net = DualBranchNet::xavier(cfg.net_shape(), 11);
  Adam adam({1e-3}, static_cast<Eigen::Index>(net.parameter_count()));
  RVector params = net.flat();
  const RVector grad = RVector::LinSpaced(params.size(), -1.0, 1.0);
  ASSERT_TRUE(adam.step(params, grad).applied);
  net.set_flat(params);

  const Checkpoint ck{config_hash(cfg), cfg.seed, 1, net, adam};
  const auto dir = std::filesystem::temp_directory_path() / "qficd_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "checkpoint.json";
  save_checkpoint(path, ck);
  const Checkpoint back = load_checkpoint(path);
  EXPECT_EQ(back.config_hash, ck.config_hash);
  EXPECT_EQ(back.seed, ck.seed);
  EXPECT_EQ(back.epoch, 1u);
  EXPECT_EQ(back.net.flat(), net.flat());
  EXPECT_EQ(back.optimizer.steps(), 1u);
  EXPECT_EQ(back.optimizer.first_moment(), adam.first_moment());
  EXPECT_EQ(back.optimizer.second_moment(), adam.second_moment());
  std::filesystem::remove_all(dir);
}

TEST(Checkpoint, RejectsForeignDocuments) {
  EXPECT_THROW(checkpoint_from_json(nlohmann::json{{"format", "other"}, {"version", 1}}), std::invalid_argument);
  EXPECT_THROW(checkpoint_from_json(nlohmann::json{{"format", "qficd-checkpoint"}, {"version", 2}}),
               std::invalid_argument);
  EXPECT_THROW(load_checkpoint("/nonexistent/checkpoint.json"), std::runtime_error);
}

}  // namespace
}  // namespace qficd
