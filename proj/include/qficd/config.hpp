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

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qficd/loss.hpp"
#include "qficd/metrics.hpp"
#include "qficd/models.hpp"
#include "qficd/net.hpp"
#include "qficd/objective.hpp"
#include "qficd/optimizer.hpp"
#include "qficd/schedule.hpp"

namespace qficd {

inline constexpr int kConfigSchemaVersion = 1;

struct RunConfig {
  ModelSpec model;
  int k = 2;
  std::size_t n_t = 256;
  std::size_t n_w = 16;
  int order = 3;
  ScheduleMode schedule = ScheduleMode::Learned;
  LossWeights weights;
  double lr = 1e-4;
  std::size_t epochs = 25000;
  std::uint64_t seed = 42;
  InitialState initial = InitialState::ExtremalSuperposition;
  double delta_rel = 1e-6;
  ExtremalFrame frame = ExtremalFrame::Instantaneous;
  int lambda_width = 50;
  int lambda_depth = 3;
  int agp_width = 50;
  int agp_depth = 6;
  std::string output_dir = "runs/default";

  /// Throws std::invalid_argument with the first violated rule.
  void validate() const;

  BasisPtr basis() const;
  TimeGrid grid() const;
  NetShape net_shape() const;
  ObjectiveOptions objective_options() const;
  EvaluationOptions evaluation_options() const;
};

nlohmann::json to_json(const RunConfig& c);
/// Parses and validates. Unknown keys and schema versions other than the
/// current one are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);

/// Applies "a.b.c=value" to a configuration document. The value is parsed as
/// JSON when possible and taken as a string otherwise. Throws
/// std::invalid_argument for malformed overrides or unknown paths.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Hex SHA-256 of the canonical JSON of every field except the output
/// directory.
std::string config_hash(const RunConfig& c);

struct Checkpoint {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::size_t epoch = 0;
  DualBranchNet net;
  Adam optimizer;
};

nlohmann::json to_json(const Checkpoint& c);
Checkpoint checkpoint_from_json(const nlohmann::json& j);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace qficd
