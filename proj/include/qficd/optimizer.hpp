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
#include <string>

#include <nlohmann/json.hpp>

#include "qficd/linalg.hpp"

namespace qficd {

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct StepResult {
  bool applied = true;
  /// Set when the step was refused.
  std::string reason;
};

/// Adaptive-moment update with bias correction over a flat parameter vector.
class Adam {
 public:
  Adam() = default;
  Adam(AdamConfig config, Eigen::Index n);

  /// Updates `params` in place. A gradient with any non-finite entry leaves
  /// both the parameters and the moments untouched and reports why.
  StepResult step(RVector& params, const RVector& grad);

  const AdamConfig& config() const { return config_; }
  std::uint64_t steps() const { return t_; }
  const RVector& first_moment() const { return m_; }
  const RVector& second_moment() const { return v_; }

  friend void to_json(nlohmann::json& j, const Adam& a);
  friend void from_json(const nlohmann::json& j, Adam& a);

 private:
  AdamConfig config_;
  RVector m_;
  RVector v_;
  std::uint64_t t_ = 0;
};

}  // namespace qficd
