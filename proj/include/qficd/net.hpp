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

// Two-branch multilayer perceptron over the normalized time coordinate: one
// branch produces the scalar schedule control, the other one coefficient per
// basis string.

#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "qficd/linalg.hpp"
#include "qficd/tape.hpp"

namespace qficd {

struct NetShape {
  int lambda_width = 50;
  int lambda_depth = 3;
  int agp_width = 50;
  int agp_depth = 6;
  std::size_t basis_size = 16;

  void validate() const;
};

void to_json(nlohmann::json& j, const NetShape& s);
void from_json(const nlohmann::json& j, NetShape& s);

/// Affine layer y = W x + b; W is (out, in), b is (out, 1).
struct Layer {
  RMatrix W;
  RMatrix b;
};

/// Uniform draws on [-bound, bound] from a counter-based generator: entry
/// `index` of stream `stream` depends only on (seed, stream, index).
double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// (rows, cols) matrix with entries uniform on +-sqrt(6 / (rows + cols)),
/// fan_in = cols and fan_out = rows.
RMatrix xavier_init(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, std::uint64_t stream);

struct NetOutput {
  RVector u;      // schedule control
  RVector u_dot;  // its derivative in normalized time
  RMatrix a;      // (n, basis_size) gauge-potential coefficients
};

struct TapeNetOutput {
  std::vector<ad::Real> params;  // same order as DualBranchNet::parameters()
  ad::Real u;
  ad::Real u_dot;
  ad::Real a;
};

class DualBranchNet {
 public:
  DualBranchNet() = default;
  /// All weights and biases zero.
  explicit DualBranchNet(const NetShape& shape);
  /// Xavier-uniform weights and zero biases.
  static DualBranchNet xavier(const NetShape& shape, std::uint64_t seed);

  const NetShape& shape() const { return shape_; }
  const std::vector<Layer>& lambda_layers() const { return lambda_; }
  const std::vector<Layer>& agp_layers() const { return agp_; }

  /// Evaluates both branches at every entry of `t`, with du/dt carried
  /// forward alongside. Throws std::invalid_argument on inconsistent layer
  /// shapes.
  NetOutput forward(const RVector& t) const;

  /// Records the same evaluation on `tape` with every parameter as a leaf.
  TapeNetOutput forward(ad::Tape& tape, const RVector& t) const;

  /// Parameter matrices in a fixed order: lambda branch (W, b per layer),
  /// then the gauge-potential branch.
  std::vector<const RMatrix*> parameters() const;
  std::vector<RMatrix*> parameters();
  std::size_t parameter_count() const;
  RVector flat() const;
  void set_flat(const RVector& v);

  friend void to_json(nlohmann::json& j, const DualBranchNet& n);
  friend void from_json(const nlohmann::json& j, DualBranchNet& n);

 private:
  void check_shapes() const;

  NetShape shape_;
  std::vector<Layer> lambda_;
  std::vector<Layer> agp_;
};

}  // namespace qficd
