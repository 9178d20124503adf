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

#include <cstddef>
#include <utility>
#include <vector>

namespace qficd {

/// Uniform collocation grid t_j = j T / (N_t - 1), j = 0..N_t-1.
struct TimeGrid {
  std::size_t n_t = 256;
  double T = 1.0;

  TimeGrid() = default;
  TimeGrid(std::size_t n, double horizon);

  double dt() const { return T / static_cast<double>(n_t - 1); }
  double time(std::size_t j) const;
  std::vector<double> times() const;
};

/// Partition of the grid into n_w contiguous windows of m samples.
///
/// Sample j stands for the interval [t_j, t_j + dt]; the last sample sits at
/// t = T and carries no interval, so the final window propagates over m - 1
/// samples and the windows together cover exactly [0, T].
struct WindowPlan {
  std::size_t n_w = 16;
  std::size_t m = 16;
  std::size_t n_t = 256;

  WindowPlan() = default;
  /// Throws std::invalid_argument unless n_w >= 1 divides n_t.
  WindowPlan(std::size_t n_t, std::size_t n_w);

  /// Half-open range of propagating sample indices of window w.
  std::pair<std::size_t, std::size_t> range(std::size_t w) const;
};

}  // namespace qficd
