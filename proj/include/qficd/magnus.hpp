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

// Time evolution of probe states by windowed Magnus expansion, with the
// step-by-step exponential propagation used as the reference.

#include <functional>
#include <vector>

#include "qficd/grid.hpp"
#include "qficd/linalg.hpp"

namespace qficd {

/// Dense Hamiltonian at grid index j.
using HamiltonianSampler = std::function<CMatrix(std::size_t)>;

/// Samples `sampler` at every grid point.
std::vector<CMatrix> sample_grid(const HamiltonianSampler& sampler, const TimeGrid& grid);

/// exp(omega). Throws std::domain_error on non-finite entries.
CMatrix window_propagator(const CMatrix& omega);

struct WindowedEvolution {
  CVector psi_final;
  /// One propagator per window, in time order.
  std::vector<CMatrix> propagators;
};

/// Applies the window propagators of `plan` to psi0 in time order.
/// Throws std::invalid_argument on a dimension mismatch or when the sample
/// count differs from the plan.
WindowedEvolution evolve_windowed(const CVector& psi0, const std::vector<CMatrix>& h, const TimeGrid& grid,
                                  const WindowPlan& plan, int order);
WindowedEvolution evolve_windowed(const CVector& psi0, const HamiltonianSampler& sampler, const TimeGrid& grid,
                                  const WindowPlan& plan, int order);

/// psi_{j+1} = exp(-i H(t_j) dt) psi_j for j = 0..N_t-2. Returns psi at T.
CVector evolve_sequential(const CVector& psi0, const std::vector<CMatrix>& h, const TimeGrid& grid);
CVector evolve_sequential(const CVector& psi0, const HamiltonianSampler& sampler, const TimeGrid& grid);

/// Every state of the step-by-step evolution, psi_0 = psi0 through psi at T.
std::vector<CVector> sequential_states(const CVector& psi0, const std::vector<CMatrix>& h, const TimeGrid& grid);

/// Constant-free global error scaling T (T / n_w)^p.
double truncation_error_bound(double T, std::size_t n_w, int order);

}  // namespace qficd
