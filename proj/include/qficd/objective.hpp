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

// The training objective: network -> schedule and gauge potential -> total
// Hamiltonian at omega and omega +- delta -> windowed propagation -> loss.

#include "qficd/grid.hpp"
#include "qficd/loss.hpp"
#include "qficd/metrics.hpp"
#include "qficd/net.hpp"
#include "qficd/schedule.hpp"

namespace qficd {

struct ObjectiveOptions {
  std::size_t n_w = 16;
  int order = 3;
  double delta_rel = 1e-6;
  ScheduleMode schedule = ScheduleMode::Learned;
  InitialState initial = InitialState::ExtremalSuperposition;
};

/// Everything the objective needs that does not depend on the network.
struct ObjectiveSetup {
  ModelSpec model;
  BasisPtr basis;
  TimeGrid grid;
  WindowPlan plan;
  ObjectiveOptions options;
  double delta = 0.0;
  RVector tau;                 // normalized grid times
  RMatrix initial_rows;        // initial Hamiltonian on every row
  RMatrix dlambda[3];          // final - initial at omega - delta, omega, omega + delta
  RVector bound_weights;       // trapezoid weight times the eigenvalue gap of the bracket
  CVector psi_in;
  ExtremalPair extremal;       // of the sensitivity operator at T
  RVector ref_lambda;          // used when the schedule is not learned
  RVector ref_rate;
};

ObjectiveSetup make_objective_setup(const ModelSpec& model, const BasisPtr& basis, const TimeGrid& grid,
                                    const ObjectiveOptions& options);

struct ObjectiveResult {
  LossBreakdown breakdown;
  double F_Q = 0.0;
  double F_Q_max = 0.0;
  double eta = 0.0;
  double cos_dphi = 1.0;
  double balance = 0.0;
  /// d total / d parameters in DualBranchNet::flat() order; empty unless
  /// requested.
  RVector grad;
};

/// Evaluates the weighted causal loss, and its gradient when `with_grad`.
/// Terms whose weight is zero are left out of the differentiated graph.
ObjectiveResult evaluate_objective(const DualBranchNet& net, const ObjectiveSetup& setup, const LossWeights& weights,
                                   bool with_grad);

/// Protocol produced by the network on the setup's grid.
Protocol protocol_from_net(const DualBranchNet& net, const ObjectiveSetup& setup);

}  // namespace qficd
