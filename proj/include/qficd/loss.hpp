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

#include <ostream>

#include <nlohmann/json.hpp>

#include "qficd/linalg.hpp"
#include "qficd/pauli.hpp"

namespace qficd {

struct LossWeights {
  double w_el = 1e3;
  double w_eta = 1.0;
  double w_balance = 1.0;
  double w_phase = 1e-1;
  double w_reg = 1e-2;
  double eps_t = 1.0;

  /// Every term except the Euler-Lagrange one switched off.
  static LossWeights baseline();
  void validate() const;
};

void to_json(nlohmann::json& j, const LossWeights& w);
void from_json(const nlohmann::json& j, LossWeights& w);

/// (1/M) sum_k |r_k|^2.
double el_loss(const CVector& residual);

/// Mean squared magnitude of the coefficients of [h_next, h_now].
double commutativity_regularizer(const OperatorCoeffs& h_next, const OperatorCoeffs& h_now);

struct TerminalTerms {
  double eta = 0.0;
  double phase = 0.0;
  double balance = 0.0;
};

/// ((1 - eta)^2, (1 - cos_dphi)^2, (1 - balance)^2). Throws
/// std::domain_error when eta or balance leave [0, 1] or cos_dphi leaves
/// [-1, 1] by more than 1e-6.
TerminalTerms terminal_losses(double eta, double cos_dphi, double balance);

/// w_n = exp(-eps_t sum_{m<n} L_m). Throws std::domain_error on a negative
/// or non-finite loss.
RVector causality_weights(const RVector& per_time, double eps_t);

struct LossBreakdown {
  RVector el;   // per grid point
  RVector reg;  // per grid point, zero at the last one
  TerminalTerms terminal;
  RVector weights;
  double total = 0.0;
};

/// w_el el_n + w_reg reg_n, plus the weighted terminal terms at the last
/// grid point.
RVector per_time_losses(const LossBreakdown& b, const LossWeights& w);

/// (1/N) sum_n w_n L_n with the weights recomputed from the per-time losses.
double total_loss(const LossBreakdown& b, const LossWeights& w);

/// CSV header and row of the per-epoch log.
void write_loss_header(std::ostream& os);
void write_loss_row(std::ostream& os, std::size_t epoch, const LossBreakdown& b);

}  // namespace qficd
