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

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qficd/pauli.hpp"

namespace qficd {

enum class Family { NearestNeighbor, Dipolar, VanDerWaals };

std::string to_string(Family f);
/// Accepts "nearest-neighbor", "dipolar", "van-der-waals" and the alias
/// "trapped-ions".
Family family_from_string(const std::string& s);

/// Driven transverse-field chain with power-law XY couplings.
struct ModelSpec {
  Family family = Family::NearestNeighbor;
  int q = 2;
  double h = 1.0;
  double omega = 1.0;
  double J = 1.0;
  double T = 1.0;

  /// Power-law exponent; +inf for the nearest-neighbor family.
  double alpha() const;
  /// Coupling prefactor of the ordered pair (i, j), 0-based sites.
  double pair_strength(int i, int j) const;
  void validate() const;
};

void to_json(nlohmann::json& j, const ModelSpec& m);
void from_json(const nlohmann::json& j, ModelSpec& m);

/// The omega-independent building blocks of the model as real coefficient
/// vectors over a basis:
///   initial  = sum_i h X_i
///   pairs    = sum_{i != j} |i-j|^{-alpha} X_i Y_j
///   zfield   = sum_i Z_i
/// so that final(t) = -sin(omega t) pairs + cos(omega t) zfield.
struct ModelOperators {
  BasisPtr basis;
  RVector initial;
  RVector pairs;
  RVector zfield;
};

ModelOperators model_operators(const ModelSpec& spec, BasisPtr basis);

OperatorCoeffs initial_coeffs(const ModelSpec& spec, const BasisPtr& basis);
OperatorCoeffs final_coeffs(const ModelSpec& spec, const BasisPtr& basis, double t);
/// (1 - lambda) initial + lambda final(t)
OperatorCoeffs control_coeffs(const ModelSpec& spec, const BasisPtr& basis, double t, double lambda);
/// Analytic omega-derivative of control_coeffs.
OperatorCoeffs sensitivity_coeffs(const ModelSpec& spec, const BasisPtr& basis, double t, double lambda);
/// final(t) - initial, the lambda-derivative of control_coeffs.
OperatorCoeffs dlambda_coeffs(const ModelSpec& spec, const BasisPtr& basis, double t);
/// control_coeffs + dlambda_dt * agp
OperatorCoeffs total_coeffs(const ModelSpec& spec, double t, double lambda, double dlambda_dt, const OperatorCoeffs& agp);

/// Grid forms, one row per time in `times`, of the building blocks above at
/// frequency `omega`:
///   final_rows    final(t)
///   dlambda_rows  final(t) - initial
///   bracket_rows  -t cos(omega t) pairs - t sin(omega t) zfield, the
///                 sensitivity operator divided by lambda
RMatrix final_rows(const ModelOperators& ops, const std::vector<double>& times, double omega);
RMatrix dlambda_rows(const ModelOperators& ops, const std::vector<double>& times, double omega);
RMatrix bracket_rows(const ModelOperators& ops, const std::vector<double>& times, double omega);

}  // namespace qficd
