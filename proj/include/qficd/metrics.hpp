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

// Physical evaluation of a control protocol: quantum Fisher information and
// its bound, extremal-state fidelity, and consistency diagnostics.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qficd/grid.hpp"
#include "qficd/linalg.hpp"
#include "qficd/models.hpp"

namespace qficd {

/// A fully specified control protocol sampled on the time grid.
struct Protocol {
  ModelSpec model;
  BasisPtr basis;
  TimeGrid grid;
  RVector lambda;       // schedule per grid point
  RVector lambda_rate;  // d lambda / dt in physical time
  RMatrix agp;          // (N_t, basis size) gauge-potential coefficients
  CVector psi_in;

  void validate() const;

  /// initial + lambda (final(t) - initial)
  RMatrix control_rows(double omega) const;
  /// control_rows + lambda_rate * agp
  RMatrix total_rows(double omega) const;
  /// omega-derivative of the total Hamiltonian.
  RMatrix sensitivity_rows(double omega) const;

  std::vector<CMatrix> control_dense(double omega) const;
  std::vector<CMatrix> total_dense(double omega) const;
  std::vector<CMatrix> sensitivity_dense(double omega) const;
};

/// Reference protocol: sin^2 schedule and no gauge potential.
Protocol reference_protocol(const ModelSpec& model, const BasisPtr& basis, const TimeGrid& grid, const CVector& psi_in);

struct ExtremalPair {
  double val_min = 0.0;
  double val_max = 0.0;
  CVector vec_min;
  CVector vec_max;
  bool degenerate = false;
};

/// Extremal eigenpairs of a Hermitian matrix from the Jacobi solver. The
/// degeneracy flag is raised when either extremal eigenvalue has
/// multiplicity above one within 1e-10.
ExtremalPair extremal_pair(const CMatrix& sensitivity);

enum class InitialState { ExtremalSuperposition, PlusProduct };
std::string to_string(InitialState s);
InitialState initial_state_from_string(const std::string& s);

/// Probe state: |+>^q, or (phi_min + phi_max)/sqrt(2) of the sensitivity
/// operator at the first grid time after zero (the lambda factor does not
/// change eigenvectors, so the bracket operator is used).
CVector initial_state(InitialState policy, const ModelSpec& model, const BasisPtr& basis, const TimeGrid& grid);

/// How final states are computed.
struct Propagation {
  bool sequential = false;
  std::size_t n_w = 16;
  int order = 3;
};

/// 4 (<d|d> - |<psi|d>|^2), d = (psi_plus - psi_minus) / (2 delta).
double qfi_from_states(const CVector& psi_minus, const CVector& psi, const CVector& psi_plus, double delta);

struct QfiResult {
  double F = 0.0;
  CVector psi_minus;
  CVector psi;
  CVector psi_plus;
  /// Window propagators of the central run, empty for sequential runs.
  std::vector<CMatrix> propagators;
};

/// Central-difference QFI at omega. Throws std::invalid_argument unless
/// delta > 0 and std::runtime_error when an evolved state is not normalized
/// within 1e-8.
QfiResult qfi_central_diff(const Protocol& p, double omega, double delta, const Propagation& how);

/// (trapezoid integral of lambda_max - lambda_min)^2.
double qfi_max_bound(const std::vector<CMatrix>& sensitivity, const TimeGrid& grid);

/// Trapezoid weights of the grid.
RVector trapezoid_weights(const TimeGrid& grid);

/// 4 Var(h) on psi_in with h the time integral of U(0, t)^H dH U(0, t) over
/// the piecewise-constant evolution, U built from per-step exponentials and
/// each step integrated by Simpson's rule.
double qfi_via_generator(const std::vector<CMatrix>& h_total, const std::vector<CMatrix>& sensitivity,
                         const TimeGrid& grid, const CVector& psi_in);

struct FidelityBlock {
  double fidelity = 0.0;
  /// 0.5 (p_min + p_max + 2 sqrt(p_min p_max) cos_dphi)
  double fidelity_decomposed = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  double cos_dphi = 1.0;
  double balance = 0.0;
  bool degenerate = false;
};

/// Overlaps of psi_T with the extremal pair. Throws std::logic_error if the
/// direct and decomposed fidelities differ by more than 1e-10.
FidelityBlock fidelity_block(const CVector& psi_T, const ExtremalPair& pair);

struct ResidualResult {
  double value = 0.0;
  /// Set when the normalization integral vanishes; value is then 0.
  bool degenerate = false;
};

/// sqrt(int |i dpsi/dt - H psi|^2 / int |H psi|^2) with second-order
/// differences (one-sided at the ends) and trapezoid integration. Throws
/// std::invalid_argument for fewer than three grid points.
ResidualResult schrodinger_residual(const std::vector<CVector>& states, const std::vector<CMatrix>& h,
                                    const TimeGrid& grid);

/// sqrt(sum_w |U_w^H U_w - I|_F^2 / (n_w d)).
double unitarity_error(const std::vector<CMatrix>& propagators);

struct Trace {
  std::vector<double> values;
  std::vector<bool> flags;
};

/// |<psi|phi_min>|^2 + |<psi|phi_max>|^2 at every grid point; flags mark
/// degenerate extremal subspaces.
Trace extremal_subspace_trace(const std::vector<CVector>& states, const std::vector<CMatrix>& sensitivity);

/// |[O, S]|_F / (|O|_F |S|_F) per sample; flags mark zero-norm operators,
/// reported as 0.
Trace symmetry_mismatch(const std::vector<CMatrix>& ops, const CMatrix& symmetry);

/// Tensor product of X on every site.
CMatrix parity_x(int q);

enum class ExtremalFrame { Instantaneous, Evolved };
std::string to_string(ExtremalFrame f);
ExtremalFrame extremal_frame_from_string(const std::string& s);

struct MetricsReport {
  std::optional<double> eta;  // empty when the bound vanishes
  double F_Q = 0.0;
  double F_Q_max = 0.0;
  double fidelity = 0.0;
  double fidelity_decomposed = 0.0;
  double p_min = 0.0;
  double p_max = 0.0;
  double cos_dphi = 1.0;
  double balance = 0.0;
  bool extremal_degenerate = false;
  double schr_residual = 0.0;
  bool schr_degenerate = false;
  double unitarity_error = 0.0;
  std::optional<double> eta_sequential;
  double eps_eta = 0.0;
  double qfi_generator = 0.0;

  std::vector<double> times;
  std::vector<double> lambda;
  std::vector<double> lambda_rate;
  Trace p_ext;
  Trace mismatch_control;
  Trace mismatch_sensitivity;
  Trace mismatch_total;
};

void to_json(nlohmann::json& j, const MetricsReport& r);

struct EvaluationOptions {
  double delta_rel = 1e-6;
  Propagation propagation;
  ExtremalFrame frame = ExtremalFrame::Instantaneous;
};

/// Full report at the model frequency.
MetricsReport evaluate_protocol(const Protocol& p, const EvaluationOptions& opts);

}  // namespace qficd
