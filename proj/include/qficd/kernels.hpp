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

// Data-parallel numerical kernels shared by the evaluation path and the
// training tape. Each parallel kernel has a plain serial counterpart in
// `kernels::serial`, written as literally as possible, which the tests and
// the benchmark target use as the reference.

#include <span>
#include <vector>

#include "qficd/grid.hpp"
#include "qficd/linalg.hpp"
#include "qficd/pauli.hpp"

namespace qficd::kernels {

/// Windowed Magnus generator Omega = sum_{n<=order} Omega_n from equally
/// spaced samples. The nested sums of the second and third order are
/// evaluated through running prefix/suffix sums, O(m) commutators.
/// `dim` sets the size of the zero result for an empty window.
CMatrix omega_window(std::span<const CMatrix> h, double dt, int order, Eigen::Index dim);

/// Accumulates into `h_bar` the adjoint of omega_window with respect to each
/// sample, given the cotangent `omega_bar`.
void omega_window_adjoint(std::span<const CMatrix> h, double dt, int order, const CMatrix& omega_bar,
                          std::span<CMatrix> h_bar);

/// One generator per window of `plan`; parallel over windows.
std::vector<CMatrix> window_omegas(const std::vector<CMatrix>& h, const WindowPlan& plan, double dt, int order);

/// Adjoint of window_omegas; returns one cotangent per sample.
std::vector<CMatrix> window_omegas_adjoint(const std::vector<CMatrix>& h, const WindowPlan& plan, double dt, int order,
                                           const std::vector<CMatrix>& omega_bar);

/// expm of each generator; parallel over windows.
std::vector<CMatrix> window_exponentials(const std::vector<CMatrix>& omegas);

/// Row-wise basis commutator for real coefficient rows:
///   out(n, k) = sum_{(i,j)->k} D_ij^k x(n, i) h(n, j),  [P_i, P_j] = i D_ij^k P_k,
/// i.e. the imaginary part of the commutator coefficients. Parallel over rows.
RMatrix commutator_rows(const RMatrix& x, const RMatrix& h, const OperatorBasis& basis);
void commutator_rows_adjoint(const RMatrix& x, const RMatrix& h, const OperatorBasis& basis, const RMatrix& out_bar,
                             RMatrix* x_bar, RMatrix* h_bar);

/// Dense materialization of real coefficient rows; parallel over rows.
std::vector<CMatrix> dense_rows(const RMatrix& coeffs, const OperatorBasis& basis);
/// h_bar(n, k) = Re tr(G_n^H P_k).
RMatrix dense_rows_adjoint(const std::vector<CMatrix>& g_bar, const OperatorBasis& basis);

namespace serial {

/// Literal nested sums: O(m^2) second order, O(m^3) third order.
CMatrix omega_window(std::span<const CMatrix> h, double dt, int order, Eigen::Index dim);
std::vector<CMatrix> window_omegas(const std::vector<CMatrix>& h, const WindowPlan& plan, double dt, int order);
std::vector<CMatrix> window_exponentials(const std::vector<CMatrix>& omegas);
RMatrix commutator_rows(const RMatrix& x, const RMatrix& h, const OperatorBasis& basis);
std::vector<CMatrix> dense_rows(const RMatrix& coeffs, const OperatorBasis& basis);

}  // namespace serial

}  // namespace qficd::kernels
