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

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qficd {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

inline constexpr cplx kI{0.0, 1.0};

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
/// The series is summed until the next term falls below 1e-16 of the running
/// sum (relative), after scaling the argument to 1-norm <= 1/2.
/// Throws std::domain_error on non-finite input.
CMatrix expm(const CMatrix& a);

/// Adjoint of expm at `a` applied to the cotangent `g`, i.e. the Frechet
/// derivative L(a^H, g). Computed as the upper-right block of
/// expm([[a^H, g], [0, a^H]]).
CMatrix expm_adjoint(const CMatrix& a, const CMatrix& g);

struct HermitianEigen {
  RVector values;   // ascending
  CMatrix vectors;  // columns, phase-fixed
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Sweeps visit (p, q) pairs in row-major order, so the result is a pure
/// function of the input. Each eigenvector is rotated so that its
/// largest-magnitude component is real and positive; among components whose
/// magnitudes agree to 1e-12 the lowest index wins.
HermitianEigen jacobi_eigh(const CMatrix& a, double tol = 1e-15, int max_sweeps = 64);

double max_abs_imag(const CMatrix& a);
bool is_finite(const CMatrix& a);

}  // namespace qficd
