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

// Eager reverse-mode differentiation over real matrices, complex matrices and
// stacks of complex matrices.
//
// Complex adjoints follow the real-pair convention: for a complex node z the
// stored adjoint is dL/dRe(z) + i dL/dIm(z), so a linear map y = A x pulls
// back as x_bar = A^H y_bar.

#include <cstddef>
#include <functional>
#include <vector>

#include "qficd/grid.hpp"
#include "qficd/linalg.hpp"
#include "qficd/pauli.hpp"

namespace qficd::ad {

struct Real {
  std::size_t id = 0;
};
struct Cplx {
  std::size_t id = 0;
};
struct Stack {
  std::size_t id = 0;
};

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Differentiable input.
  Real leaf(RMatrix value);
  Real constant(RMatrix value);
  Cplx constant(CMatrix value);
  Stack constant(std::vector<CMatrix> value);

  const RMatrix& value(Real x) const;
  const CMatrix& value(Cplx x) const;
  const std::vector<CMatrix>& value(Stack x) const;

  /// Adjoint after backward(); a zero matrix for nodes the output does not
  /// depend on.
  RMatrix grad(Real x) const;
  CMatrix grad(Cplx x) const;

  bool needs_grad(std::size_t id) const { return nodes_[id].needs_grad; }
  std::size_t size() const { return nodes_.size(); }

  /// Seeds the 1x1 output with 1 and runs every recorded backward rule once,
  /// in reverse order. Throws std::invalid_argument for a non-scalar output.
  void backward(Real output);

  /// Internal interface for primitives. A rule receives the tape and the id
  /// of its own node.
  using Rule = std::function<void(Tape&, std::size_t)>;
  Real push(RMatrix value, bool needs_grad, Rule rule);
  Cplx push(CMatrix value, bool needs_grad, Rule rule);
  Stack push(std::vector<CMatrix> value, bool needs_grad, Rule rule);

  RMatrix& adj(Real x);
  CMatrix& adj(Cplx x);
  std::vector<CMatrix>& adj(Stack x);
  /// True when node `id` has received an adjoint.
  bool has_adj(std::size_t id) const { return nodes_[id].touched; }

 private:
  enum class Kind { Real, Cplx, Stack };
  struct Node {
    Kind kind;
    bool needs_grad = false;
    bool touched = false;
    RMatrix r, r_bar;
    CMatrix c, c_bar;
    std::vector<CMatrix> s, s_bar;
    Rule rule;
  };
  std::vector<Node> nodes_;
};

// Real matrix primitives.

/// x W^T + 1 b^T with x (n, in), W (out, in), b (out, 1).
Real affine(Tape& t, Real x, Real w, Real b);
/// x W^T.
Real linear(Tape& t, Real x, Real w);
/// Elementwise z sigmoid(z).
Real silu(Tape& t, Real z);
/// Forward-mode tangent of silu: silu'(z) * z_dot.
Real silu_jvp(Tape& t, Real z, Real z_dot);
Real add(Tape& t, Real a, Real b);
Real sub(Tape& t, Real a, Real b);
Real scale(Tape& t, Real a, double s);
Real add_scalar(Tape& t, Real a, double s);
Real hadamard(Tape& t, Real a, Real b);
Real square(Tape& t, Real a);
/// a / b for 1x1 operands.
Real div(Tape& t, Real a, Real b);
/// Sum of all entries, 1x1.
Real sum(Tape& t, Real a);
/// Row-wise mean of squares, (n, 1).
Real mean_sq_rows(Tape& t, Real a);
/// diag(v) a with v (n, 1).
Real row_scale(Tape& t, Real v, Real a);
/// Rows [begin, begin + count).
Real rows(Tape& t, Real a, Eigen::Index begin, Eigen::Index count);
/// Appends `count` zero rows.
Real pad_rows(Tape& t, Real a, Eigen::Index count);
/// Copy of the column vector a with a(index) += s, s 1x1.
Real add_at(Tape& t, Real a, Eigen::Index index, Real s);
/// sum_n w_n a_n with constant weights, a (n, 1).
Real weighted_sum(Tape& t, Real a, const RVector& w);

/// Learned schedule lambda(t_n) and its rate from the network outputs u and
/// du/dt, both (n, 1). `times` is the normalized time of each row.
Real schedule_lambda(Tape& t, Real u, Real u_dot, const RVector& times);
Real schedule_rate(Tape& t, Real u, Real u_dot, const RVector& times);

/// Row-wise structure-constant commutator, see kernels::commutator_rows.
Real commutator_rows(Tape& t, Real x, Real h, const BasisPtr& basis);

// Bridges to complex values.

/// Dense operator per coefficient row.
Stack dense_from_coeffs(Tape& t, Real coeffs, const BasisPtr& basis);
/// Windowed Magnus generators of the stacked samples.
Stack magnus_omegas(Tape& t, Stack h, const WindowPlan& plan, double dt, int order);
/// Matrix exponential of every element.
Stack expm_each(Tape& t, Stack omegas);
/// U_{n-1} ... U_0 psi_in for a constant initial state.
Cplx propagate_chain(Tape& t, Stack u, const CVector& psi_in);

// Complex primitives.

Cplx csub(Tape& t, Cplx a, Cplx b);
Cplx cscale(Tape& t, Cplx a, cplx s);
/// a^H b, 1x1.
Cplx cdot(Tape& t, Cplx a, Cplx b);
/// sum |z|^2, 1x1 real.
Real norm2(Tape& t, Cplx z);
/// cos(arg b - arg a) for 1x1 a, b. Returns 1 with zero gradient when
/// either magnitude is below 1e-150.
Real relative_phase_cos(Tape& t, Cplx a, Cplx b);

}  // namespace qficd::ad
