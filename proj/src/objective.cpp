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

#include "qficd/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "qficd/kernels.hpp"
#include "qficd/tape.hpp"

namespace qficd {

ObjectiveSetup make_objective_setup(const ModelSpec& model, const BasisPtr& basis, const TimeGrid& grid,
                                    const ObjectiveOptions& options) {
  ObjectiveSetup s;
  s.model = model;
  s.basis = basis;
  s.grid = grid;
  s.plan = WindowPlan(grid.n_t, options.n_w);
  s.options = options;
  if (!(options.delta_rel > 0.0)) throw std::invalid_argument("delta_omega must be positive");
  s.delta = options.delta_rel * model.omega;

  const auto times = grid.times();
  const auto n = static_cast<Eigen::Index>(grid.n_t);
  s.tau.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) s.tau(j) = times[static_cast<std::size_t>(j)] / grid.T;

  const ModelOperators ops = model_operators(model, basis);
  s.initial_rows = ops.initial.transpose().replicate(n, 1);
  const double omegas[3] = {model.omega - s.delta, model.omega, model.omega + s.delta};
  for (int k = 0; k < 3; ++k) s.dlambda[k] = dlambda_rows(ops, times, omegas[k]);

  const RMatrix bracket = bracket_rows(ops, times, model.omega);
  const auto dense = kernels::dense_rows(bracket, *basis);
  const RVector w = trapezoid_weights(grid);
  s.bound_weights.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const RVector ev = jacobi_eigh(dense[static_cast<std::size_t>(j)]).values;
    s.bound_weights(j) = w(j) * (ev(ev.size() - 1) - ev(0));
  }
  s.psi_in = initial_state(options.initial, model, basis, grid);
  s.extremal = extremal_pair(dense.back());

  s.ref_lambda.resize(n);
  s.ref_rate.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto r = lambda_ref(s.tau(j));
    s.ref_lambda(j) = r.lambda;
    s.ref_rate(j) = r.dlambda_dt / grid.T;
  }
  return s;
}

namespace {

/// (1 - x)^2 for a 1x1 node.
ad::Real one_minus_sq(ad::Tape& t, ad::Real x) { return ad::square(t, ad::add_scalar(t, ad::scale(t, x, -1.0), 1.0)); }

}  // namespace

ObjectiveResult evaluate_objective(const DualBranchNet& net, const ObjectiveSetup& setup, const LossWeights& weights,
                                   bool with_grad) {
  weights.validate();
  ad::Tape tape;
  const auto out = net.forward(tape, setup.tau);
  const auto n = static_cast<Eigen::Index>(setup.grid.n_t);

  ad::Real lam, rate;
  if (setup.options.schedule == ScheduleMode::Learned) {
    lam = ad::schedule_lambda(tape, out.u, out.u_dot, setup.tau);
    rate = ad::scale(tape, ad::schedule_rate(tape, out.u, out.u_dot, setup.tau), 1.0 / setup.grid.T);
  } else {
    lam = tape.constant(RMatrix(setup.ref_lambda));
    rate = tape.constant(RMatrix(setup.ref_rate));
  }

  const ad::Real init = tape.constant(setup.initial_rows);
  ad::Real g[3];
  ad::Real h_total[3];
  for (int k = 0; k < 3; ++k) {
    g[k] = tape.constant(setup.dlambda[k]);
    h_total[k] = ad::add(tape, ad::add(tape, init, ad::row_scale(tape, lam, g[k])), ad::row_scale(tape, rate, out.a));
  }

  // Euler-Lagrange residual of the gauge potential against the control
  // Hamiltonian, in real coefficient form.
  const ad::Real h_control = ad::add(tape, init, ad::row_scale(tape, lam, g[1]));
  const ad::Real c = ad::commutator_rows(tape, out.a, h_control, setup.basis);
  const ad::Real residual = ad::commutator_rows(tape, ad::sub(tape, g[1], c), h_control, setup.basis);
  const ad::Real el = ad::mean_sq_rows(tape, residual);

  const ad::Real reg = ad::pad_rows(
      tape,
      ad::mean_sq_rows(tape, ad::commutator_rows(tape, ad::rows(tape, h_total[1], 1, n - 1),
                                                 ad::rows(tape, h_total[1], 0, n - 1), setup.basis)),
      1);

  ad::Cplx psi[3];
  for (int k = 0; k < 3; ++k) {
    const ad::Stack dense = ad::dense_from_coeffs(tape, h_total[k], setup.basis);
    const ad::Stack omegas = ad::magnus_omegas(tape, dense, setup.plan, setup.grid.dt(), setup.options.order);
    psi[k] = ad::propagate_chain(tape, ad::expm_each(tape, omegas), setup.psi_in);
  }
  const ad::Cplx d = ad::cscale(tape, ad::csub(tape, psi[2], psi[0]), cplx(1.0 / (2.0 * setup.delta), 0.0));
  const ad::Real fq =
      ad::scale(tape, ad::sub(tape, ad::norm2(tape, d), ad::norm2(tape, ad::cdot(tape, psi[1], d))), 4.0);
  const ad::Real fmax = ad::square(tape, ad::weighted_sum(tape, lam, setup.bound_weights));
  const ad::Real eta = ad::div(tape, fq, fmax);

  const ad::Cplx c_min = ad::cdot(tape, tape.constant(CMatrix(setup.extremal.vec_min)), psi[1]);
  const ad::Cplx c_max = ad::cdot(tape, tape.constant(CMatrix(setup.extremal.vec_max)), psi[1]);
  const ad::Real balance =
      ad::scale(tape, ad::hadamard(tape, ad::norm2(tape, c_min), ad::norm2(tape, c_max)), 4.0);
  const ad::Real cos_dphi = ad::relative_phase_cos(tape, c_min, c_max);

  const ad::Real eta_term = one_minus_sq(tape, eta);
  const ad::Real phase_term = one_minus_sq(tape, cos_dphi);
  const ad::Real balance_term = one_minus_sq(tape, balance);

  ad::Real per_time = ad::scale(tape, el, weights.w_el);
  if (weights.w_reg != 0.0) per_time = ad::add(tape, per_time, ad::scale(tape, reg, weights.w_reg));
  const std::pair<ad::Real, double> terminal[] = {
      {eta_term, weights.w_eta}, {phase_term, weights.w_phase}, {balance_term, weights.w_balance}};
  for (const auto& [term, w] : terminal)
    if (w != 0.0) per_time = ad::add_at(tape, per_time, n - 1, ad::scale(tape, term, w));

  ObjectiveResult r;
  auto& b = r.breakdown;
  b.el = tape.value(el).col(0);
  b.reg = tape.value(reg).col(0);
  b.terminal = {tape.value(eta_term)(0, 0), tape.value(phase_term)(0, 0), tape.value(balance_term)(0, 0)};
  b.weights = causality_weights(tape.value(per_time).col(0), weights.eps_t);
  const ad::Real total = ad::weighted_sum(tape, per_time, b.weights / static_cast<double>(n));
  b.total = tape.value(total)(0, 0);
  r.F_Q = tape.value(fq)(0, 0);
  r.F_Q_max = tape.value(fmax)(0, 0);
  r.eta = tape.value(eta)(0, 0);
  r.cos_dphi = tape.value(cos_dphi)(0, 0);
  r.balance = tape.value(balance)(0, 0);

  if (with_grad) {
    tape.backward(total);
    r.grad.resize(static_cast<Eigen::Index>(net.parameter_count()));
    Eigen::Index off = 0;
    for (const auto& p : out.params) {
      const RMatrix gp = tape.grad(p);
      r.grad.segment(off, gp.size()) = gp.reshaped();
      off += gp.size();
    }
  }
  return r;
}

Protocol protocol_from_net(const DualBranchNet& net, const ObjectiveSetup& setup) {
  const NetOutput out = net.forward(setup.tau);
  const auto n = static_cast<Eigen::Index>(setup.grid.n_t);
  Protocol p{setup.model, setup.basis, setup.grid, RVector(n), RVector(n), out.a, setup.psi_in};
  for (Eigen::Index j = 0; j < n; ++j) {
    if (setup.options.schedule == ScheduleMode::Learned) {
      const auto s = lambda_learned(setup.tau(j), out.u(j), out.u_dot(j));
      p.lambda(j) = s.lambda;
      p.lambda_rate(j) = s.dlambda_dt / setup.grid.T;
    } else {
      p.lambda(j) = setup.ref_lambda(j);
      p.lambda_rate(j) = setup.ref_rate(j);
    }
  }
  return p;
}

}  // namespace qficd
