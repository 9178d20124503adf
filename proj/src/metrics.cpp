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

#include "qficd/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qficd/kernels.hpp"
#include "qficd/magnus.hpp"
#include "qficd/schedule.hpp"

namespace qficd {

void Protocol::validate() const {
  if (!basis) throw std::invalid_argument("protocol: missing basis");
  const auto n = static_cast<Eigen::Index>(grid.n_t);
  const auto m = static_cast<Eigen::Index>(basis->size());
  if (lambda.size() != n || lambda_rate.size() != n || agp.rows() != n || agp.cols() != m)
    throw std::invalid_argument("protocol: arrays do not match the grid and basis");
  if (psi_in.size() != (Eigen::Index{1} << basis->q())) throw std::invalid_argument("protocol: state dimension mismatch");
}

RMatrix Protocol::control_rows(double omega) const {
  const auto ops = model_operators(model, basis);
  RMatrix rows = dlambda_rows(ops, grid.times(), omega);
  rows = (rows.array().colwise() * lambda.array()).matrix();
  rows.rowwise() += ops.initial.transpose();
  return rows;
}

RMatrix Protocol::total_rows(double omega) const {
  return control_rows(omega) + RMatrix(agp.array().colwise() * lambda_rate.array());
}

RMatrix Protocol::sensitivity_rows(double omega) const {
  const auto ops = model_operators(model, basis);
  return (bracket_rows(ops, grid.times(), omega).array().colwise() * lambda.array()).matrix();
}

std::vector<CMatrix> Protocol::control_dense(double omega) const {
  return kernels::dense_rows(control_rows(omega), *basis);
}
std::vector<CMatrix> Protocol::total_dense(double omega) const { return kernels::dense_rows(total_rows(omega), *basis); }
std::vector<CMatrix> Protocol::sensitivity_dense(double omega) const {
  return kernels::dense_rows(sensitivity_rows(omega), *basis);
}

Protocol reference_protocol(const ModelSpec& model, const BasisPtr& basis, const TimeGrid& grid, const CVector& psi_in) {
  Protocol p{model, basis, grid, RVector(grid.n_t), RVector(grid.n_t),
             RMatrix::Zero(static_cast<Eigen::Index>(grid.n_t), static_cast<Eigen::Index>(basis->size())), psi_in};
  for (std::size_t j = 0; j < grid.n_t; ++j) {
    const auto s = lambda_ref(grid.time(j) / grid.T);
    p.lambda(static_cast<Eigen::Index>(j)) = s.lambda;
    p.lambda_rate(static_cast<Eigen::Index>(j)) = s.dlambda_dt / grid.T;
  }
  return p;
}

ExtremalPair extremal_pair(const CMatrix& sensitivity) {
  const HermitianEigen e = jacobi_eigh(sensitivity);
  const Eigen::Index d = e.values.size();
  ExtremalPair p;
  p.val_min = e.values(0);
  p.val_max = e.values(d - 1);
  p.vec_min = e.vectors.col(0);
  p.vec_max = e.vectors.col(d - 1);
  constexpr double kTol = 1e-10;
  p.degenerate = d < 2 || std::abs(e.values(1) - e.values(0)) <= kTol || std::abs(e.values(d - 1) - e.values(d - 2)) <= kTol;
  return p;
}

std::string to_string(InitialState s) {
  return s == InitialState::PlusProduct ? "plus-product" : "extremal-superposition";
}

InitialState initial_state_from_string(const std::string& s) {
  if (s == "plus-product") return InitialState::PlusProduct;
  if (s == "extremal-superposition") return InitialState::ExtremalSuperposition;
  throw std::invalid_argument("unknown initial state policy: " + s);
}

CVector initial_state(InitialState policy, const ModelSpec& model, const BasisPtr& basis, const TimeGrid& grid) {
  const Eigen::Index d = Eigen::Index{1} << model.q;
  if (policy == InitialState::PlusProduct) return CVector::Constant(d, cplx(1.0 / std::sqrt(static_cast<double>(d)), 0.0));
  const auto ops = model_operators(model, basis);
  const RMatrix row = bracket_rows(ops, {grid.time(1)}, model.omega);
  const auto dense = kernels::dense_rows(row, *basis);
  const ExtremalPair pair = extremal_pair(dense.front());
  CVector psi = (pair.vec_min + pair.vec_max) / std::sqrt(2.0);
  return psi / psi.norm();
}

double qfi_from_states(const CVector& psi_minus, const CVector& psi, const CVector& psi_plus, double delta) {
  const CVector d = (psi_plus - psi_minus) / (2.0 * delta);
  return 4.0 * (d.squaredNorm() - std::norm(psi.dot(d)));
}

namespace {

CVector final_state(const Protocol& p, double omega, const Propagation& how, std::vector<CMatrix>* props) {
  const auto h = p.total_dense(omega);
  if (how.sequential) return evolve_sequential(p.psi_in, h, p.grid);
  auto ev = evolve_windowed(p.psi_in, h, p.grid, WindowPlan(p.grid.n_t, how.n_w), how.order);
  if (props) *props = std::move(ev.propagators);
  return ev.psi_final;
}

void require_normalized(const CVector& psi) {
  if (std::abs(psi.norm() - 1.0) > 1e-8) throw std::runtime_error("evolved state is not normalized");
}

}  // namespace

QfiResult qfi_central_diff(const Protocol& p, double omega, double delta, const Propagation& how) {
  if (!(delta > 0.0)) throw std::invalid_argument("qfi_central_diff: delta must be positive");
  p.validate();
  QfiResult r;
  r.psi_minus = final_state(p, omega - delta, how, nullptr);
  r.psi = final_state(p, omega, how, &r.propagators);
  r.psi_plus = final_state(p, omega + delta, how, nullptr);
  for (const auto* s : {&r.psi_minus, &r.psi, &r.psi_plus}) require_normalized(*s);
  r.F = qfi_from_states(r.psi_minus, r.psi, r.psi_plus, delta);
  return r;
}

RVector trapezoid_weights(const TimeGrid& grid) {
  RVector w = RVector::Constant(static_cast<Eigen::Index>(grid.n_t), grid.dt());
  w(0) *= 0.5;
  w(w.size() - 1) *= 0.5;
  return w;
}

double qfi_max_bound(const std::vector<CMatrix>& sensitivity, const TimeGrid& grid) {
  if (sensitivity.size() != grid.n_t) throw std::invalid_argument("qfi_max_bound: sample count mismatch");
  const RVector w = trapezoid_weights(grid);
  double integral = 0.0;
  for (std::size_t j = 0; j < grid.n_t; ++j) {
    const RVector ev = jacobi_eigh(sensitivity[j]).values;
    integral += w(static_cast<Eigen::Index>(j)) * (ev(ev.size() - 1) - ev(0));
  }
  return integral * integral;
}

double qfi_via_generator(const std::vector<CMatrix>& h_total, const std::vector<CMatrix>& sensitivity,
                         const TimeGrid& grid, const CVector& psi_in) {
  if (h_total.size() != grid.n_t || sensitivity.size() != grid.n_t)
    throw std::invalid_argument("qfi_via_generator: sample count mismatch");
  const Eigen::Index d = psi_in.size();
  const double dt = grid.dt();
  CMatrix u = CMatrix::Identity(d, d);
  CMatrix gen = CMatrix::Zero(d, d);
  // Simpson's rule inside each step of the piecewise-constant evolution.
  for (std::size_t j = 0; j + 1 < grid.n_t; ++j) {
    const CMatrix half = window_propagator(-kI * (0.5 * dt) * h_total[j]);
    const CMatrix mid = half * u;
    const CMatrix end = half * mid;
    const CMatrix& s = sensitivity[j];
    gen += (dt / 6.0) * (u.adjoint() * s * u + 4.0 * (mid.adjoint() * s * mid) + end.adjoint() * s * end);
    u = end;
  }
  const CVector g_psi = gen * psi_in;
  const double mean = psi_in.dot(g_psi).real();
  const double second = g_psi.squaredNorm();
  return 4.0 * (second - mean * mean);
}

FidelityBlock fidelity_block(const CVector& psi_T, const ExtremalPair& pair) {
  if (psi_T.size() != pair.vec_min.size() || psi_T.size() != pair.vec_max.size())
    throw std::invalid_argument("fidelity_block: dimension mismatch");
  const cplx c_min = pair.vec_min.dot(psi_T);
  const cplx c_max = pair.vec_max.dot(psi_T);
  FidelityBlock f;
  f.degenerate = pair.degenerate;
  f.p_min = std::norm(c_min);
  f.p_max = std::norm(c_max);
  const double mag = std::abs(c_min) * std::abs(c_max);
  f.cos_dphi = mag < 1e-150 ? 1.0 : (std::conj(c_min) * c_max).real() / mag;
  f.balance = 4.0 * f.p_min * f.p_max;
  const CVector target = (pair.vec_min + pair.vec_max) / std::sqrt(2.0);
  f.fidelity = std::norm(target.dot(psi_T));
  f.fidelity_decomposed = 0.5 * (f.p_min + f.p_max + 2.0 * std::sqrt(f.p_min * f.p_max) * f.cos_dphi);
  if (std::abs(f.fidelity - f.fidelity_decomposed) > 1e-10)
    throw std::logic_error("fidelity decomposition does not match the direct overlap");
  return f;
}

ResidualResult schrodinger_residual(const std::vector<CVector>& states, const std::vector<CMatrix>& h,
                                    const TimeGrid& grid) {
  const std::size_t n = grid.n_t;
  if (n < 3) throw std::invalid_argument("schrodinger_residual: needs at least three grid points");
  if (states.size() != n || h.size() != n) throw std::invalid_argument("schrodinger_residual: sample count mismatch");
  const double dt = grid.dt();
  const RVector w = trapezoid_weights(grid);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    CVector dpsi;
    if (j == 0)
      dpsi = (-3.0 * states[0] + 4.0 * states[1] - states[2]) / (2.0 * dt);
    else if (j + 1 == n)
      dpsi = (3.0 * states[n - 1] - 4.0 * states[n - 2] + states[n - 3]) / (2.0 * dt);
    else
      dpsi = (states[j + 1] - states[j - 1]) / (2.0 * dt);
    const CVector h_psi = h[j] * states[j];
    num += w(static_cast<Eigen::Index>(j)) * (kI * dpsi - h_psi).squaredNorm();
    den += w(static_cast<Eigen::Index>(j)) * h_psi.squaredNorm();
  }
  if (den == 0.0) return {0.0, true};
  return {std::sqrt(num / den), false};
}

double unitarity_error(const std::vector<CMatrix>& propagators) {
  if (propagators.empty()) return 0.0;
  double acc = 0.0;
  const Eigen::Index d = propagators.front().rows();
  for (const auto& u : propagators) acc += (u.adjoint() * u - CMatrix::Identity(d, d)).squaredNorm();
  return std::sqrt(acc / (static_cast<double>(propagators.size()) * static_cast<double>(d)));
}

Trace extremal_subspace_trace(const std::vector<CVector>& states, const std::vector<CMatrix>& sensitivity) {
  if (states.size() != sensitivity.size()) throw std::invalid_argument("extremal_subspace_trace: sample count mismatch");
  Trace t;
  for (std::size_t j = 0; j < states.size(); ++j) {
    const ExtremalPair p = extremal_pair(sensitivity[j]);
    t.values.push_back(std::norm(p.vec_min.dot(states[j])) + std::norm(p.vec_max.dot(states[j])));
    t.flags.push_back(p.degenerate);
  }
  return t;
}

Trace symmetry_mismatch(const std::vector<CMatrix>& ops, const CMatrix& symmetry) {
  Trace t;
  const double s_norm = symmetry.norm();
  for (const auto& o : ops) {
    const double den = o.norm() * s_norm;
    if (den == 0.0) {
      t.values.push_back(0.0);
      t.flags.push_back(true);
      continue;
    }
    t.values.push_back(commutator(o, symmetry).norm() / den);
    t.flags.push_back(false);
  }
  return t;
}

CMatrix parity_x(int q) {
  std::vector<PauliLetter> letters(static_cast<std::size_t>(q), PauliLetter::X);
  return to_dense(PauliTerm(letters));
}

std::string to_string(ExtremalFrame f) { return f == ExtremalFrame::Evolved ? "evolved" : "instantaneous"; }

ExtremalFrame extremal_frame_from_string(const std::string& s) {
  if (s == "evolved") return ExtremalFrame::Evolved;
  if (s == "instantaneous") return ExtremalFrame::Instantaneous;
  throw std::invalid_argument("unknown extremal frame: " + s);
}

namespace {

nlohmann::json optional_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

void to_json(nlohmann::json& j, const MetricsReport& r) {
  j = {{"eta", optional_json(r.eta)},
       {"eta_defined", r.eta.has_value()},
       {"F_Q", r.F_Q},
       {"F_Q_max", r.F_Q_max},
       {"fidelity", r.fidelity},
       {"fidelity_decomposed", r.fidelity_decomposed},
       {"p_min", r.p_min},
       {"p_max", r.p_max},
       {"cos_dphi", r.cos_dphi},
       {"balance", r.balance},
       {"extremal_degenerate", r.extremal_degenerate},
       {"schr_residual", r.schr_residual},
       {"schr_degenerate", r.schr_degenerate},
       {"unitarity_error", r.unitarity_error},
       {"eta_sequential", optional_json(r.eta_sequential)},
       {"eps_eta", r.eps_eta},
       {"qfi_generator", r.qfi_generator}};
}

MetricsReport evaluate_protocol(const Protocol& p, const EvaluationOptions& opts) {
  p.validate();
  const double omega = p.model.omega;
  const double delta = opts.delta_rel * omega;
  MetricsReport r;

  const QfiResult windowed = qfi_central_diff(p, omega, delta, opts.propagation);
  Propagation seq = opts.propagation;
  seq.sequential = true;
  const QfiResult sequential = qfi_central_diff(p, omega, delta, seq);

  const auto sens = p.sensitivity_dense(omega);
  const auto h_total = p.total_dense(omega);
  r.F_Q = windowed.F;
  r.F_Q_max = qfi_max_bound(sens, p.grid);
  if (r.F_Q_max > 0.0) {
    r.eta = r.F_Q / r.F_Q_max;
    r.eta_sequential = sequential.F / r.F_Q_max;
    r.eps_eta = std::abs(*r.eta - *r.eta_sequential);
  } else {
    r.eps_eta = std::numeric_limits<double>::quiet_NaN();
  }
  r.qfi_generator = qfi_via_generator(h_total, sens, p.grid, p.psi_in);
  r.unitarity_error = unitarity_error(windowed.propagators);

  const auto states = sequential_states(p.psi_in, h_total, p.grid);
  ExtremalPair pair = extremal_pair(sens.back());
  if (opts.frame == ExtremalFrame::Evolved) {
    const ModelOperators ops = model_operators(p.model, p.basis);
    const auto start = kernels::dense_rows(bracket_rows(ops, {p.grid.time(1)}, omega), *p.basis);
    pair = extremal_pair(start.front());
    const double dt = p.grid.dt();
    for (std::size_t j = 1; j + 1 < p.grid.n_t; ++j) {
      const CMatrix u = window_propagator(-kI * dt * h_total[j]);
      pair.vec_min = u * pair.vec_min;
      pair.vec_max = u * pair.vec_max;
    }
  }
  const FidelityBlock fb = fidelity_block(windowed.psi, pair);
  r.fidelity = fb.fidelity;
  r.fidelity_decomposed = fb.fidelity_decomposed;
  r.p_min = fb.p_min;
  r.p_max = fb.p_max;
  r.cos_dphi = fb.cos_dphi;
  r.balance = fb.balance;
  r.extremal_degenerate = fb.degenerate;

  const ResidualResult res = schrodinger_residual(states, h_total, p.grid);
  r.schr_residual = res.value;
  r.schr_degenerate = res.degenerate;

  r.times = p.grid.times();
  r.lambda.assign(p.lambda.data(), p.lambda.data() + p.lambda.size());
  r.lambda_rate.assign(p.lambda_rate.data(), p.lambda_rate.data() + p.lambda_rate.size());
  r.p_ext = extremal_subspace_trace(states, sens);
  const CMatrix sx = parity_x(p.model.q);
  r.mismatch_control = symmetry_mismatch(p.control_dense(omega), sx);
  r.mismatch_sensitivity = symmetry_mismatch(sens, sx);
  r.mismatch_total = symmetry_mismatch(h_total, sx);
  return r;
}

}  // namespace qficd
