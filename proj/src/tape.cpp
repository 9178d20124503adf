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

#include "qficd/tape.hpp"

#include <cmath>
#include <stdexcept>

#include "qficd/kernels.hpp"
#include "qficd/schedule.hpp"

namespace qficd::ad {

Real Tape::leaf(RMatrix value) { return push(std::move(value), true, nullptr); }
Real Tape::constant(RMatrix value) { return push(std::move(value), false, nullptr); }
Cplx Tape::constant(CMatrix value) { return push(std::move(value), false, nullptr); }
Stack Tape::constant(std::vector<CMatrix> value) { return push(std::move(value), false, nullptr); }

Real Tape::push(RMatrix value, bool needs_grad, Rule rule) {
  Node n{Kind::Real, needs_grad, false, std::move(value), {}, {}, {}, {}, {}, std::move(rule)};
  nodes_.push_back(std::move(n));
  return Real{nodes_.size() - 1};
}

Cplx Tape::push(CMatrix value, bool needs_grad, Rule rule) {
  Node n{Kind::Cplx, needs_grad, false, {}, {}, std::move(value), {}, {}, {}, std::move(rule)};
  nodes_.push_back(std::move(n));
  return Cplx{nodes_.size() - 1};
}

Stack Tape::push(std::vector<CMatrix> value, bool needs_grad, Rule rule) {
  Node n{Kind::Stack, needs_grad, false, {}, {}, {}, {}, std::move(value), {}, std::move(rule)};
  nodes_.push_back(std::move(n));
  return Stack{nodes_.size() - 1};
}

const RMatrix& Tape::value(Real x) const { return nodes_.at(x.id).r; }
const CMatrix& Tape::value(Cplx x) const { return nodes_.at(x.id).c; }
const std::vector<CMatrix>& Tape::value(Stack x) const { return nodes_.at(x.id).s; }

RMatrix Tape::grad(Real x) const {
  const Node& n = nodes_.at(x.id);
  return n.touched ? n.r_bar : RMatrix::Zero(n.r.rows(), n.r.cols());
}

CMatrix Tape::grad(Cplx x) const {
  const Node& n = nodes_.at(x.id);
  return n.touched ? n.c_bar : CMatrix::Zero(n.c.rows(), n.c.cols());
}

RMatrix& Tape::adj(Real x) {
  Node& n = nodes_[x.id];
  if (!n.touched) {
    n.r_bar = RMatrix::Zero(n.r.rows(), n.r.cols());
    n.touched = true;
  }
  return n.r_bar;
}

CMatrix& Tape::adj(Cplx x) {
  Node& n = nodes_[x.id];
  if (!n.touched) {
    n.c_bar = CMatrix::Zero(n.c.rows(), n.c.cols());
    n.touched = true;
  }
  return n.c_bar;
}

std::vector<CMatrix>& Tape::adj(Stack x) {
  Node& n = nodes_[x.id];
  if (!n.touched) {
    n.s_bar.clear();
    n.s_bar.reserve(n.s.size());
    for (const auto& m : n.s) n.s_bar.push_back(CMatrix::Zero(m.rows(), m.cols()));
    n.touched = true;
  }
  return n.s_bar;
}

void Tape::backward(Real output) {
  Node& out = nodes_.at(output.id);
  if (out.kind != Kind::Real || out.r.size() != 1) throw std::invalid_argument("backward needs a scalar real output");
  for (auto& n : nodes_) {
    n.touched = false;
    n.r_bar.resize(0, 0);
    n.c_bar.resize(0, 0);
    n.s_bar.clear();
  }
  adj(output)(0, 0) = 1.0;
  for (std::size_t i = output.id + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.needs_grad && n.touched && n.rule) n.rule(*this, i);
  }
}

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double silu_d1(double z) {
  const double s = sigmoid(z);
  return s * (1.0 + z * (1.0 - s));
}
double silu_d2(double z) {
  const double s = sigmoid(z);
  return s * (1.0 - s) * (2.0 + z * (1.0 - 2.0 * s));
}

void require_scalar(const RMatrix& m, const char* what) {
  if (m.size() != 1) throw std::invalid_argument(std::string(what) + ": operand must be 1x1");
}

void require_same_shape(const RMatrix& a, const RMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

}  // namespace

Real affine(Tape& t, Real x, Real w, Real b) {
  const RMatrix& xv = t.value(x);
  const RMatrix& wv = t.value(w);
  const RMatrix& bv = t.value(b);
  if (xv.cols() != wv.cols() || bv.rows() != wv.rows() || bv.cols() != 1)
    throw std::invalid_argument("affine: parameter shape mismatch");
  RMatrix y = xv * wv.transpose();
  y.rowwise() += bv.col(0).transpose();
  const bool ng = t.needs_grad(x.id) || t.needs_grad(w.id) || t.needs_grad(b.id);
  return t.push(std::move(y), ng, [x, w, b](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    if (tp.needs_grad(x.id)) tp.adj(x) += g * tp.value(w);
    if (tp.needs_grad(w.id)) tp.adj(w) += g.transpose() * tp.value(x);
    if (tp.needs_grad(b.id)) tp.adj(b) += g.colwise().sum().transpose();
  });
}

Real linear(Tape& t, Real x, Real w) {
  const RMatrix& xv = t.value(x);
  const RMatrix& wv = t.value(w);
  if (xv.cols() != wv.cols()) throw std::invalid_argument("linear: parameter shape mismatch");
  const bool ng = t.needs_grad(x.id) || t.needs_grad(w.id);
  return t.push(RMatrix(xv * wv.transpose()), ng, [x, w](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    if (tp.needs_grad(x.id)) tp.adj(x) += g * tp.value(w);
    if (tp.needs_grad(w.id)) tp.adj(w) += g.transpose() * tp.value(x);
  });
}

Real silu(Tape& t, Real z) {
  const RMatrix y = t.value(z).unaryExpr([](double v) { return v * sigmoid(v); });
  return t.push(y, t.needs_grad(z.id), [z](Tape& tp, std::size_t self) {
    const RMatrix d = tp.value(z).unaryExpr([](double v) { return silu_d1(v); });
    tp.adj(z) += tp.adj(Real{self}).cwiseProduct(d);
  });
}

Real silu_jvp(Tape& t, Real z, Real z_dot) {
  require_same_shape(t.value(z), t.value(z_dot), "silu_jvp");
  const RMatrix d1 = t.value(z).unaryExpr([](double v) { return silu_d1(v); });
  const bool ng = t.needs_grad(z.id) || t.needs_grad(z_dot.id);
  return t.push(RMatrix(d1.cwiseProduct(t.value(z_dot))), ng, [z, z_dot](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    if (tp.needs_grad(z.id)) {
      const RMatrix d2 = tp.value(z).unaryExpr([](double v) { return silu_d2(v); });
      tp.adj(z) += g.cwiseProduct(d2).cwiseProduct(tp.value(z_dot));
    }
    if (tp.needs_grad(z_dot.id)) {
      const RMatrix d1b = tp.value(z).unaryExpr([](double v) { return silu_d1(v); });
      tp.adj(z_dot) += g.cwiseProduct(d1b);
    }
  });
}

Real add(Tape& t, Real a, Real b) {
  require_same_shape(t.value(a), t.value(b), "add");
  const bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  return t.push(RMatrix(t.value(a) + t.value(b)), ng, [a, b](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    if (tp.needs_grad(a.id)) tp.adj(a) += g;
    if (tp.needs_grad(b.id)) tp.adj(b) += g;
  });
}

Real sub(Tape& t, Real a, Real b) {
  require_same_shape(t.value(a), t.value(b), "sub");
  const bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  return t.push(RMatrix(t.value(a) - t.value(b)), ng, [a, b](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    if (tp.needs_grad(a.id)) tp.adj(a) += g;
    if (tp.needs_grad(b.id)) tp.adj(b) -= g;
  });
}

Real scale(Tape& t, Real a, double s) {
  return t.push(RMatrix(s * t.value(a)), t.needs_grad(a.id),
                [a, s](Tape& tp, std::size_t self) { tp.adj(a) += s * tp.adj(Real{self}); });
}

Real add_scalar(Tape& t, Real a, double s) {
  return t.push(RMatrix(t.value(a).array() + s), t.needs_grad(a.id),
                [a](Tape& tp, std::size_t self) { tp.adj(a) += tp.adj(Real{self}); });
}

Real hadamard(Tape& t, Real a, Real b) {
  require_same_shape(t.value(a), t.value(b), "hadamard");
  const bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  return t.push(RMatrix(t.value(a).cwiseProduct(t.value(b))), ng, [a, b](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    if (tp.needs_grad(a.id)) tp.adj(a) += g.cwiseProduct(tp.value(b));
    if (tp.needs_grad(b.id)) tp.adj(b) += g.cwiseProduct(tp.value(a));
  });
}

Real square(Tape& t, Real a) {
  return t.push(RMatrix(t.value(a).array().square()), t.needs_grad(a.id), [a](Tape& tp, std::size_t self) {
    tp.adj(a) += 2.0 * tp.adj(Real{self}).cwiseProduct(tp.value(a));
  });
}

Real div(Tape& t, Real a, Real b) {
  require_scalar(t.value(a), "div");
  require_scalar(t.value(b), "div");
  const double bv = t.value(b)(0, 0);
  if (bv == 0.0) throw std::domain_error("div: zero denominator");
  RMatrix y(1, 1);
  y(0, 0) = t.value(a)(0, 0) / bv;
  const bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  return t.push(std::move(y), ng, [a, b](Tape& tp, std::size_t self) {
    const double g = tp.adj(Real{self})(0, 0);
    const double av = tp.value(a)(0, 0);
    const double den = tp.value(b)(0, 0);
    if (tp.needs_grad(a.id)) tp.adj(a)(0, 0) += g / den;
    if (tp.needs_grad(b.id)) tp.adj(b)(0, 0) -= g * av / (den * den);
  });
}

Real sum(Tape& t, Real a) {
  RMatrix y(1, 1);
  y(0, 0) = t.value(a).sum();
  return t.push(std::move(y), t.needs_grad(a.id),
                [a](Tape& tp, std::size_t self) { tp.adj(a).array() += tp.adj(Real{self})(0, 0); });
}

Real mean_sq_rows(Tape& t, Real a) {
  const RMatrix& av = t.value(a);
  if (av.cols() == 0) throw std::invalid_argument("mean_sq_rows: no columns");
  const double inv = 1.0 / static_cast<double>(av.cols());
  return t.push(RMatrix(av.array().square().rowwise().sum() * inv), t.needs_grad(a.id),
                [a, inv](Tape& tp, std::size_t self) {
                  const RMatrix g = tp.adj(Real{self});
                  tp.adj(a) += (2.0 * inv) * (tp.value(a).array().colwise() * g.col(0).array()).matrix();
                });
}

Real row_scale(Tape& t, Real v, Real a) {
  const RMatrix& vv = t.value(v);
  const RMatrix& av = t.value(a);
  if (vv.cols() != 1 || vv.rows() != av.rows()) throw std::invalid_argument("row_scale: shape mismatch");
  const bool ng = t.needs_grad(v.id) || t.needs_grad(a.id);
  return t.push(RMatrix(av.array().colwise() * vv.col(0).array()), ng, [v, a](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    if (tp.needs_grad(v.id)) tp.adj(v) += g.cwiseProduct(tp.value(a)).rowwise().sum();
    if (tp.needs_grad(a.id)) tp.adj(a) += (g.array().colwise() * tp.value(v).col(0).array()).matrix();
  });
}

Real rows(Tape& t, Real a, Eigen::Index begin, Eigen::Index count) {
  const RMatrix& av = t.value(a);
  if (begin < 0 || count < 0 || begin + count > av.rows()) throw std::out_of_range("rows: range outside operand");
  return t.push(RMatrix(av.middleRows(begin, count)), t.needs_grad(a.id), [a, begin, count](Tape& tp, std::size_t self) {
    tp.adj(a).middleRows(begin, count) += tp.adj(Real{self});
  });
}

Real pad_rows(Tape& t, Real a, Eigen::Index count) {
  const RMatrix& av = t.value(a);
  RMatrix y = RMatrix::Zero(av.rows() + count, av.cols());
  y.topRows(av.rows()) = av;
  const Eigen::Index n = av.rows();
  return t.push(std::move(y), t.needs_grad(a.id),
                [a, n](Tape& tp, std::size_t self) { tp.adj(a) += tp.adj(Real{self}).topRows(n); });
}

Real add_at(Tape& t, Real a, Eigen::Index index, Real s) {
  const RMatrix& av = t.value(a);
  require_scalar(t.value(s), "add_at");
  if (av.cols() != 1 || index < 0 || index >= av.rows()) throw std::out_of_range("add_at: index outside operand");
  RMatrix y = av;
  y(index, 0) += t.value(s)(0, 0);
  const bool ng = t.needs_grad(a.id) || t.needs_grad(s.id);
  return t.push(std::move(y), ng, [a, index, s](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    if (tp.needs_grad(a.id)) tp.adj(a) += g;
    if (tp.needs_grad(s.id)) tp.adj(s)(0, 0) += g(index, 0);
  });
}

Real weighted_sum(Tape& t, Real a, const RVector& w) {
  const RMatrix& av = t.value(a);
  if (av.cols() != 1 || av.rows() != w.size()) throw std::invalid_argument("weighted_sum: shape mismatch");
  RMatrix y(1, 1);
  y(0, 0) = av.col(0).dot(w);
  return t.push(std::move(y), t.needs_grad(a.id),
                [a, w](Tape& tp, std::size_t self) { tp.adj(a).col(0) += tp.adj(Real{self})(0, 0) * w; });
}

namespace {

void check_schedule_inputs(const RMatrix& u, const RMatrix& u_dot, const RVector& times) {
  if (u.cols() != 1 || u_dot.cols() != 1 || u.rows() != u_dot.rows() || u.rows() != times.size())
    throw std::invalid_argument("schedule: shape mismatch");
}

}  // namespace

Real schedule_lambda(Tape& t, Real u, Real u_dot, const RVector& times) {
  check_schedule_inputs(t.value(u), t.value(u_dot), times);
  RMatrix y(times.size(), 1);
  for (Eigen::Index n = 0; n < times.size(); ++n)
    y(n, 0) = lambda_learned(times(n), t.value(u)(n, 0), t.value(u_dot)(n, 0)).lambda;
  return t.push(std::move(y), t.needs_grad(u.id), [u, u_dot, times](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    RMatrix& ub = tp.adj(u);
    for (Eigen::Index n = 0; n < times.size(); ++n)
      ub(n, 0) += g(n, 0) * lambda_learned_jacobian(times(n), tp.value(u)(n, 0), tp.value(u_dot)(n, 0)).dlambda_du;
  });
}

Real schedule_rate(Tape& t, Real u, Real u_dot, const RVector& times) {
  check_schedule_inputs(t.value(u), t.value(u_dot), times);
  RMatrix y(times.size(), 1);
  for (Eigen::Index n = 0; n < times.size(); ++n)
    y(n, 0) = lambda_learned(times(n), t.value(u)(n, 0), t.value(u_dot)(n, 0)).dlambda_dt;
  const bool ng = t.needs_grad(u.id) || t.needs_grad(u_dot.id);
  return t.push(std::move(y), ng, [u, u_dot, times](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    RMatrix ub = RMatrix::Zero(times.size(), 1);
    RMatrix udb = RMatrix::Zero(times.size(), 1);
    for (Eigen::Index n = 0; n < times.size(); ++n) {
      const auto jac = lambda_learned_jacobian(times(n), tp.value(u)(n, 0), tp.value(u_dot)(n, 0));
      ub(n, 0) = g(n, 0) * jac.drate_du;
      udb(n, 0) = g(n, 0) * jac.drate_dudot;
    }
    if (tp.needs_grad(u.id)) tp.adj(u) += ub;
    if (tp.needs_grad(u_dot.id)) tp.adj(u_dot) += udb;
  });
}

Real commutator_rows(Tape& t, Real x, Real h, const BasisPtr& basis) {
  const bool ng = t.needs_grad(x.id) || t.needs_grad(h.id);
  return t.push(kernels::commutator_rows(t.value(x), t.value(h), *basis), ng, [x, h, basis](Tape& tp, std::size_t self) {
    const RMatrix g = tp.adj(Real{self});
    RMatrix* xb = tp.needs_grad(x.id) ? &tp.adj(x) : nullptr;
    RMatrix* hb = tp.needs_grad(h.id) ? &tp.adj(h) : nullptr;
    kernels::commutator_rows_adjoint(tp.value(x), tp.value(h), *basis, g, xb, hb);
  });
}

Stack dense_from_coeffs(Tape& t, Real coeffs, const BasisPtr& basis) {
  return t.push(kernels::dense_rows(t.value(coeffs), *basis), t.needs_grad(coeffs.id),
                [coeffs, basis](Tape& tp, std::size_t self) {
                  tp.adj(coeffs) += kernels::dense_rows_adjoint(tp.adj(Stack{self}), *basis);
                });
}

Stack magnus_omegas(Tape& t, Stack h, const WindowPlan& plan, double dt, int order) {
  return t.push(kernels::window_omegas(t.value(h), plan, dt, order), t.needs_grad(h.id),
                [h, plan, dt, order](Tape& tp, std::size_t self) {
                  const auto hb = kernels::window_omegas_adjoint(tp.value(h), plan, dt, order, tp.adj(Stack{self}));
                  auto& acc = tp.adj(h);
                  for (std::size_t j = 0; j < hb.size(); ++j) acc[j] += hb[j];
                });
}

Stack expm_each(Tape& t, Stack omegas) {
  for (const auto& o : t.value(omegas))
    if (!is_finite(o)) throw std::domain_error("expm_each: non-finite generator");
  return t.push(kernels::window_exponentials(t.value(omegas)), t.needs_grad(omegas.id),
                [omegas](Tape& tp, std::size_t self) {
                  const auto& g = tp.adj(Stack{self});
                  const auto& om = tp.value(omegas);
                  std::vector<CMatrix> ob(om.size());
                  const auto n = static_cast<std::ptrdiff_t>(om.size());
#pragma omp parallel for schedule(static)
                  for (std::ptrdiff_t w = 0; w < n; ++w) {
                    const auto k = static_cast<std::size_t>(w);
                    ob[k] = expm_adjoint(om[k], g[k]);
                  }
                  auto& acc = tp.adj(omegas);
                  for (std::size_t k = 0; k < ob.size(); ++k) acc[k] += ob[k];
                });
}

Cplx propagate_chain(Tape& t, Stack u, const CVector& psi_in) {
  const auto& us = t.value(u);
  std::vector<CVector> states;
  states.reserve(us.size() + 1);
  states.push_back(psi_in);
  for (const auto& uw : us) {
    if (uw.cols() != states.back().size()) throw std::invalid_argument("propagate_chain: dimension mismatch");
    states.push_back(uw * states.back());
  }
  CMatrix out = states.back();
  return t.push(std::move(out), t.needs_grad(u.id), [u, states = std::move(states)](Tape& tp, std::size_t self) {
    const auto& us2 = tp.value(u);
    auto& ub = tp.adj(u);
    CVector g = tp.adj(Cplx{self}).col(0);
    for (std::size_t w = us2.size(); w-- > 0;) {
      ub[w] += g * states[w].adjoint();
      g = us2[w].adjoint() * g;
    }
  });
}

Cplx csub(Tape& t, Cplx a, Cplx b) {
  if (t.value(a).rows() != t.value(b).rows() || t.value(a).cols() != t.value(b).cols())
    throw std::invalid_argument("csub: shape mismatch");
  const bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  return t.push(CMatrix(t.value(a) - t.value(b)), ng, [a, b](Tape& tp, std::size_t self) {
    const CMatrix g = tp.adj(Cplx{self});
    if (tp.needs_grad(a.id)) tp.adj(a) += g;
    if (tp.needs_grad(b.id)) tp.adj(b) -= g;
  });
}

Cplx cscale(Tape& t, Cplx a, cplx s) {
  return t.push(CMatrix(s * t.value(a)), t.needs_grad(a.id),
                [a, s](Tape& tp, std::size_t self) { tp.adj(a) += std::conj(s) * tp.adj(Cplx{self}); });
}

Cplx cdot(Tape& t, Cplx a, Cplx b) {
  const CMatrix& av = t.value(a);
  const CMatrix& bv = t.value(b);
  if (av.cols() != 1 || bv.cols() != 1 || av.rows() != bv.rows()) throw std::invalid_argument("cdot: shape mismatch");
  CMatrix y(1, 1);
  y(0, 0) = av.col(0).dot(bv.col(0));
  const bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  return t.push(std::move(y), ng, [a, b](Tape& tp, std::size_t self) {
    const cplx g = tp.adj(Cplx{self})(0, 0);
    if (tp.needs_grad(a.id)) tp.adj(a) += tp.value(b) * std::conj(g);
    if (tp.needs_grad(b.id)) tp.adj(b) += tp.value(a) * g;
  });
}

Real norm2(Tape& t, Cplx z) {
  RMatrix y(1, 1);
  y(0, 0) = t.value(z).squaredNorm();
  return t.push(std::move(y), t.needs_grad(z.id),
                [z](Tape& tp, std::size_t self) { tp.adj(z) += (2.0 * tp.adj(Real{self})(0, 0)) * tp.value(z); });
}

Real relative_phase_cos(Tape& t, Cplx a, Cplx b) {
  if (t.value(a).size() != 1 || t.value(b).size() != 1) throw std::invalid_argument("relative_phase_cos: operands must be 1x1");
  const cplx av = t.value(a)(0, 0);
  const cplx bv = t.value(b)(0, 0);
  const double ma = std::abs(av);
  const double mb = std::abs(bv);
  constexpr double kFloor = 1e-150;
  RMatrix y(1, 1);
  if (ma < kFloor || mb < kFloor) {
    y(0, 0) = 1.0;
    return t.push(std::move(y), false, nullptr);
  }
  const cplx prod = std::conj(av) * bv;
  y(0, 0) = prod.real() / (ma * mb);
  const bool ng = t.needs_grad(a.id) || t.needs_grad(b.id);
  return t.push(std::move(y), ng, [a, b](Tape& tp, std::size_t self) {
    const double g = tp.adj(Real{self})(0, 0);
    const cplx av2 = tp.value(a)(0, 0);
    const cplx bv2 = tp.value(b)(0, 0);
    const double na = std::norm(av2);
    const double nb = std::norm(bv2);
    const double sin_delta = (std::conj(av2) * bv2).imag() / std::sqrt(na * nb);
    // d arg(c) pulls back to i c / |c|^2; d cos(delta) = -sin(delta) d delta.
    if (tp.needs_grad(a.id)) tp.adj(a)(0, 0) += g * sin_delta * kI * av2 / na;
    if (tp.needs_grad(b.id)) tp.adj(b)(0, 0) -= g * sin_delta * kI * bv2 / nb;
  });
}

}  // namespace qficd::ad
