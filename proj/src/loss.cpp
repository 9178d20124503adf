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

#include "qficd/loss.hpp"

#include <cmath>
#include <stdexcept>

#include "qficd/io.hpp"

namespace qficd {

LossWeights LossWeights::baseline() {
  LossWeights w;
  w.w_eta = 0.0;
  w.w_balance = 0.0;
  w.w_phase = 0.0;
  w.w_reg = 0.0;
  return w;
}

void LossWeights::validate() const {
  for (double v : {w_el, w_eta, w_balance, w_phase, w_reg, eps_t})
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("loss weights must be finite and non-negative");
}

void to_json(nlohmann::json& j, const LossWeights& w) {
  j = {{"w_el", w.w_el},       {"w_eta", w.w_eta}, {"w_balance", w.w_balance},
       {"w_phase", w.w_phase}, {"w_reg", w.w_reg}, {"eps_t", w.eps_t}};
}

void from_json(const nlohmann::json& j, LossWeights& w) {
  for (const auto& [key, _] : j.items())
    if (key != "w_el" && key != "w_eta" && key != "w_balance" && key != "w_phase" && key != "w_reg" && key != "eps_t")
      throw std::invalid_argument("unknown loss weight: " + key);
  w.w_el = j.value("w_el", w.w_el);
  w.w_eta = j.value("w_eta", w.w_eta);
  w.w_balance = j.value("w_balance", w.w_balance);
  w.w_phase = j.value("w_phase", w.w_phase);
  w.w_reg = j.value("w_reg", w.w_reg);
  w.eps_t = j.value("eps_t", w.eps_t);
  w.validate();
}

double el_loss(const CVector& residual) {
  if (residual.size() == 0) return 0.0;
  return residual.squaredNorm() / static_cast<double>(residual.size());
}

double commutativity_regularizer(const OperatorCoeffs& h_next, const OperatorCoeffs& h_now) {
  const OperatorCoeffs c = commutator_in_basis(h_next, h_now);
  return el_loss(c.values());
}

TerminalTerms terminal_losses(double eta, double cos_dphi, double balance) {
  constexpr double kSlack = 1e-6;
  if (!(eta >= -kSlack && eta <= 1.0 + kSlack)) throw std::domain_error("terminal_losses: eta outside [0, 1]");
  if (!(balance >= -kSlack && balance <= 1.0 + kSlack)) throw std::domain_error("terminal_losses: balance outside [0, 1]");
  if (!(cos_dphi >= -1.0 - kSlack && cos_dphi <= 1.0 + kSlack))
    throw std::domain_error("terminal_losses: cos_dphi outside [-1, 1]");
  return {(1.0 - eta) * (1.0 - eta), (1.0 - cos_dphi) * (1.0 - cos_dphi), (1.0 - balance) * (1.0 - balance)};
}

RVector causality_weights(const RVector& per_time, double eps_t) {
  RVector w(per_time.size());
  double acc = 0.0;
  for (Eigen::Index n = 0; n < per_time.size(); ++n) {
    if (!(per_time(n) >= 0.0) || !std::isfinite(per_time(n)))
      throw std::domain_error("causality_weights: losses must be finite and non-negative");
    w(n) = std::exp(-eps_t * acc);
    acc += per_time(n);
  }
  return w;
}

RVector per_time_losses(const LossBreakdown& b, const LossWeights& w) {
  if (b.el.size() != b.reg.size() || b.el.size() == 0) throw std::invalid_argument("loss breakdown shape mismatch");
  RVector l = w.w_el * b.el + w.w_reg * b.reg;
  l(l.size() - 1) += w.w_eta * b.terminal.eta + w.w_phase * b.terminal.phase + w.w_balance * b.terminal.balance;
  return l;
}

double total_loss(const LossBreakdown& b, const LossWeights& w) {
  const RVector l = per_time_losses(b, w);
  const RVector weights = causality_weights(l, w.eps_t);
  double acc = 0.0;
  for (Eigen::Index n = 0; n < l.size(); ++n) acc += weights(n) * l(n);
  return acc / static_cast<double>(l.size());
}

void write_loss_header(std::ostream& os) { os << "epoch,el,reg,eta_term,phase_term,balance_term,total\n"; }

void write_loss_row(std::ostream& os, std::size_t epoch, const LossBreakdown& b) {
  os << epoch << ',' << format_double(b.el.mean()) << ',' << format_double(b.reg.mean()) << ','
     << format_double(b.terminal.eta) << ',' << format_double(b.terminal.phase) << ','
     << format_double(b.terminal.balance) << ',' << format_double(b.total) << '\n';
}

}  // namespace qficd
