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

#include "qficd/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qficd {

std::string to_string(Family f) {
  switch (f) {
    case Family::NearestNeighbor: return "nearest-neighbor";
    case Family::Dipolar: return "dipolar";
    case Family::VanDerWaals: return "van-der-waals";
  }
  return "unknown";
}

Family family_from_string(const std::string& s) {
  if (s == "nearest-neighbor") return Family::NearestNeighbor;
  if (s == "dipolar") return Family::Dipolar;
  if (s == "van-der-waals" || s == "trapped-ions") return Family::VanDerWaals;
  throw std::invalid_argument("unknown model family '" + s + "'");
}

double ModelSpec::alpha() const {
  switch (family) {
    case Family::NearestNeighbor: return std::numeric_limits<double>::infinity();
    case Family::Dipolar: return 3.0;
    case Family::VanDerWaals: return 6.0;
  }
  return 0.0;
}

double ModelSpec::pair_strength(int i, int j) const {
  const int dist = std::abs(i - j);
  if (dist == 0) return 0.0;
  if (family == Family::NearestNeighbor) return dist == 1 ? J : 0.0;
  return std::pow(static_cast<double>(dist), -alpha());
}

void ModelSpec::validate() const {
  if (q < 2) throw std::invalid_argument("model: q must be >= 2");
  if (!(h > 0.0)) throw std::invalid_argument("model: h must be > 0");
  if (!(omega > 0.0)) throw std::invalid_argument("model: omega must be > 0");
  if (!(T > 0.0)) throw std::invalid_argument("model: T must be > 0");
}

void to_json(nlohmann::json& j, const ModelSpec& m) {
  j = {{"family", to_string(m.family)}, {"q", m.q}, {"h", m.h}, {"omega", m.omega}};
}

void from_json(const nlohmann::json& j, ModelSpec& m) {
  for (const auto& [key, _] : j.items()) {
    if (key != "family" && key != "q" && key != "h" && key != "omega")
      throw std::invalid_argument("model: unknown key '" + key + "'");
  }
  m = ModelSpec{};
  m.family = family_from_string(j.at("family").get<std::string>());
  m.q = j.at("q").get<int>();
  if (j.contains("h")) m.h = j.at("h").get<double>();
  if (j.contains("omega")) m.omega = j.at("omega").get<double>();
}

namespace {

std::size_t require_index(const OperatorBasis& basis, const PauliTerm& t) {
  const auto idx = basis.index_of(t);
  if (idx < 0) throw std::invalid_argument("model term " + t.str() + " lies outside the basis (k too small)");
  return static_cast<std::size_t>(idx);
}

PauliTerm single(int q, int site, PauliLetter l) {
  std::vector<PauliLetter> letters(static_cast<std::size_t>(q), PauliLetter::I);
  letters[static_cast<std::size_t>(site)] = l;
  return PauliTerm(std::move(letters));
}

PauliTerm xy_pair(int q, int i, int j) {
  std::vector<PauliLetter> letters(static_cast<std::size_t>(q), PauliLetter::I);
  letters[static_cast<std::size_t>(i)] = PauliLetter::X;
  letters[static_cast<std::size_t>(j)] = PauliLetter::Y;
  return PauliTerm(std::move(letters));
}

}  // namespace

ModelOperators model_operators(const ModelSpec& spec, BasisPtr basis) {
  spec.validate();
  if (basis->q() != spec.q) throw std::invalid_argument("model: basis qubit count does not match model");
  if (basis->k() < 2) throw std::invalid_argument("model: basis must include weight-2 terms (k >= 2)");
  const auto m = static_cast<Eigen::Index>(basis->size());
  ModelOperators ops{basis, RVector::Zero(m), RVector::Zero(m), RVector::Zero(m)};
  for (int i = 0; i < spec.q; ++i) {
    ops.initial(static_cast<Eigen::Index>(require_index(*basis, single(spec.q, i, PauliLetter::X)))) = spec.h;
    ops.zfield(static_cast<Eigen::Index>(require_index(*basis, single(spec.q, i, PauliLetter::Z)))) = 1.0;
  }
  // Ordered pairs: X_i Y_j and X_j Y_i are distinct strings and both appear.
  for (int i = 0; i < spec.q; ++i) {
    for (int j = 0; j < spec.q; ++j) {
      if (i == j) continue;
      const double s = spec.pair_strength(i, j);
      if (s == 0.0) continue;
      ops.pairs(static_cast<Eigen::Index>(require_index(*basis, xy_pair(spec.q, i, j)))) += s;
    }
  }
  return ops;
}

OperatorCoeffs initial_coeffs(const ModelSpec& spec, const BasisPtr& basis) {
  if (basis->q() != spec.q) throw std::invalid_argument("initial_coeffs: basis qubit count does not match model");
  OperatorCoeffs out(basis);
  for (int i = 0; i < spec.q; ++i) out[require_index(*basis, single(spec.q, i, PauliLetter::X))] = spec.h;
  return out;
}

OperatorCoeffs final_coeffs(const ModelSpec& spec, const BasisPtr& basis, double t) {
  const auto ops = model_operators(spec, basis);
  const RVector v = -std::sin(spec.omega * t) * ops.pairs + std::cos(spec.omega * t) * ops.zfield;
  return OperatorCoeffs::from_real(basis, v);
}

OperatorCoeffs control_coeffs(const ModelSpec& spec, const BasisPtr& basis, double t, double lambda) {
  const auto ops = model_operators(spec, basis);
  const RVector fin = -std::sin(spec.omega * t) * ops.pairs + std::cos(spec.omega * t) * ops.zfield;
  return OperatorCoeffs::from_real(basis, (1.0 - lambda) * ops.initial + lambda * fin);
}

OperatorCoeffs sensitivity_coeffs(const ModelSpec& spec, const BasisPtr& basis, double t, double lambda) {
  const auto ops = model_operators(spec, basis);
  const double wt = spec.omega * t;
  const RVector v = lambda * (-t * std::cos(wt) * ops.pairs - t * std::sin(wt) * ops.zfield);
  return OperatorCoeffs::from_real(basis, v);
}

OperatorCoeffs dlambda_coeffs(const ModelSpec& spec, const BasisPtr& basis, double t) {
  const auto ops = model_operators(spec, basis);
  const RVector fin = -std::sin(spec.omega * t) * ops.pairs + std::cos(spec.omega * t) * ops.zfield;
  return OperatorCoeffs::from_real(basis, fin - ops.initial);
}

OperatorCoeffs total_coeffs(const ModelSpec& spec, double t, double lambda, double dlambda_dt, const OperatorCoeffs& agp) {
  const auto ctrl = control_coeffs(spec, agp.basis(), t, lambda);
  return ctrl + agp * dlambda_dt;
}

RMatrix final_rows(const ModelOperators& ops, const std::vector<double>& times, double omega) {
  RMatrix out(static_cast<Eigen::Index>(times.size()), ops.pairs.size());
  for (std::size_t n = 0; n < times.size(); ++n) {
    const double wt = omega * times[n];
    out.row(static_cast<Eigen::Index>(n)) = (-std::sin(wt) * ops.pairs + std::cos(wt) * ops.zfield).transpose();
  }
  return out;
}

RMatrix dlambda_rows(const ModelOperators& ops, const std::vector<double>& times, double omega) {
  RMatrix out = final_rows(ops, times, omega);
  out.rowwise() -= ops.initial.transpose();
  return out;
}

RMatrix bracket_rows(const ModelOperators& ops, const std::vector<double>& times, double omega) {
  RMatrix out(static_cast<Eigen::Index>(times.size()), ops.pairs.size());
  for (std::size_t n = 0; n < times.size(); ++n) {
    const double t = times[n];
    const double wt = omega * t;
    out.row(static_cast<Eigen::Index>(n)) = (-t * std::cos(wt) * ops.pairs - t * std::sin(wt) * ops.zfield).transpose();
  }
  return out;
}

}  // namespace qficd
