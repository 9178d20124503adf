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

#include "qficd/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace qficd {

Adam::Adam(AdamConfig config, Eigen::Index n) : config_(config), m_(RVector::Zero(n)), v_(RVector::Zero(n)) {
  if (!(config.lr > 0.0)) throw std::invalid_argument("learning rate must be positive");
}

StepResult Adam::step(RVector& params, const RVector& grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) throw std::invalid_argument("Adam: shape mismatch");
  for (Eigen::Index i = 0; i < grad.size(); ++i)
    if (!std::isfinite(grad(i))) return {false, "non-finite gradient at parameter " + std::to_string(i)};
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  m_ = b1 * m_ + (1.0 - b1) * grad;
  v_ = b2 * v_ + (1.0 - b2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    const double mh = m_(i) / c1;
    const double vh = v_(i) / c2;
    params(i) -= config_.lr * mh / (std::sqrt(vh) + config_.eps);
  }
  return {};
}

void to_json(nlohmann::json& j, const Adam& a) {
  j = {{"lr", a.config_.lr},
       {"beta1", a.config_.beta1},
       {"beta2", a.config_.beta2},
       {"eps", a.config_.eps},
       {"step", a.t_},
       {"m", std::vector<double>(a.m_.data(), a.m_.data() + a.m_.size())},
       {"v", std::vector<double>(a.v_.data(), a.v_.data() + a.v_.size())}};
}

void from_json(const nlohmann::json& j, Adam& a) {
  a.config_ = {j.at("lr").get<double>(), j.at("beta1").get<double>(), j.at("beta2").get<double>(),
               j.at("eps").get<double>()};
  a.t_ = j.at("step").get<std::uint64_t>();
  const auto m = j.at("m").get<std::vector<double>>();
  const auto v = j.at("v").get<std::vector<double>>();
  if (m.size() != v.size()) throw std::invalid_argument("optimizer moment size mismatch");
  a.m_ = Eigen::Map<const RVector>(m.data(), static_cast<Eigen::Index>(m.size()));
  a.v_ = Eigen::Map<const RVector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace qficd
