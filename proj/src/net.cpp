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

#include "qficd/net.hpp"

#include <cmath>
#include <stdexcept>

namespace qficd {

void NetShape::validate() const {
  if (lambda_width < 1 || agp_width < 1) throw std::invalid_argument("layer widths must be positive");
  if (lambda_depth < 0 || agp_depth < 0) throw std::invalid_argument("layer depths must be non-negative");
  if (basis_size == 0) throw std::invalid_argument("basis size must be positive");
}

void to_json(nlohmann::json& j, const NetShape& s) {
  j = {{"lambda_width", s.lambda_width},
       {"lambda_depth", s.lambda_depth},
       {"agp_width", s.agp_width},
       {"agp_depth", s.agp_depth},
       {"basis_size", s.basis_size}};
}

void from_json(const nlohmann::json& j, NetShape& s) {
  j.at("lambda_width").get_to(s.lambda_width);
  j.at("lambda_depth").get_to(s.lambda_depth);
  j.at("agp_width").get_to(s.agp_width);
  j.at("agp_depth").get_to(s.agp_depth);
  j.at("basis_size").get_to(s.basis_size);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::vector<Layer> zero_branch(int width, int depth, Eigen::Index out) {
  std::vector<Layer> layers;
  Eigen::Index in = 1;
  for (int l = 0; l < depth; ++l) {
    layers.push_back({RMatrix::Zero(width, in), RMatrix::Zero(width, 1)});
    in = width;
  }
  layers.push_back({RMatrix::Zero(out, in), RMatrix::Zero(out, 1)});
  return layers;
}

double silu_value(double z) { return z / (1.0 + std::exp(-z)); }
double silu_slope(double z) {
  const double s = 1.0 / (1.0 + std::exp(-z));
  return s * (1.0 + z * (1.0 - s));
}

}  // namespace

double counter_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t bits = splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

RMatrix xavier_init(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, std::uint64_t stream) {
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  RMatrix w(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto idx = static_cast<std::uint64_t>(r * cols + c);
      w(r, c) = bound * (2.0 * counter_uniform(seed, stream, idx) - 1.0);
    }
  return w;
}

DualBranchNet::DualBranchNet(const NetShape& shape) : shape_(shape) {
  shape.validate();
  lambda_ = zero_branch(shape.lambda_width, shape.lambda_depth, 1);
  agp_ = zero_branch(shape.agp_width, shape.agp_depth, static_cast<Eigen::Index>(shape.basis_size));
}

DualBranchNet DualBranchNet::xavier(const NetShape& shape, std::uint64_t seed) {
  DualBranchNet net(shape);
  std::uint64_t stream = 0;
  for (auto* branch : {&net.lambda_, &net.agp_})
    for (auto& layer : *branch) layer.W = xavier_init(layer.W.rows(), layer.W.cols(), seed, stream++);
  return net;
}

void DualBranchNet::check_shapes() const {
  auto check = [](const std::vector<Layer>& layers, Eigen::Index out) {
    if (layers.empty()) throw std::invalid_argument("network branch has no layers");
    Eigen::Index in = 1;
    for (const auto& l : layers) {
      if (l.W.cols() != in || l.b.rows() != l.W.rows() || l.b.cols() != 1)
        throw std::invalid_argument("network parameter shape mismatch");
      in = l.W.rows();
    }
    if (in != out) throw std::invalid_argument("network output size mismatch");
  };
  check(lambda_, 1);
  check(agp_, static_cast<Eigen::Index>(shape_.basis_size));
}

NetOutput DualBranchNet::forward(const RVector& t) const {
  check_shapes();
  NetOutput out;
  const Eigen::Index n = t.size();
  {
    RMatrix x = t;
    RMatrix x_dot = RMatrix::Ones(n, 1);
    for (std::size_t l = 0; l < lambda_.size(); ++l) {
      const Layer& L = lambda_[l];
      RMatrix z = x * L.W.transpose();
      z.rowwise() += L.b.col(0).transpose();
      RMatrix z_dot = x_dot * L.W.transpose();
      if (l + 1 == lambda_.size()) {
        x = std::move(z);
        x_dot = std::move(z_dot);
      } else {
        x_dot = z.unaryExpr([](double v) { return silu_slope(v); }).cwiseProduct(z_dot);
        x = z.unaryExpr([](double v) { return silu_value(v); });
      }
    }
    out.u = x.col(0);
    out.u_dot = x_dot.col(0);
  }
  RMatrix x = t;
  for (std::size_t l = 0; l < agp_.size(); ++l) {
    const Layer& L = agp_[l];
    RMatrix z = x * L.W.transpose();
    z.rowwise() += L.b.col(0).transpose();
    x = (l + 1 == agp_.size()) ? z : RMatrix(z.unaryExpr([](double v) { return silu_value(v); }));
  }
  out.a = std::move(x);
  return out;
}

TapeNetOutput DualBranchNet::forward(ad::Tape& tape, const RVector& t) const {
  check_shapes();
  TapeNetOutput out;
  const Eigen::Index n = t.size();
  std::vector<std::pair<ad::Real, ad::Real>> lp, ap;
  for (const auto& L : lambda_) {
    lp.emplace_back(tape.leaf(L.W), tape.leaf(L.b));
    out.params.push_back(lp.back().first);
    out.params.push_back(lp.back().second);
  }
  for (const auto& L : agp_) {
    ap.emplace_back(tape.leaf(L.W), tape.leaf(L.b));
    out.params.push_back(ap.back().first);
    out.params.push_back(ap.back().second);
  }
  const ad::Real input = tape.constant(RMatrix(t));
  ad::Real x = input;
  ad::Real x_dot = tape.constant(RMatrix(RMatrix::Ones(n, 1)));
  for (std::size_t l = 0; l < lp.size(); ++l) {
    const ad::Real z = ad::affine(tape, x, lp[l].first, lp[l].second);
    const ad::Real z_dot = ad::linear(tape, x_dot, lp[l].first);
    if (l + 1 == lp.size()) {
      x = z;
      x_dot = z_dot;
    } else {
      x_dot = ad::silu_jvp(tape, z, z_dot);
      x = ad::silu(tape, z);
    }
  }
  out.u = x;
  out.u_dot = x_dot;
  x = input;
  for (std::size_t l = 0; l < ap.size(); ++l) {
    const ad::Real z = ad::affine(tape, x, ap[l].first, ap[l].second);
    x = (l + 1 == ap.size()) ? z : ad::silu(tape, z);
  }
  out.a = x;
  return out;
}

std::vector<const RMatrix*> DualBranchNet::parameters() const {
  std::vector<const RMatrix*> p;
  for (const auto* branch : {&lambda_, &agp_})
    for (const auto& L : *branch) {
      p.push_back(&L.W);
      p.push_back(&L.b);
    }
  return p;
}

std::vector<RMatrix*> DualBranchNet::parameters() {
  std::vector<RMatrix*> p;
  for (auto* branch : {&lambda_, &agp_})
    for (auto& L : *branch) {
      p.push_back(&L.W);
      p.push_back(&L.b);
    }
  return p;
}

std::size_t DualBranchNet::parameter_count() const {
  std::size_t n = 0;
  for (const auto* p : parameters()) n += static_cast<std::size_t>(p->size());
  return n;
}

RVector DualBranchNet::flat() const {
  RVector v(static_cast<Eigen::Index>(parameter_count()));
  Eigen::Index off = 0;
  for (const auto* p : parameters()) {
    v.segment(off, p->size()) = p->reshaped();
    off += p->size();
  }
  return v;
}

void DualBranchNet::set_flat(const RVector& v) {
  if (static_cast<std::size_t>(v.size()) != parameter_count()) throw std::invalid_argument("parameter vector size mismatch");
  Eigen::Index off = 0;
  for (auto* p : parameters()) {
    p->reshaped() = v.segment(off, p->size());
    off += p->size();
  }
}

namespace {

nlohmann::json layers_to_json(const std::vector<Layer>& layers) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& L : layers) {
    std::vector<double> w(L.W.data(), L.W.data() + L.W.size());
    std::vector<double> b(L.b.data(), L.b.data() + L.b.size());
    arr.push_back({{"rows", L.W.rows()}, {"cols", L.W.cols()}, {"W", w}, {"b", b}});
  }
  return arr;
}

std::vector<Layer> layers_from_json(const nlohmann::json& arr) {
  std::vector<Layer> layers;
  for (const auto& e : arr) {
    const auto rows = e.at("rows").get<Eigen::Index>();
    const auto cols = e.at("cols").get<Eigen::Index>();
    const auto w = e.at("W").get<std::vector<double>>();
    const auto b = e.at("b").get<std::vector<double>>();
    if (static_cast<Eigen::Index>(w.size()) != rows * cols || static_cast<Eigen::Index>(b.size()) != rows)
      throw std::invalid_argument("checkpoint layer size mismatch");
    layers.push_back({Eigen::Map<const RMatrix>(w.data(), rows, cols), Eigen::Map<const RMatrix>(b.data(), rows, 1)});
  }
  return layers;
}

}  // namespace

void to_json(nlohmann::json& j, const DualBranchNet& n) {
  j = {{"shape", n.shape_}, {"lambda_branch", layers_to_json(n.lambda_)}, {"agp_branch", layers_to_json(n.agp_)}};
}

void from_json(const nlohmann::json& j, DualBranchNet& n) {
  n.shape_ = j.at("shape").get<NetShape>();
  n.lambda_ = layers_from_json(j.at("lambda_branch"));
  n.agp_ = layers_from_json(j.at("agp_branch"));
  n.check_shapes();
}

}  // namespace qficd
