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
#include <fstream>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace qficd {
namespace {

NetShape small_shape() {
  NetShape s;
  s.lambda_width = 6;
  s.lambda_depth = 2;
  s.agp_width = 5;
  s.agp_depth = 3;
  s.basis_size = 4;
  return s;
}

RVector grid(int n) { return RVector::LinSpaced(n, 0.0, 1.0); }

TEST(Net, ZeroNetworkOutputsZero) {
  const DualBranchNet net(small_shape());
  const NetOutput o = net.forward(grid(9));
  EXPECT_EQ(o.u, RVector::Zero(9));
  EXPECT_EQ(o.u_dot, RVector::Zero(9));
  EXPECT_EQ(o.a, RMatrix::Zero(9, 4));
}

TEST(Net, LayerCountsAndParameterCount) {
  const NetShape s;  // 3 hidden lambda layers, 6 hidden gauge layers
  const DualBranchNet net(s);
  EXPECT_EQ(net.lambda_layers().size(), 4u);
  EXPECT_EQ(net.agp_layers().size(), 7u);
  EXPECT_EQ(net.lambda_layers().back().W.rows(), 1);
  EXPECT_EQ(net.agp_layers().back().W.rows(), 16);
  const std::size_t lambda_params = (50 + 50) + 2 * (50 * 50 + 50) + (50 + 1);
  const std::size_t agp_params = (50 + 50) + 5 * (50 * 50 + 50) + (16 * 50 + 16);
  EXPECT_EQ(net.parameter_count(), lambda_params + agp_params);
}

TEST(Net, BatchEqualsPointwise) {
  const DualBranchNet net = DualBranchNet::xavier(small_shape(), 3);
  const RVector t = grid(17);
  const NetOutput batch = net.forward(t);
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const NetOutput one = net.forward(t.segment(i, 1));
    EXPECT_EQ(one.u(0), batch.u(i));
    EXPECT_EQ(one.u_dot(0), batch.u_dot(i));
    EXPECT_EQ(RVector(one.a.row(0).transpose()), RVector(batch.a.row(i).transpose()));
  }
}

TEST(Net, TimeDerivativeMatchesDifferences) {
  const DualBranchNet net = DualBranchNet::xavier(small_shape(), 4);
  const double h = 1e-6;
  for (double t : {0.0, 0.3, 0.8}) {
    RVector a(1), b(1), c(1);
    a << t - h;
    b << t;
    c << t + h;
    EXPECT_NEAR(net.forward(b).u_dot(0), (net.forward(c).u(0) - net.forward(a).u(0)) / (2 * h), 1e-8);
  }
}

TEST(Net, GoldenVectorAtHalfTime) {
  std::ifstream is(std::string(QFICD_TEST_DATA_DIR) + "/net_golden.json");
  ASSERT_TRUE(is.good());
  const nlohmann::json j = nlohmann::json::parse(is);
  const NetShape s = j.at("shape").get<NetShape>();
  const DualBranchNet net = DualBranchNet::xavier(s, j.at("seed").get<std::uint64_t>());
  RVector t(1);
  t << j.at("t").get<double>();
  const NetOutput o = net.forward(t);
  auto num = [](const nlohmann::json& v) { return std::stod(v.get<std::string>()); };
  EXPECT_NEAR(o.u(0), num(j.at("u")), 1e-15);
  EXPECT_NEAR(o.u_dot(0), num(j.at("u_dot")), 1e-15);
  ASSERT_EQ(static_cast<std::size_t>(o.a.cols()), j.at("a").size());
  for (Eigen::Index k = 0; k < o.a.cols(); ++k)
    EXPECT_NEAR(o.a(0, k), num(j.at("a")[static_cast<std::size_t>(k)]), 1e-15) << k;
}

TEST(Xavier, BoundForSingleInput) {
  const RMatrix w = xavier_init(50, 1, 42, 0);
  const double bound = std::sqrt(6.0 / 51.0);
  EXPECT_NEAR(bound, 0.3430, 1e-4);
  EXPECT_LE(w.cwiseAbs().maxCoeff(), bound);
}

TEST(Xavier, SamplingStaysWithinBound) {
  const RMatrix w = xavier_init(400, 250, 7, 3);
  const double bound = std::sqrt(6.0 / 650.0);
  EXPECT_LE(w.maxCoeff(), bound);
  EXPECT_GE(w.minCoeff(), -bound);
  EXPECT_GT(w.maxCoeff(), 0.99 * bound);
  EXPECT_LT(w.minCoeff(), -0.99 * bound);
  EXPECT_NEAR(w.mean(), 0.0, 0.01 * bound);
  // Variance of a uniform on [-b, b] is b^2 / 3.
  EXPECT_NEAR(w.array().square().mean(), bound * bound / 3.0, 0.01 * bound * bound);
}

TEST(Xavier, DeterministicAndStreamDependent) {
  EXPECT_EQ(xavier_init(20, 30, 1, 2), xavier_init(20, 30, 1, 2));
  EXPECT_NE(xavier_init(20, 30, 1, 2), xavier_init(20, 30, 1, 3));
  EXPECT_NE(xavier_init(20, 30, 1, 2), xavier_init(20, 30, 2, 2));
  const DualBranchNet a = DualBranchNet::xavier(small_shape(), 9);
  const DualBranchNet b = DualBranchNet::xavier(small_shape(), 9);
  EXPECT_EQ(a.flat(), b.flat());
  for (const auto& l : a.agp_layers()) EXPECT_EQ(l.b, RMatrix::Zero(l.b.rows(), 1));
  const double u = counter_uniform(1, 2, 3);
  EXPECT_GE(u, 0.0);
  EXPECT_LT(u, 1.0);
}

TEST(Net, TapeForwardMatchesPlainForward) {
  const DualBranchNet net = DualBranchNet::xavier(small_shape(), 10);
  const RVector t = grid(7);
  const NetOutput plain = net.forward(t);
  ad::Tape tape;
  const TapeNetOutput rec = net.forward(tape, t);
  EXPECT_EQ(rec.params.size(), net.parameters().size());
  EXPECT_LT(testing::max_diff(tape.value(rec.u), RMatrix(plain.u)), 1e-15);
  EXPECT_LT(testing::max_diff(tape.value(rec.u_dot), RMatrix(plain.u_dot)), 1e-15);
  EXPECT_LT(testing::max_diff(tape.value(rec.a), plain.a), 1e-15);
}

TEST(Net, TapeGradientMatchesDifferences) {
  DualBranchNet net = DualBranchNet::xavier(small_shape(), 11);
  net.set_flat(net.flat() + 0.1 * RVector::Ones(static_cast<Eigen::Index>(net.parameter_count())));
  const RVector t = grid(5);
  testing::Rng rng(12);
  const RMatrix wu = rng.real(5, 1), wd = rng.real(5, 1), wa = rng.real(5, 4);
  auto loss = [&](ad::Tape& tape, const TapeNetOutput& o) {
    const ad::Real a = ad::sum(tape, ad::hadamard(tape, o.u, tape.constant(wu)));
    const ad::Real b = ad::sum(tape, ad::hadamard(tape, o.u_dot, tape.constant(wd)));
    const ad::Real c = ad::sum(tape, ad::hadamard(tape, o.a, tape.constant(wa)));
    return ad::add(tape, ad::add(tape, a, b), c);
  };
  ad::Tape tape;
  const TapeNetOutput o = net.forward(tape, t);
  tape.backward(loss(tape, o));
  RVector grad(static_cast<Eigen::Index>(net.parameter_count()));
  Eigen::Index off = 0;
  for (const auto& p : o.params) {
    const RMatrix g = tape.grad(p);
    grad.segment(off, g.size()) = Eigen::Map<const RVector>(g.data(), g.size());
    off += g.size();
  }
  const RVector base = net.flat();
  auto value = [&](const RVector& p) {
    DualBranchNet n2 = net;
    n2.set_flat(p);
    ad::Tape t2;
    const TapeNetOutput o2 = n2.forward(t2, t);
    return t2.value(loss(t2, o2))(0, 0);
  };
  for (Eigen::Index k = 0; k < base.size(); k += 7) {
    RVector p = base, m = base;
    p(k) += 1e-6;
    m(k) -= 1e-6;
    const double fd = (value(p) - value(m)) / 2e-6;
    EXPECT_NEAR(grad(k), fd, 1e-7 * std::max(1.0, std::abs(fd))) << "parameter " << k;
  }
}

TEST(Net, FlatRoundTripAndJson) {
  const DualBranchNet net = DualBranchNet::xavier(small_shape(), 13);
  DualBranchNet copy(small_shape());
  copy.set_flat(net.flat());
  EXPECT_EQ(copy.flat(), net.flat());
  EXPECT_THROW(copy.set_flat(RVector::Zero(3)), std::invalid_argument);
  const nlohmann::json j = net;
  const DualBranchNet back = j.get<DualBranchNet>();
  EXPECT_EQ(back.flat(), net.flat());
  nlohmann::json broken = j;
  broken["agp_branch"][0]["cols"] = 2;
  EXPECT_THROW(broken.get<DualBranchNet>(), std::invalid_argument);
}

TEST(NetShape, Validation) {
  NetShape s = small_shape();
  EXPECT_NO_THROW(s.validate());
  s.agp_width = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
  s = small_shape();
  s.basis_size = 0;
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace qficd
