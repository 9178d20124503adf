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
#include <functional>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace qficd {
namespace {

using testing::Rng;
using Builder = std::function<ad::Real(ad::Tape&, const std::vector<ad::Real>&)>;

struct Case {
  std::vector<RMatrix> inputs;
  Builder build;
};

double evaluate(const Case& c, const std::vector<RMatrix>& inputs) {
  ad::Tape tape;
  std::vector<ad::Real> leaves;
  for (const auto& x : inputs) leaves.push_back(tape.leaf(x));
  return tape.value(c.build(tape, leaves))(0, 0);
}

/// Compares the reverse-mode directional derivative along a random direction
/// with a fourth-order central difference of step 1e-5.
void check_case(const Case& c, Rng& rng, const std::string& label) {
  ad::Tape tape;
  std::vector<ad::Real> leaves;
  for (const auto& x : c.inputs) leaves.push_back(tape.leaf(x));
  tape.backward(c.build(tape, leaves));
  std::vector<RMatrix> dir;
  double analytic = 0.0;
  for (std::size_t i = 0; i < c.inputs.size(); ++i) {
    dir.push_back(rng.real(c.inputs[i].rows(), c.inputs[i].cols()));
    analytic += tape.grad(leaves[i]).cwiseProduct(dir[i]).sum();
  }
  const double h = 1e-5;
  auto shifted = [&](double s) {
    std::vector<RMatrix> in = c.inputs;
    for (std::size_t i = 0; i < in.size(); ++i) in[i] += s * dir[i];
    return evaluate(c, in);
  };
  const double fd = (8.0 * (shifted(h) - shifted(-h)) - (shifted(2 * h) - shifted(-2 * h))) / (12.0 * h);
  EXPECT_LE(std::abs(analytic - fd), 1e-5 * std::max(std::abs(fd), 1e-3))
      << label << ": analytic " << analytic << " fd " << fd;
}

/// Reduces a real node to a scalar by a fixed random weighting.
ad::Real contract(ad::Tape& t, ad::Real x, const RMatrix& w) { return ad::sum(t, ad::hadamard(t, x, t.constant(w))); }

/// Distance of a complex node to a fixed target.
ad::Real distance(ad::Tape& t, ad::Cplx z, const CMatrix& target) {
  return ad::norm2(t, ad::csub(t, z, t.constant(target)));
}

/// Complex column vector built from a real coefficient row of a one-qubit
/// basis: (sum_k c_k P_k) psi.
ad::Cplx complex_source(ad::Tape& t, ad::Real row, const BasisPtr& b, const CVector& psi) {
  return ad::propagate_chain(t, ad::dense_from_coeffs(t, row, b), psi);
}

using Factory = std::function<Case(Rng&)>;

void run(const std::string& label, const Factory& make, int instances = 100) {
  Rng rng(std::hash<std::string>{}(label));
  for (int i = 0; i < instances; ++i) check_case(make(rng), rng, label + " #" + std::to_string(i));
}

TEST(TapeGradients, Affine) {
  run("affine", [](Rng& r) {
    const RMatrix w = r.real(3, 5);
    return Case{{r.real(3, 4), r.real(5, 4), r.real(5, 1)},
                [w](ad::Tape& t, const auto& v) { return contract(t, ad::affine(t, v[0], v[1], v[2]), w); }};
  });
}

TEST(TapeGradients, Linear) {
  run("linear", [](Rng& r) {
    const RMatrix w = r.real(3, 5);
    return Case{{r.real(3, 4), r.real(5, 4)},
                [w](ad::Tape& t, const auto& v) { return contract(t, ad::linear(t, v[0], v[1]), w); }};
  });
}

TEST(TapeGradients, Silu) {
  run("silu", [](Rng& r) {
    const RMatrix w = r.real(3, 4);
    return Case{{r.real(3, 4, -3, 3)}, [w](ad::Tape& t, const auto& v) { return contract(t, ad::silu(t, v[0]), w); }};
  });
}

TEST(TapeGradients, SiluTangent) {
  run("silu_jvp", [](Rng& r) {
    const RMatrix w = r.real(3, 4);
    return Case{{r.real(3, 4, -3, 3), r.real(3, 4)},
                [w](ad::Tape& t, const auto& v) { return contract(t, ad::silu_jvp(t, v[0], v[1]), w); }};
  });
}

TEST(TapeGradients, ElementwiseArithmetic) {
  run("add", [](Rng& r) {
    const RMatrix w = r.real(3, 2);
    return Case{{r.real(3, 2), r.real(3, 2)},
                [w](ad::Tape& t, const auto& v) { return contract(t, ad::add(t, v[0], v[1]), w); }};
  });
  run("sub", [](Rng& r) {
    const RMatrix w = r.real(3, 2);
    return Case{{r.real(3, 2), r.real(3, 2)},
                [w](ad::Tape& t, const auto& v) { return contract(t, ad::sub(t, v[0], v[1]), w); }};
  });
  run("scale", [](Rng& r) {
    const RMatrix w = r.real(3, 2);
    const double s = r.uniform(-2, 2);
    return Case{{r.real(3, 2)}, [w, s](ad::Tape& t, const auto& v) { return contract(t, ad::scale(t, v[0], s), w); }};
  });
  run("add_scalar", [](Rng& r) {
    const RMatrix w = r.real(3, 2);
    return Case{{r.real(3, 2)},
                [w](ad::Tape& t, const auto& v) { return contract(t, ad::square(t, ad::add_scalar(t, v[0], 0.3)), w); }};
  });
  run("hadamard", [](Rng& r) {
    const RMatrix w = r.real(3, 2);
    return Case{{r.real(3, 2), r.real(3, 2)},
                [w](ad::Tape& t, const auto& v) { return contract(t, ad::hadamard(t, v[0], v[1]), w); }};
  });
  run("square", [](Rng& r) {
    const RMatrix w = r.real(3, 2);
    return Case{{r.real(3, 2)}, [w](ad::Tape& t, const auto& v) { return contract(t, ad::square(t, v[0]), w); }};
  });
  run("div", [](Rng& r) {
    return Case{{r.real(1, 1), r.real(1, 1)},
                [](ad::Tape& t, const auto& v) { return ad::div(t, v[0], ad::add_scalar(t, v[1], 3.0)); }};
  });
}

TEST(TapeGradients, Reductions) {
  run("sum", [](Rng& r) {
    return Case{{r.real(4, 3)}, [](ad::Tape& t, const auto& v) { return ad::sum(t, ad::square(t, v[0])); }};
  });
  run("mean_sq_rows", [](Rng& r) {
    const RMatrix w = r.real(4, 1);
    return Case{{r.real(4, 3)}, [w](ad::Tape& t, const auto& v) { return contract(t, ad::mean_sq_rows(t, v[0]), w); }};
  });
  run("weighted_sum", [](Rng& r) {
    const RVector w = r.real(5, 1);
    return Case{{r.real(5, 1)},
                [w](ad::Tape& t, const auto& v) { return ad::weighted_sum(t, ad::square(t, v[0]), w); }};
  });
}

TEST(TapeGradients, RowOperations) {
  run("row_scale", [](Rng& r) {
    const RMatrix w = r.real(4, 3);
    return Case{{r.real(4, 1), r.real(4, 3)},
                [w](ad::Tape& t, const auto& v) { return contract(t, ad::row_scale(t, v[0], v[1]), w); }};
  });
  run("rows", [](Rng& r) {
    const RMatrix w = r.real(3, 2);
    return Case{{r.real(6, 2)}, [w](ad::Tape& t, const auto& v) { return contract(t, ad::rows(t, v[0], 2, 3), w); }};
  });
  run("pad_rows", [](Rng& r) {
    const RMatrix w = r.real(5, 2);
    return Case{{r.real(3, 2)}, [w](ad::Tape& t, const auto& v) { return contract(t, ad::pad_rows(t, v[0], 2), w); }};
  });
  run("add_at", [](Rng& r) {
    const RMatrix w = r.real(5, 1);
    return Case{{r.real(5, 1), r.real(1, 1)}, [w](ad::Tape& t, const auto& v) {
                  return contract(t, ad::square(t, ad::add_at(t, v[0], 2, v[1])), w);
                }};
  });
}

TEST(TapeGradients, Schedule) {
  auto times = [](Rng& r) {
    RVector ts(6);
    for (Eigen::Index i = 0; i < 6; ++i) ts(i) = r.uniform(0.0, 1.0);
    return ts;
  };
  run("schedule_lambda", [&](Rng& r) {
    const RMatrix w = r.real(6, 1);
    const RVector ts = times(r);
    return Case{{r.real(6, 1, -2, 2), r.real(6, 1, -2, 2)},
                [w, ts](ad::Tape& t, const auto& v) { return contract(t, ad::schedule_lambda(t, v[0], v[1], ts), w); }};
  });
  run("schedule_rate", [&](Rng& r) {
    const RMatrix w = r.real(6, 1);
    const RVector ts = times(r);
    return Case{{r.real(6, 1, -2, 2), r.real(6, 1, -2, 2)},
                [w, ts](ad::Tape& t, const auto& v) { return contract(t, ad::schedule_rate(t, v[0], v[1], ts), w); }};
  });
}

TEST(TapeGradients, BasisCommutator) {
  const BasisPtr b = build_basis(3, 2);
  const auto m = static_cast<Eigen::Index>(b->size());
  run("commutator_rows", [&](Rng& r) {
    const RMatrix w = r.real(3, m);
    return Case{{r.real(3, m), r.real(3, m)},
                [w, b](ad::Tape& t, const auto& v) { return contract(t, ad::commutator_rows(t, v[0], v[1], b), w); }};
  });
}

TEST(TapeGradients, DenseAndChain) {
  const BasisPtr b = build_basis(2, 2);
  run("dense_from_coeffs+propagate_chain", [&](Rng& r) {
    const CVector psi = r.state(4);
    const CMatrix target = r.complex(4, 1);
    return Case{{r.real(3, 16, -0.5, 0.5)}, [=](ad::Tape& t, const auto& v) {
                  return distance(t, ad::propagate_chain(t, ad::dense_from_coeffs(t, v[0], b), psi), target);
                }};
  });
}

TEST(TapeGradients, MagnusGenerators) {
  const BasisPtr b = build_basis(1, 1);
  run("magnus_omegas", [&](Rng& r) {
    const CVector psi = r.state(2);
    const CMatrix target = r.complex(2, 1);
    const int order = 1 + static_cast<int>(r.index(3));
    return Case{{r.real(8, 4)}, [=](ad::Tape& t, const auto& v) {
                  const ad::Stack h = ad::dense_from_coeffs(t, v[0], b);
                  const ad::Stack o = ad::magnus_omegas(t, h, WindowPlan(8, 2), 0.1, order);
                  return distance(t, ad::propagate_chain(t, o, psi), target);
                }};
  });
}

TEST(TapeGradients, MatrixExponential) {
  const BasisPtr b = build_basis(2, 2);
  run("expm_each", [&](Rng& r) {
    const CVector psi = r.state(4);
    const CMatrix target = r.complex(4, 1);
    return Case{{r.real(6, 16, -0.3, 0.3)}, [=](ad::Tape& t, const auto& v) {
                  const ad::Stack h = ad::dense_from_coeffs(t, v[0], b);
                  const ad::Stack o = ad::magnus_omegas(t, h, WindowPlan(6, 3), 0.2, 3);
                  return distance(t, ad::propagate_chain(t, ad::expm_each(t, o), psi), target);
                }};
  });
}

TEST(TapeGradients, ComplexPrimitives) {
  const BasisPtr b = build_basis(1, 1);
  run("csub+norm2", [&](Rng& r) {
    const CVector p1 = r.state(2), p2 = r.state(2);
    return Case{{r.real(1, 4), r.real(1, 4)}, [=](ad::Tape& t, const auto& v) {
                  return ad::norm2(t, ad::csub(t, complex_source(t, v[0], b, p1), complex_source(t, v[1], b, p2)));
                }};
  });
  run("cscale", [&](Rng& r) {
    const CVector p = r.state(2);
    const CMatrix target = r.complex(2, 1);
    const cplx s(r.uniform(), r.uniform());
    return Case{{r.real(1, 4)}, [=](ad::Tape& t, const auto& v) {
                  return distance(t, ad::cscale(t, complex_source(t, v[0], b, p), s), target);
                }};
  });
  run("cdot", [&](Rng& r) {
    const CVector p1 = r.state(2), p2 = r.state(2);
    const CMatrix target = r.complex(1, 1);
    return Case{{r.real(1, 4), r.real(1, 4)}, [=](ad::Tape& t, const auto& v) {
                  return distance(t, ad::cdot(t, complex_source(t, v[0], b, p1), complex_source(t, v[1], b, p2)), target);
                }};
  });
  run("relative_phase_cos", [&](Rng& r) {
    const CVector p1 = r.state(2), p2 = r.state(2);
    const CMatrix f1 = r.complex(2, 1), f2 = r.complex(2, 1);
    return Case{{r.real(1, 4), r.real(1, 4)}, [=](ad::Tape& t, const auto& v) {
                  const ad::Cplx a = ad::cdot(t, t.constant(f1), complex_source(t, v[0], b, p1));
                  const ad::Cplx c = ad::cdot(t, t.constant(f2), complex_source(t, v[1], b, p2));
                  return ad::relative_phase_cos(t, a, c);
                }};
  });
}

TEST(Tape, SquareAtThree) {
  ad::Tape t;
  const ad::Real x = t.leaf(RMatrix::Constant(1, 1, 3.0));
  t.backward(ad::sum(t, ad::square(t, x)));
  EXPECT_EQ(t.grad(x)(0, 0), 6.0);
}

TEST(Tape, RotationDistanceMatchesDifferences) {
  const BasisPtr b = build_basis(1, 1);
  CVector psi0(2), target(2);
  psi0 << 1.0, 0.0;
  target << cplx(0.6, 0.0), cplx(0.0, -0.8);
  RMatrix pick = RMatrix::Zero(4, 1);
  pick(1, 0) = 1.0;  // X
  auto f = [&](double theta, double* grad) {
    ad::Tape t;
    const ad::Real th = t.leaf(RMatrix::Constant(1, 1, theta));
    const ad::Real row = ad::pad_rows(t, ad::linear(t, th, t.constant(pick)), 1);
    const ad::Stack o = ad::magnus_omegas(t, ad::dense_from_coeffs(t, row, b), WindowPlan(2, 1), 1.0, 1);
    const ad::Real loss = distance(t, ad::propagate_chain(t, ad::expm_each(t, o), psi0), target);
    if (grad) {
      t.backward(loss);
      *grad = t.grad(th)(0, 0);
    }
    return t.value(loss)(0, 0);
  };
  double g = 0.0;
  const double v = f(0.3, &g);
  const CVector direct = expm(-kI * 0.3 * testing::pauli_x()) * psi0 - target;
  EXPECT_NEAR(v, direct.squaredNorm(), 1e-15);
  const double h = 1e-5;
  const double fd = (f(0.3 + h, nullptr) - f(0.3 - h, nullptr)) / (2 * h);
  EXPECT_NEAR(g, fd, 1e-6 * std::abs(fd));
}

TEST(Tape, ExponentialOfSixteenDimensionalGenerators) {
  const BasisPtr b = build_basis(4, 2);
  Rng rng(44);
  const auto m = static_cast<Eigen::Index>(b->size());
  for (int trial = 0; trial < 5; ++trial) {
    const CVector psi = rng.state(16);
    const CVector probe = rng.state(16);
    Case c{{rng.real(4, m, -0.2, 0.2)}, [=](ad::Tape& t, const auto& v) {
             const ad::Stack o = ad::magnus_omegas(t, ad::dense_from_coeffs(t, v[0], b), WindowPlan(4, 1), 0.5, 3);
             const ad::Cplx z = ad::cdot(t, t.constant(CMatrix(probe)), ad::propagate_chain(t, ad::expm_each(t, o), psi));
             return ad::norm2(t, z);
           }};
    check_case(c, rng, "dim-16 expm");
  }
}

TEST(Tape, NonScalarOutputRejected) {
  ad::Tape t;
  const ad::Real x = t.leaf(RMatrix::Ones(2, 2));
  EXPECT_THROW(t.backward(ad::square(t, x)), std::invalid_argument);
}

TEST(Tape, UnusedLeafHasZeroGradientAndConstantsNeedNone) {
  ad::Tape t;
  const ad::Real x = t.leaf(RMatrix::Ones(2, 1));
  const ad::Real y = t.leaf(RMatrix::Ones(3, 2));
  const ad::Real c = t.constant(RMatrix(RMatrix::Ones(2, 1)));
  EXPECT_FALSE(t.needs_grad(c.id));
  EXPECT_TRUE(t.needs_grad(x.id));
  t.backward(ad::sum(t, ad::hadamard(t, x, c)));
  EXPECT_EQ(t.grad(y), RMatrix::Zero(3, 2));
  EXPECT_EQ(t.grad(x), RMatrix::Ones(2, 1));
}

TEST(Tape, ReplayIsBitIdentical) {
  const BasisPtr b = build_basis(2, 2);
  Rng rng(91);
  const RMatrix coeffs = rng.real(8, 16, -0.3, 0.3);
  const CVector psi = rng.state(4);
  auto once = [&] {
    ad::Tape t;
    const ad::Real c = t.leaf(coeffs);
    const ad::Stack o = ad::magnus_omegas(t, ad::dense_from_coeffs(t, c, b), WindowPlan(8, 2), 0.1, 3);
    const ad::Real loss = ad::norm2(t, ad::propagate_chain(t, ad::expm_each(t, o), psi));
    t.backward(loss);
    return std::pair{t.value(loss)(0, 0), t.grad(c)};
  };
  const auto a = once();
  const auto bb = once();
  EXPECT_EQ(a.first, bb.first);
  EXPECT_EQ(a.second, bb.second);
}

TEST(Tape, RelativePhaseOfVanishingAmplitudeIsOne) {
  ad::Tape t;
  const ad::Cplx a = t.constant(CMatrix(CMatrix::Zero(1, 1)));
  const ad::Cplx b = t.constant(CMatrix(CMatrix::Constant(1, 1, cplx(0.0, 1.0))));
  EXPECT_EQ(t.value(ad::relative_phase_cos(t, a, b))(0, 0), 1.0);
}

}  // namespace
}  // namespace qficd
