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
#include <numbers>

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace qficd {
namespace {

using testing::Rng;

ModelSpec make(Family f, int q, double omega = 1.0) {
  ModelSpec m;
  m.family = f;
  m.q = q;
  m.omega = omega;
  return m;
}

TEST(Family, NamesAndExponents) {
  EXPECT_EQ(family_from_string("nearest-neighbor"), Family::NearestNeighbor);
  EXPECT_EQ(family_from_string("dipolar"), Family::Dipolar);
  EXPECT_EQ(family_from_string("van-der-waals"), Family::VanDerWaals);
  EXPECT_EQ(family_from_string("trapped-ions"), Family::VanDerWaals);
  EXPECT_THROW(family_from_string("ising"), std::invalid_argument);
  EXPECT_TRUE(std::isinf(make(Family::NearestNeighbor, 2).alpha()));
  EXPECT_EQ(make(Family::Dipolar, 2).alpha(), 3.0);
  EXPECT_EQ(make(Family::VanDerWaals, 2).alpha(), 6.0);
}

TEST(ModelSpec, Validation) {
  ModelSpec m;
  EXPECT_NO_THROW(m.validate());
  m.q = 1;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = ModelSpec{};
  m.h = 0.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
  m = ModelSpec{};
  m.omega = -1.0;
  EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(ModelSpec, JsonRoundTripAndUnknownKeys) {
  ModelSpec m = make(Family::Dipolar, 4, 1.5);
  m.h = 0.75;
  const nlohmann::json j = m;
  const ModelSpec back = j.get<ModelSpec>();
  EXPECT_EQ(back.family, Family::Dipolar);
  EXPECT_EQ(back.q, 4);
  EXPECT_EQ(back.h, 0.75);
  EXPECT_EQ(back.omega, 1.5);
  nlohmann::json bad = j;
  bad["alpha"] = 3;
  EXPECT_THROW(bad.get<ModelSpec>(), std::invalid_argument);
}

TEST(InitialCoeffs, TransverseField) {
  const BasisPtr b2 = build_basis(2, 2);
  const OperatorCoeffs a = initial_coeffs(make(Family::NearestNeighbor, 2), b2);
  for (std::size_t i = 0; i < b2->size(); ++i) {
    const std::string s = b2->term(i).str();
    EXPECT_EQ(a[i], (s == "XI" || s == "IX") ? cplx(1.0) : cplx(0.0)) << s;
  }
  ModelSpec m3 = make(Family::NearestNeighbor, 3);
  m3.h = 0.5;
  const OperatorCoeffs c = initial_coeffs(m3, build_basis(3, 2));
  EXPECT_EQ(c.coeff("XII"), cplx(0.5));
  EXPECT_EQ(c.coeff("IXI"), cplx(0.5));
  EXPECT_EQ(c.coeff("IIX"), cplx(0.5));
  EXPECT_DOUBLE_EQ(c.values().cwiseAbs().sum(), 1.5);
}

TEST(InitialCoeffs, SpectrumInStepsOfTwoH) {
  const BasisPtr b = build_basis(2, 2);
  const HermitianEigen e = jacobi_eigh(to_dense(initial_coeffs(make(Family::NearestNeighbor, 2), b)));
  const double expected[] = {-2.0, 0.0, 0.0, 2.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(e.values(i), expected[i], 1e-13);
}

TEST(FinalCoeffs, EndpointAndDistanceFactors) {
  const BasisPtr b2 = build_basis(2, 2);
  const OperatorCoeffs f0 = final_coeffs(make(Family::NearestNeighbor, 2), b2, 0.0);
  EXPECT_EQ(f0.coeff("XY"), cplx(0.0));
  EXPECT_EQ(f0.coeff("ZI"), cplx(1.0));
  EXPECT_EQ(f0.coeff("IZ"), cplx(1.0));

  const double t = std::numbers::pi / 2;
  const OperatorCoeffs fd = final_coeffs(make(Family::Dipolar, 2), b2, t);
  EXPECT_NEAR(fd.coeff("XY").real(), -1.0, 1e-15);
  EXPECT_NEAR(fd.coeff("YX").real(), -1.0, 1e-15);
  EXPECT_NEAR(fd.coeff("ZI").real(), 0.0, 1e-15);
  EXPECT_NEAR(fd.coeff("IZ").real(), 0.0, 1e-15);

  const double tv = 0.7;
  const OperatorCoeffs fv = final_coeffs(make(Family::VanDerWaals, 3), build_basis(3, 2), tv);
  EXPECT_NEAR(std::abs(fv.coeff("XIY")), std::pow(2.0, -6.0) * std::sin(tv), 1e-16);
  EXPECT_NEAR(std::abs(fv.coeff("YIX")), std::pow(2.0, -6.0) * std::sin(tv), 1e-16);
  EXPECT_NEAR(std::abs(fv.coeff("XYI")), std::sin(tv), 1e-16);

  const OperatorCoeffs fn = final_coeffs(make(Family::NearestNeighbor, 3), build_basis(3, 2), tv);
  EXPECT_EQ(fn.coeff("XIY"), cplx(0.0));
}

TEST(FinalCoeffs, RequiresWeightTwoTerms) {
  EXPECT_THROW(final_coeffs(make(Family::NearestNeighbor, 2), build_basis(2, 1), 0.3), std::invalid_argument);
}

TEST(ControlCoeffs, Interpolation) {
  const BasisPtr b = build_basis(2, 2);
  const ModelSpec m = make(Family::Dipolar, 2);
  const double t = 0.4;
  const OperatorCoeffs i = initial_coeffs(m, b), f = final_coeffs(m, b, t);
  EXPECT_EQ(control_coeffs(m, b, t, 0.0).values(), i.values());
  EXPECT_EQ(control_coeffs(m, b, t, 1.0).values(), f.values());
  EXPECT_LT((control_coeffs(m, b, t, 0.5).values() - 0.5 * (i.values() + f.values())).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(SensitivityCoeffs, VanishesAtStartOrZeroLambda) {
  const BasisPtr b = build_basis(2, 2);
  const ModelSpec m = make(Family::NearestNeighbor, 2);
  EXPECT_EQ(sensitivity_coeffs(m, b, 0.0, 0.7).values().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(sensitivity_coeffs(m, b, 0.6, 0.0).values().cwiseAbs().maxCoeff(), 0.0);
}

TEST(SensitivityCoeffs, ClosedFormAtUnitTime) {
  const BasisPtr b = build_basis(2, 2);
  const OperatorCoeffs s = sensitivity_coeffs(make(Family::NearestNeighbor, 2), b, 1.0, 1.0);
  EXPECT_NEAR(s.coeff("XY").real(), -std::cos(1.0), 1e-15);
  EXPECT_NEAR(s.coeff("YX").real(), -std::cos(1.0), 1e-15);
  EXPECT_NEAR(s.coeff("ZI").real(), -std::sin(1.0), 1e-15);
  EXPECT_NEAR(s.coeff("IZ").real(), -std::sin(1.0), 1e-15);
}

TEST(SensitivityCoeffs, MatchesOmegaCentralDifference) {
  Rng rng(12);
  for (Family f : {Family::NearestNeighbor, Family::Dipolar, Family::VanDerWaals}) {
    const BasisPtr b = build_basis(3, 2);
    for (int trial = 0; trial < 10; ++trial) {
      const double t = rng.uniform(0.0, 1.0), lam = rng.uniform(0.0, 1.0);
      ModelSpec m = make(f, 3, rng.uniform(0.5, 2.0));
      const OperatorCoeffs s = sensitivity_coeffs(m, b, t, lam);
      const double d = 1e-6;
      ModelSpec mp = m, mm = m;
      mp.omega += d;
      mm.omega -= d;
      const CVector fd = (control_coeffs(mp, b, t, lam).values() - control_coeffs(mm, b, t, lam).values()) / (2 * d);
      EXPECT_LT((fd - s.values()).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(SensitivityCoeffs, CentralDifferenceErrorIsSecondOrder) {
  const BasisPtr b = build_basis(2, 2);
  const ModelSpec m = make(Family::NearestNeighbor, 2, 1.3);
  const double t = 0.8, lam = 0.6;
  const CVector exact = sensitivity_coeffs(m, b, t, lam).values();
  std::vector<double> errs;
  for (double d : {1e-2, 1e-3}) {
    ModelSpec mp = m, mm = m;
    mp.omega += d;
    mm.omega -= d;
    errs.push_back(((control_coeffs(mp, b, t, lam).values() - control_coeffs(mm, b, t, lam).values()) / (2 * d) - exact)
                       .cwiseAbs()
                       .maxCoeff());
  }
  EXPECT_NEAR(errs[0] / errs[1], 100.0, 1.0);
}

TEST(DlambdaCoeffs, EndpointAndLinearity) {
  const BasisPtr b = build_basis(2, 2);
  const ModelSpec m = make(Family::NearestNeighbor, 2);
  const OperatorCoeffs d0 = dlambda_coeffs(m, b, 0.0);
  EXPECT_EQ(d0.coeff("ZI"), cplx(1.0));
  EXPECT_EQ(d0.coeff("IZ"), cplx(1.0));
  EXPECT_EQ(d0.coeff("XI"), cplx(-1.0));
  EXPECT_EQ(d0.coeff("IX"), cplx(-1.0));
  const double t = 0.35, lam = 0.4, d = 0.1;
  const CVector fd = (control_coeffs(m, b, t, lam + d).values() - control_coeffs(m, b, t, lam - d).values()) / (2 * d);
  EXPECT_LT((fd - dlambda_coeffs(m, b, t).values()).cwiseAbs().maxCoeff(), 1e-14);
  const CMatrix dense = to_dense(final_coeffs(m, b, t)) - to_dense(initial_coeffs(m, b));
  EXPECT_LT(testing::max_diff(to_dense(dlambda_coeffs(m, b, t)), dense), 1e-15);
}

TEST(TotalCoeffs, CounterDiabaticTerm) {
  Rng rng(13);
  const BasisPtr b = build_basis(2, 2);
  const ModelSpec m = make(Family::Dipolar, 2);
  const OperatorCoeffs agp = rng.coeffs(b);
  const double t = 0.3, lam = 0.2;
  const CVector ctrl = control_coeffs(m, b, t, lam).values();
  EXPECT_EQ(total_coeffs(m, t, lam, 0.0, agp).values(), ctrl);
  EXPECT_EQ(total_coeffs(m, t, lam, 1.3, OperatorCoeffs(b)).values(), ctrl);
  const CVector a = total_coeffs(m, t, lam, 2.0, agp * 0.5).values();
  const CVector c = total_coeffs(m, t, lam, 1.0, agp).values();
  EXPECT_LT((a - c).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((c - ctrl - agp.values()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(TotalCoeffs, OmegaDerivativeIgnoresOmegaIndependentGauge) {
  Rng rng(14);
  const BasisPtr b = build_basis(2, 2);
  const ModelSpec m = make(Family::NearestNeighbor, 2);
  const OperatorCoeffs agp = rng.coeffs(b);
  const double t = 0.9, lam = 0.8, rate = 0.7, d = 1e-6;
  ModelSpec mp = m, mm = m;
  mp.omega += d;
  mm.omega -= d;
  const CVector fd = (total_coeffs(mp, t, lam, rate, agp).values() - total_coeffs(mm, t, lam, rate, agp).values()) / (2 * d);
  EXPECT_LT((fd - sensitivity_coeffs(m, b, t, lam).values()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Models, AllCoefficientsReal) {
  Rng rng(15);
  for (Family f : {Family::NearestNeighbor, Family::Dipolar, Family::VanDerWaals}) {
    const BasisPtr b = build_basis(4, 2);
    const ModelSpec m = make(f, 4);
    const double t = rng.uniform(0, 1), lam = rng.uniform(0, 1);
    EXPECT_LE(control_coeffs(m, b, t, lam).max_imag(), 1e-14);
    EXPECT_LE(sensitivity_coeffs(m, b, t, lam).max_imag(), 1e-14);
    EXPECT_LE(dlambda_coeffs(m, b, t).max_imag(), 1e-14);
  }
}

TEST(Models, NearestNeighborAndDipolarCoincideForTwoQubits) {
  const BasisPtr b = build_basis(2, 2);
  for (double t : {0.0, 0.3, 1.0}) {
    EXPECT_EQ(control_coeffs(make(Family::NearestNeighbor, 2), b, t, 0.4).values(),
              control_coeffs(make(Family::Dipolar, 2), b, t, 0.4).values());
  }
}

TEST(Rows, BatchedRowsMatchPointwiseOperators) {
  const BasisPtr b = build_basis(3, 2);
  const ModelSpec m = make(Family::Dipolar, 3, 1.2);
  const ModelOperators ops = model_operators(m, b);
  const std::vector<double> times = {0.0, 0.25, 0.5, 1.0};
  const RMatrix fin = final_rows(ops, times, m.omega);
  const RMatrix dl = dlambda_rows(ops, times, m.omega);
  const RMatrix br = bracket_rows(ops, times, m.omega);
  for (std::size_t n = 0; n < times.size(); ++n) {
    const auto row = static_cast<Eigen::Index>(n);
    EXPECT_LT((fin.row(row).transpose() - final_coeffs(m, b, times[n]).real()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((dl.row(row).transpose() - dlambda_coeffs(m, b, times[n]).real()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((br.row(row).transpose() - sensitivity_coeffs(m, b, times[n], 1.0).real()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

}  // namespace
}  // namespace qficd
