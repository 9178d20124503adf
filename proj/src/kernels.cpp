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

#include "qficd/kernels.hpp"

#include <bit>
#include <stdexcept>

namespace qficd::kernels {

namespace {

// Scalar prefactors of the first three discrete Magnus orders.
struct MagnusCoefficients {
  cplx first;
  cplx second;
  cplx third;
};

MagnusCoefficients magnus_coefficients(double dt) {
  return {-kI * dt, cplx(-0.5 * dt * dt, 0.0), kI * (dt * dt * dt / 6.0)};
}

void check_order(int order) {
  if (order < 1 || order > 3) throw std::invalid_argument("Magnus order must be 1, 2 or 3");
}

cplx i_power(int n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::span<const CMatrix> window_span(const std::vector<CMatrix>& h, const WindowPlan& plan, std::size_t w) {
  const auto [b, e] = plan.range(w);
  return std::span<const CMatrix>(h).subspan(b, e - b);
}

Eigen::Index sample_dim(const std::vector<CMatrix>& h) { return h.empty() ? 0 : h.front().rows(); }

}  // namespace

CMatrix omega_window(std::span<const CMatrix> h, double dt, int order, Eigen::Index dim) {
  check_order(order);
  const std::size_t m = h.size();
  if (m == 0) return CMatrix::Zero(dim, dim);
  const Eigen::Index d = h[0].rows();
  const auto coef = magnus_coefficients(dt);

  CMatrix sum_h = CMatrix::Zero(d, d);
  for (const auto& hj : h) sum_h += hj;
  CMatrix omega = coef.first * sum_h;
  if (order == 1) return omega;

  // K_j = [H_j, S_j], S_j = sum_{i<j} H_i
  CMatrix prefix = CMatrix::Zero(d, d);
  CMatrix sum_k = CMatrix::Zero(d, d);
  CMatrix running_k = CMatrix::Zero(d, d);  // C_j = sum_{i<j} K_i
  CMatrix third_a = CMatrix::Zero(d, d);
  for (std::size_t j = 0; j < m; ++j) {
    if (order == 3) third_a += commutator(h[j], running_k);
    const CMatrix kj = commutator(h[j], prefix);
    sum_k += kj;
    running_k += kj;
    prefix += h[j];
  }
  omega += coef.second * sum_k;
  if (order == 2) return omega;

  // L_j = [H_j, R_j], R_j = sum_{l>j} H_l; E_j = sum_{i>j} L_i
  CMatrix suffix = CMatrix::Zero(d, d);
  CMatrix running_l = CMatrix::Zero(d, d);
  CMatrix third_b = CMatrix::Zero(d, d);
  for (std::size_t jj = m; jj-- > 0;) {
    third_b += commutator(h[jj], running_l);
    running_l += commutator(h[jj], suffix);
    suffix += h[jj];
  }
  omega += coef.third * (third_a + third_b);
  return omega;
}

void omega_window_adjoint(std::span<const CMatrix> h, double dt, int order, const CMatrix& omega_bar,
                          std::span<CMatrix> h_bar) {
  check_order(order);
  const std::size_t m = h.size();
  if (m == 0) return;
  const Eigen::Index d = h[0].rows();
  const auto coef = magnus_coefficients(dt);

  const CMatrix g1 = std::conj(coef.first) * omega_bar;
  for (std::size_t j = 0; j < m; ++j) h_bar[j] += g1;
  if (order == 1) return;

  const CMatrix g2 = std::conj(coef.second) * omega_bar;
  const CMatrix g3 = std::conj(coef.third) * omega_bar;

  // Forward intermediates: S_j (prefix) and C_j (prefix of K).
  std::vector<CMatrix> s(m), c(m);
  {
    CMatrix prefix = CMatrix::Zero(d, d);
    CMatrix running_k = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < m; ++j) {
      s[j] = prefix;
      c[j] = running_k;
      running_k += commutator(h[j], prefix);
      prefix += h[j];
    }
  }

  // k_bar_j = g2 + sum_{j'>j} c_bar_{j'}, c_bar_j = [H_j^H, g3]
  std::vector<CMatrix> k_bar(m, g2);
  if (order == 3) {
    CMatrix acc = CMatrix::Zero(d, d);
    for (std::size_t jj = m; jj-- > 0;) {
      k_bar[jj] += acc;
      const CMatrix hj_h = h[jj].adjoint();
      h_bar[jj] += commutator(g3, c[jj].adjoint());
      acc += commutator(hj_h, g3);
    }
  }
  // K_j = [H_j, S_j]; S_j = sum_{i<j} H_i
  {
    CMatrix s_bar_acc = CMatrix::Zero(d, d);  // sum_{j>i} s_bar_j
    for (std::size_t jj = m; jj-- > 0;) {
      h_bar[jj] += s_bar_acc;
      h_bar[jj] += commutator(k_bar[jj], s[jj].adjoint());
      s_bar_acc += commutator(h[jj].adjoint(), k_bar[jj]);
    }
  }
  if (order == 2) return;

  // Second third-order sum: sum_j [H_j, E_j], E_j = sum_{i>j} L_i,
  // L_i = [H_i, R_i], R_i = sum_{l>i} H_l.
  std::vector<CMatrix> r(m), e(m);
  {
    CMatrix suffix = CMatrix::Zero(d, d);
    CMatrix running_l = CMatrix::Zero(d, d);
    for (std::size_t jj = m; jj-- > 0;) {
      r[jj] = suffix;
      e[jj] = running_l;
      running_l += commutator(h[jj], suffix);
      suffix += h[jj];
    }
  }
  std::vector<CMatrix> l_bar(m);
  {
    CMatrix acc = CMatrix::Zero(d, d);  // sum_{j<i} e_bar_j
    for (std::size_t j = 0; j < m; ++j) {
      l_bar[j] = acc;
      h_bar[j] += commutator(g3, e[j].adjoint());
      acc += commutator(h[j].adjoint(), g3);
    }
  }
  {
    CMatrix r_bar_acc = CMatrix::Zero(d, d);  // sum_{i<l} r_bar_i
    for (std::size_t j = 0; j < m; ++j) {
      h_bar[j] += r_bar_acc;
      h_bar[j] += commutator(l_bar[j], r[j].adjoint());
      r_bar_acc += commutator(h[j].adjoint(), l_bar[j]);
    }
  }
}

std::vector<CMatrix> window_omegas(const std::vector<CMatrix>& h, const WindowPlan& plan, double dt, int order) {
  check_order(order);
  if (h.size() != plan.n_t) throw std::invalid_argument("window_omegas: sample count does not match plan");
  const Eigen::Index d = sample_dim(h);
  std::vector<CMatrix> out(plan.n_w);
  const auto n_w = static_cast<std::ptrdiff_t>(plan.n_w);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t w = 0; w < n_w; ++w) {
    out[static_cast<std::size_t>(w)] = omega_window(window_span(h, plan, static_cast<std::size_t>(w)), dt, order, d);
  }
  return out;
}

std::vector<CMatrix> window_omegas_adjoint(const std::vector<CMatrix>& h, const WindowPlan& plan, double dt, int order,
                                           const std::vector<CMatrix>& omega_bar) {
  const Eigen::Index d = sample_dim(h);
  std::vector<CMatrix> h_bar(h.size(), CMatrix::Zero(d, d));
  const auto n_w = static_cast<std::ptrdiff_t>(plan.n_w);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t w = 0; w < n_w; ++w) {
    const auto [b, e] = plan.range(static_cast<std::size_t>(w));
    omega_window_adjoint(std::span<const CMatrix>(h).subspan(b, e - b), dt, order, omega_bar[static_cast<std::size_t>(w)],
                         std::span<CMatrix>(h_bar).subspan(b, e - b));
  }
  return h_bar;
}

std::vector<CMatrix> window_exponentials(const std::vector<CMatrix>& omegas) {
  std::vector<CMatrix> out(omegas.size());
  const auto n = static_cast<std::ptrdiff_t>(omegas.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t w = 0; w < n; ++w) out[static_cast<std::size_t>(w)] = expm(omegas[static_cast<std::size_t>(w)]);
  return out;
}

RMatrix commutator_rows(const RMatrix& x, const RMatrix& h, const OperatorBasis& basis) {
  const auto& table = basis.structure();
  const auto& offsets = basis.structure_offsets();
  const auto m = static_cast<Eigen::Index>(basis.size());
  if (x.cols() != m || h.cols() != m || x.rows() != h.rows())
    throw std::invalid_argument("commutator_rows: shape mismatch");
  RMatrix out = RMatrix::Zero(x.rows(), m);
  const auto rows = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < rows; ++n) {
    for (Eigen::Index k = 0; k < m; ++k) {
      double acc = 0.0;
      for (std::size_t idx = offsets[static_cast<std::size_t>(k)]; idx < offsets[static_cast<std::size_t>(k) + 1]; ++idx) {
        const auto& e = table[idx];
        acc += e.imag * x(n, e.i) * h(n, e.j);
      }
      out(n, k) = acc;
    }
  }
  return out;
}

void commutator_rows_adjoint(const RMatrix& x, const RMatrix& h, const OperatorBasis& basis, const RMatrix& out_bar,
                             RMatrix* x_bar, RMatrix* h_bar) {
  const auto& table = basis.structure();
  const auto rows = static_cast<std::ptrdiff_t>(x.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < rows; ++n) {
    for (const auto& e : table) {
      const double g = e.imag * out_bar(n, e.k);
      if (g == 0.0) continue;
      if (x_bar) (*x_bar)(n, e.i) += g * h(n, e.j);
      if (h_bar) (*h_bar)(n, e.j) += g * x(n, e.i);
    }
  }
}

std::vector<CMatrix> dense_rows(const RMatrix& coeffs, const OperatorBasis& basis) {
  if (static_cast<std::size_t>(coeffs.cols()) != basis.size()) throw std::invalid_argument("dense_rows: shape mismatch");
  if (basis.q() > kDefaultDenseCeiling) throw std::length_error("dense_rows: system size exceeds dense ceiling");
  const std::size_t d = std::size_t{1} << basis.q();
  const auto di = static_cast<Eigen::Index>(d);
  std::vector<CMatrix> out(static_cast<std::size_t>(coeffs.rows()));
  const auto rows = static_cast<std::ptrdiff_t>(coeffs.rows());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < rows; ++n) {
    CMatrix mat = CMatrix::Zero(di, di);
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const double c = coeffs(n, static_cast<Eigen::Index>(k));
      if (c == 0.0) continue;
      const auto x = basis.x_mask(k);
      const auto z = basis.z_mask(k);
      const cplx base = c * i_power(std::popcount(x & z));
      for (std::size_t b = 0; b < d; ++b) {
        const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
        mat(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b)) += base * sign;
      }
    }
    out[static_cast<std::size_t>(n)] = std::move(mat);
  }
  return out;
}

RMatrix dense_rows_adjoint(const std::vector<CMatrix>& g_bar, const OperatorBasis& basis) {
  const std::size_t d = std::size_t{1} << basis.q();
  RMatrix out = RMatrix::Zero(static_cast<Eigen::Index>(g_bar.size()), static_cast<Eigen::Index>(basis.size()));
  const auto rows = static_cast<std::ptrdiff_t>(g_bar.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < rows; ++n) {
    const CMatrix& g = g_bar[static_cast<std::size_t>(n)];
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const auto x = basis.x_mask(k);
      const auto z = basis.z_mask(k);
      const cplx base = i_power(std::popcount(x & z));
      double acc = 0.0;
      for (std::size_t b = 0; b < d; ++b) {
        const double sign = (std::popcount(b & z) & 1) ? -1.0 : 1.0;
        acc += (std::conj(g(static_cast<Eigen::Index>(b ^ x), static_cast<Eigen::Index>(b))) * base * sign).real();
      }
      out(n, static_cast<Eigen::Index>(k)) = acc;
    }
  }
  return out;
}

namespace serial {

CMatrix omega_window(std::span<const CMatrix> h, double dt, int order, Eigen::Index dim) {
  check_order(order);
  const std::size_t m = h.size();
  if (m == 0) return CMatrix::Zero(dim, dim);
  const Eigen::Index d = h[0].rows();
  const auto coef = magnus_coefficients(dt);
  CMatrix omega1 = CMatrix::Zero(d, d);
  for (std::size_t j = 0; j < m; ++j) omega1 += h[j];
  CMatrix omega = coef.first * omega1;
  if (order >= 2) {
    CMatrix omega2 = CMatrix::Zero(d, d);
    for (std::size_t j1 = 0; j1 < m; ++j1)
      for (std::size_t j2 = 0; j2 < j1; ++j2) omega2 += commutator(h[j1], h[j2]);
    omega += coef.second * omega2;
  }
  if (order >= 3) {
    CMatrix omega3 = CMatrix::Zero(d, d);
    for (std::size_t j1 = 0; j1 < m; ++j1)
      for (std::size_t j2 = 0; j2 < j1; ++j2)
        for (std::size_t j3 = 0; j3 < j2; ++j3)
          omega3 += commutator(h[j1], commutator(h[j2], h[j3])) + commutator(h[j3], commutator(h[j2], h[j1]));
    omega += coef.third * omega3;
  }
  return omega;
}

std::vector<CMatrix> window_omegas(const std::vector<CMatrix>& h, const WindowPlan& plan, double dt, int order) {
  if (h.size() != plan.n_t) throw std::invalid_argument("window_omegas: sample count does not match plan");
  std::vector<CMatrix> out;
  out.reserve(plan.n_w);
  for (std::size_t w = 0; w < plan.n_w; ++w) out.push_back(omega_window(window_span(h, plan, w), dt, order, sample_dim(h)));
  return out;
}

std::vector<CMatrix> window_exponentials(const std::vector<CMatrix>& omegas) {
  std::vector<CMatrix> out;
  out.reserve(omegas.size());
  for (const auto& o : omegas) out.push_back(expm(o));
  return out;
}

RMatrix commutator_rows(const RMatrix& x, const RMatrix& h, const OperatorBasis& basis) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  RMatrix out = RMatrix::Zero(x.rows(), m);
  for (Eigen::Index n = 0; n < x.rows(); ++n) {
    const OperatorCoeffs a = OperatorCoeffs::from_real(std::shared_ptr<const OperatorBasis>(&basis, [](const OperatorBasis*) {}),
                                                       x.row(n).transpose());
    const OperatorCoeffs b(a.basis(), h.row(n).transpose().cast<cplx>());
    const auto c = commutator_with_dropped(a, b).coeffs;
    out.row(n) = c.values().imag().transpose();
  }
  return out;
}

std::vector<CMatrix> dense_rows(const RMatrix& coeffs, const OperatorBasis& basis) {
  std::vector<CMatrix> out;
  const BasisPtr alias(&basis, [](const OperatorBasis*) {});
  for (Eigen::Index n = 0; n < coeffs.rows(); ++n)
    out.push_back(to_dense(OperatorCoeffs::from_real(alias, coeffs.row(n).transpose())));
  return out;
}

}  // namespace serial

}  // namespace qficd::kernels
