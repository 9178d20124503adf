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

#include "qficd/magnus.hpp"

#include <cmath>
#include <stdexcept>

#include "qficd/kernels.hpp"

namespace qficd {

TimeGrid::TimeGrid(std::size_t n, double horizon) : n_t(n), T(horizon) {
  if (n < 2) throw std::invalid_argument("TimeGrid needs at least two points");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("TimeGrid horizon must be positive");
}

double TimeGrid::time(std::size_t j) const {
  if (j + 1 == n_t) return T;
  return static_cast<double>(j) * dt();
}

std::vector<double> TimeGrid::times() const {
  std::vector<double> out(n_t);
  for (std::size_t j = 0; j < n_t; ++j) out[j] = time(j);
  return out;
}

WindowPlan::WindowPlan(std::size_t n, std::size_t windows) : n_w(windows), n_t(n) {
  if (windows == 0 || n % windows != 0)
    throw std::invalid_argument("window count must divide the number of grid points");
  m = n / windows;
}

std::pair<std::size_t, std::size_t> WindowPlan::range(std::size_t w) const {
  const std::size_t begin = w * m;
  const std::size_t end = std::min((w + 1) * m, n_t - 1);
  return {std::min(begin, end), end};
}

std::vector<CMatrix> sample_grid(const HamiltonianSampler& sampler, const TimeGrid& grid) {
  std::vector<CMatrix> h;
  h.reserve(grid.n_t);
  for (std::size_t j = 0; j < grid.n_t; ++j) h.push_back(sampler(j));
  return h;
}

CMatrix window_propagator(const CMatrix& omega) {
  if (!is_finite(omega)) throw std::domain_error("window_propagator: non-finite generator");
  return expm(omega);
}

namespace {

void check_inputs(const CVector& psi0, const std::vector<CMatrix>& h, const TimeGrid& grid) {
  if (h.size() != grid.n_t) throw std::invalid_argument("sample count does not match the time grid");
  for (const auto& hj : h)
    if (hj.rows() != psi0.size() || hj.cols() != psi0.size())
      throw std::invalid_argument("Hamiltonian and state dimensions differ");
}

}  // namespace

WindowedEvolution evolve_windowed(const CVector& psi0, const std::vector<CMatrix>& h, const TimeGrid& grid,
                                  const WindowPlan& plan, int order) {
  check_inputs(psi0, h, grid);
  if (plan.n_t != grid.n_t) throw std::invalid_argument("window plan does not match the time grid");
  const auto omegas = kernels::window_omegas(h, plan, grid.dt(), order);
  for (const auto& o : omegas)
    if (!is_finite(o)) throw std::domain_error("evolve_windowed: non-finite generator");
  WindowedEvolution out;
  out.propagators = kernels::window_exponentials(omegas);
  out.psi_final = psi0;
  for (const auto& u : out.propagators) out.psi_final = u * out.psi_final;
  return out;
}

WindowedEvolution evolve_windowed(const CVector& psi0, const HamiltonianSampler& sampler, const TimeGrid& grid,
                                  const WindowPlan& plan, int order) {
  return evolve_windowed(psi0, sample_grid(sampler, grid), grid, plan, order);
}

CVector evolve_sequential(const CVector& psi0, const std::vector<CMatrix>& h, const TimeGrid& grid) {
  check_inputs(psi0, h, grid);
  const double dt = grid.dt();
  CVector psi = psi0;
  for (std::size_t j = 0; j + 1 < grid.n_t; ++j) psi = window_propagator(-kI * dt * h[j]) * psi;
  return psi;
}

CVector evolve_sequential(const CVector& psi0, const HamiltonianSampler& sampler, const TimeGrid& grid) {
  const double dt = grid.dt();
  CVector psi = psi0;
  for (std::size_t j = 0; j + 1 < grid.n_t; ++j) {
    const CMatrix hj = sampler(j);
    if (hj.rows() != psi.size() || hj.cols() != psi.size())
      throw std::invalid_argument("Hamiltonian and state dimensions differ");
    psi = window_propagator(-kI * dt * hj) * psi;
  }
  return psi;
}

std::vector<CVector> sequential_states(const CVector& psi0, const std::vector<CMatrix>& h, const TimeGrid& grid) {
  check_inputs(psi0, h, grid);
  const double dt = grid.dt();
  std::vector<CVector> states;
  states.reserve(grid.n_t);
  states.push_back(psi0);
  for (std::size_t j = 0; j + 1 < grid.n_t; ++j) states.push_back(window_propagator(-kI * dt * h[j]) * states.back());
  return states;
}

double truncation_error_bound(double T, std::size_t n_w, int order) {
  if (n_w == 0) throw std::invalid_argument("window count must be positive");
  if (order < 1 || order > 3) throw std::invalid_argument("Magnus order must be 1, 2 or 3");
  return T * std::pow(T / static_cast<double>(n_w), order);
}

}  // namespace qficd
