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

#include "qficd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qficd {

std::string to_string(ScheduleMode m) { return m == ScheduleMode::Reference ? "reference" : "learned"; }

ScheduleMode schedule_mode_from_string(const std::string& s) {
  if (s == "reference") return ScheduleMode::Reference;
  if (s == "learned") return ScheduleMode::Learned;
  throw std::invalid_argument("unknown schedule mode '" + s + "'");
}

ScheduleSample lambda_ref(double t) {
  const double s = std::sin(std::numbers::pi * t / 2.0);
  return {t, s * s, std::numbers::pi / 2.0 * std::sin(std::numbers::pi * t)};
}

double base_schedule(double t) { return t * t * (3.0 - 2.0 * t); }
double base_schedule_rate(double t) { return 6.0 * t * (1.0 - t); }
double envelope(double t) { return t * t * (1.0 - t) * (1.0 - t); }
double envelope_rate(double t) { return 2.0 * t * (1.0 - t) * (1.0 - 2.0 * t); }

ScheduleSample lambda_learned(double t, double u, double du_dt) {
  const double tau = std::tanh(u);
  const double s = 1.0 - t;
  double lambda;
  if (t < 0.5) {
    // base + 3 g tau = t^2 [3 (1 + tau) s^2 + t (4 - 3t)]
    lambda = t * t * (3.0 * (1.0 + tau) * s * s + t * (4.0 - 3.0 * t));
  } else {
    // 1 - lambda = s^2 [3 (1 - tau) t^2 + s (4 - 3s)]
    lambda = 1.0 - s * s * (3.0 * (1.0 - tau) * t * t + s * (4.0 - 3.0 * s));
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::logic_error("lambda_learned: schedule left [0, 1]");
  const double sech2 = 1.0 - tau * tau;
  const double rate = base_schedule_rate(t) + kSafeAmplitude * (envelope_rate(t) * tau + envelope(t) * sech2 * du_dt);
  return {t, lambda, rate};
}

ScheduleJacobian lambda_learned_jacobian(double t, double u, double du_dt) {
  const double tau = std::tanh(u);
  const double sech2 = 1.0 - tau * tau;
  const double g = envelope(t);
  const double gp = envelope_rate(t);
  return {kSafeAmplitude * g * sech2, kSafeAmplitude * (gp * sech2 - 2.0 * g * tau * sech2 * du_dt), kSafeAmplitude * g * sech2};
}

SafeAmplitudeReport verify_safe_amplitude(double K, std::size_t samples) {
  if (!(K >= 0.0)) throw std::invalid_argument("verify_safe_amplitude: K must be >= 0");
  SafeAmplitudeReport rep;
  rep.K = K;
  rep.inf_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= samples; ++n) {
    const double t = static_cast<double>(n) / static_cast<double>(samples + 1);
    const double b = base_schedule(t);
    const double room = std::min(b, 1.0 - b);
    const double g = envelope(t);
    rep.inf_ratio = std::min(rep.inf_ratio, room / g);
    if (K * g > room) {
      if (rep.violations == 0) rep.first_violation_t = t;
      ++rep.violations;
    }
  }
  return rep;
}

}  // namespace qficd
