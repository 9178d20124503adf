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

#pragma once

#include <cstddef>
#include <string>

namespace qficd {

enum class ScheduleMode { Reference, Learned };

std::string to_string(ScheduleMode m);
ScheduleMode schedule_mode_from_string(const std::string& s);

/// Safe amplitude of the tanh correction for the cubic base schedule and the
/// t^2 (1-t)^2 envelope.
inline constexpr double kSafeAmplitude = 3.0;

struct ScheduleConfig {
  ScheduleMode mode = ScheduleMode::Learned;
  double K = kSafeAmplitude;
  double T = 1.0;
};

struct ScheduleSample {
  double t = 0.0;
  double lambda = 0.0;
  double dlambda_dt = 0.0;
};

/// sin^2(pi t / 2).
ScheduleSample lambda_ref(double t);

/// Base schedule 3t^2 - 2t^3 and envelope t^2 (1-t)^2 with derivatives.
double base_schedule(double t);
double base_schedule_rate(double t);
double envelope(double t);
double envelope_rate(double t);

/// lambda = base(t) + envelope(t) * 3 tanh(u), with du/dt supplied by the
/// caller. Evaluated in a factored form whose every summand is non-negative,
/// so lambda lies in [0, 1] in floating point for every finite u.
/// Throws std::logic_error if that invariant is ever broken.
ScheduleSample lambda_learned(double t, double u, double du_dt);

/// Partial derivatives of lambda_learned used by the training tape.
struct ScheduleJacobian {
  double dlambda_du;
  double drate_du;
  double drate_dudot;
};
ScheduleJacobian lambda_learned_jacobian(double t, double u, double du_dt);

struct SafeAmplitudeReport {
  double K = 0.0;
  /// Empirical infimum over interior grid points of min(base, 1-base)/envelope.
  double inf_ratio = 0.0;
  std::size_t violations = 0;
  double first_violation_t = -1.0;
  bool safe() const { return violations == 0; }
};

/// Checks K * envelope(t) <= min(base(t), 1 - base(t)) on `samples` interior
/// points of (0, 1). Throws std::invalid_argument unless K >= 0.
SafeAmplitudeReport verify_safe_amplitude(double K, std::size_t samples);

}  // namespace qficd
