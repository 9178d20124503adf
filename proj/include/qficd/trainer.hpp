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

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qficd/config.hpp"
#include "qficd/metrics.hpp"

namespace qficd {

std::string build_version();

struct RunManifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string build_version;
  std::map<std::string, double> wall_seconds;
  std::string loss_log;
  std::string checkpoint;
  std::vector<std::string> files;
  MetricsReport metrics;
  std::size_t epochs_completed = 0;
  bool aborted = false;
  std::string abort_reason;
};

void to_json(nlohmann::json& j, const RunManifest& m);

struct TrainOptions {
  /// Write artifacts under config.output_dir; otherwise keep everything in
  /// memory.
  bool write_files = true;
  /// Progress lines every `log_every` epochs when set.
  std::ostream* progress = nullptr;
  std::size_t log_every = 100;
};

struct TrainResult {
  Checkpoint checkpoint;
  RunManifest manifest;
  /// Per-epoch loss log as CSV text.
  std::string loss_csv;
};

/// Seeded full-grid training. A non-finite loss or gradient stops the run;
/// the checkpoint then holds the last parameters with a finite loss.
TrainResult train(const RunConfig& config, const TrainOptions& options = {});

/// Same pipeline with only the Euler-Lagrange term active (weight 1e3).
TrainResult baseline_reference(const RunConfig& config, const TrainOptions& options = {});
RunConfig baseline_config(const RunConfig& config);

/// Full metrics of a checkpoint under `config`. Throws std::invalid_argument
/// when the network does not fit the configured basis.
MetricsReport evaluate(const Checkpoint& checkpoint, const RunConfig& config);

/// Writes metrics.json, traces.csv and SVG plots; returns the paths written.
std::vector<std::string> write_report(const std::filesystem::path& dir, const MetricsReport& report);

struct MagnusStudyRow {
  std::size_t n_w = 0;
  int order = 0;
  double eta_error = 0.0;    // |eta_windowed - eta_sequential|
  double state_error = 0.0;  // |psi_windowed(T) - psi_sequential(T)|
  double bound = 0.0;        // T (T / n_w)^p
  double unitarity = 0.0;
};

struct MagnusStudy {
  std::vector<MagnusStudyRow> rows;
  /// Least-squares slope of log(state_error) against log(n_w), per order.
  std::map<int, double> state_slope;
  std::map<int, double> eta_slope;
};

/// Sweeps window counts and orders on `protocol`. Throws
/// std::invalid_argument on empty lists or a window count that does not
/// divide N_t.
MagnusStudy magnus_study(const Protocol& protocol, const std::vector<std::size_t>& n_w, const std::vector<int>& orders,
                         double delta_rel);
void write_magnus_study(const std::filesystem::path& dir, const MagnusStudy& study);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ScalabilityRow {
  int q = 0;
  std::size_t basis_size = 0;
  std::size_t n_out = 0;
  double train_step_seconds = 0.0;
  double inference_seconds = 0.0;
  double memory_gib = 0.0;
};

/// N_t * N_out * bytes / 1024^3.
double output_memory_gib(std::size_t n_t, std::size_t n_out, std::size_t bytes = 4);

/// Times one training step and one inference per q on `config` with the
/// model size replaced.
std::vector<ScalabilityRow> scalability_report(const RunConfig& config, const std::vector<int>& qs, int k);
void write_scalability(const std::filesystem::path& path, const std::vector<ScalabilityRow>& rows);

}  // namespace qficd
