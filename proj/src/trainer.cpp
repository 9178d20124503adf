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

#include "qficd/trainer.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "qficd/io.hpp"
#include "qficd/magnus.hpp"
#include "qficd/objective.hpp"

#ifndef QFICD_VERSION
#define QFICD_VERSION "0.0.0"
#endif

namespace qficd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> flags_to_double(const std::vector<bool>& f) {
  std::vector<double> out;
  for (bool b : f) out.push_back(b ? 1.0 : 0.0);
  return out;
}

}  // namespace

std::string build_version() { return std::string("qficd ") + QFICD_VERSION + " (" + __VERSION__ + ")"; }

void to_json(nlohmann::json& j, const RunManifest& m) {
  j = {{"config_hash", m.config_hash},
       {"seed", m.seed},
       {"build_version", m.build_version},
       {"wall_seconds", m.wall_seconds},
       {"loss_log", m.loss_log},
       {"checkpoint", m.checkpoint},
       {"files", m.files},
       {"metrics", m.metrics},
       {"epochs_completed", m.epochs_completed},
       {"aborted", m.aborted},
       {"abort_reason", m.abort_reason}};
}

std::vector<std::string> write_report(const std::filesystem::path& dir, const MetricsReport& r) {
  std::vector<std::string> files;
  const auto metrics_path = dir / "metrics.json";
  write_text(metrics_path, nlohmann::json(r).dump(2) + "\n");
  files.push_back(metrics_path.string());

  CsvTable traces{{"t", "lambda", "lambda_rate", "p_ext", "p_ext_degenerate", "mismatch_control",
                   "mismatch_sensitivity", "mismatch_total"},
                  {r.times, r.lambda, r.lambda_rate, r.p_ext.values, flags_to_double(r.p_ext.flags),
                   r.mismatch_control.values, r.mismatch_sensitivity.values, r.mismatch_total.values}};
  const auto traces_path = dir / "traces.csv";
  write_csv(traces_path, traces);
  files.push_back(traces_path.string());

  const auto plot = [&](const std::string& name, const std::vector<Series>& s, const PlotSpec& spec) {
    const auto path = dir / name;
    write_text(path, svg_line_plot(s, spec));
    files.push_back(path.string());
  };
  plot("schedule.svg", {{"lambda", r.times, r.lambda}}, {"Schedule", "t", "lambda", false, false});
  plot("p_ext.svg", {{"P_ext", r.times, r.p_ext.values}}, {"Extremal-subspace population", "t", "P_ext", false, false});
  plot("mismatch.svg",
       {{"control", r.times, r.mismatch_control.values},
        {"sensitivity", r.times, r.mismatch_sensitivity.values},
        {"total", r.times, r.mismatch_total.values}},
       {"Parity mismatch", "t", "normalized commutator", false, false});
  return files;
}

namespace {

TrainResult run_training(const RunConfig& config, const LossWeights& weights, const TrainOptions& options) {
  config.validate();
  RunManifest manifest;
  manifest.config_hash = config_hash(config);
  manifest.seed = config.seed;
  manifest.build_version = build_version();

  auto t0 = Clock::now();
  const BasisPtr basis = config.basis();
  const ObjectiveSetup setup = make_objective_setup(config.model, basis, config.grid(), config.objective_options());
  DualBranchNet net = DualBranchNet::xavier(config.net_shape(), config.seed);
  Adam adam({config.lr}, static_cast<Eigen::Index>(net.parameter_count()));
  manifest.wall_seconds["setup"] = seconds_since(t0);

  std::ostringstream log;
  write_loss_header(log);
  Checkpoint last_good{manifest.config_hash, config.seed, 0, net, adam};

  t0 = Clock::now();
  std::size_t epoch = 0;
  for (; epoch < config.epochs; ++epoch) {
    const ObjectiveResult res = evaluate_objective(net, setup, weights, true);
    if (!std::isfinite(res.breakdown.total)) {
      manifest.aborted = true;
      manifest.abort_reason = "non-finite loss at epoch " + std::to_string(epoch);
      break;
    }
    write_loss_row(log, epoch, res.breakdown);
    last_good = {manifest.config_hash, config.seed, epoch, net, adam};
    if (options.progress && options.log_every > 0 && epoch % options.log_every == 0)
      *options.progress << "epoch " << epoch << " total " << format_double(res.breakdown.total) << " eta "
                        << format_double(res.eta) << '\n';
    RVector params = net.flat();
    const StepResult step = adam.step(params, res.grad);
    if (!step.applied) {
      manifest.aborted = true;
      manifest.abort_reason = step.reason + " at epoch " + std::to_string(epoch);
      break;
    }
    net.set_flat(params);
  }
  manifest.epochs_completed = epoch;
  manifest.wall_seconds["train"] = seconds_since(t0);

  TrainResult result;
  result.checkpoint =
      manifest.aborted ? last_good : Checkpoint{manifest.config_hash, config.seed, epoch, std::move(net), adam};
  result.loss_csv = log.str();

  t0 = Clock::now();
  manifest.metrics = evaluate_protocol(protocol_from_net(result.checkpoint.net, setup), config.evaluation_options());
  manifest.wall_seconds["evaluate"] = seconds_since(t0);

  if (options.write_files) {
    const std::filesystem::path dir = config.output_dir;
    std::filesystem::create_directories(dir);
    const auto cfg_path = dir / "config.json";
    write_text(cfg_path, to_json(config).dump(2) + "\n");
    const auto loss_path = dir / "loss.csv";
    write_text(loss_path, result.loss_csv);
    const auto ckpt_path = dir / "checkpoint.json";
    save_checkpoint(ckpt_path, result.checkpoint);
    manifest.loss_log = loss_path.string();
    manifest.checkpoint = ckpt_path.string();
    manifest.files = {cfg_path.string(), loss_path.string(), ckpt_path.string()};
    for (auto& f : write_report(dir, manifest.metrics)) manifest.files.push_back(std::move(f));

    std::vector<double> epochs, totals;
    std::istringstream rows(result.loss_csv);
    std::string line;
    std::getline(rows, line);
    while (std::getline(rows, line)) {
      const auto first = line.find(',');
      const auto last = line.rfind(',');
      epochs.push_back(std::stod(line.substr(0, first)));
      totals.push_back(std::stod(line.substr(last + 1)));
    }
    const auto loss_svg = dir / "loss.svg";
    write_text(loss_svg, svg_line_plot({{"total", epochs, totals}}, {"Training loss", "epoch", "loss", false, true}));
    manifest.files.push_back(loss_svg.string());
    const auto manifest_path = dir / "manifest.json";
    manifest.files.push_back(manifest_path.string());
    write_text(manifest_path, nlohmann::json(manifest).dump(2) + "\n");
  }
  result.manifest = std::move(manifest);
  return result;
}

}  // namespace

TrainResult train(const RunConfig& config, const TrainOptions& options) {
  return run_training(config, config.weights, options);
}

RunConfig baseline_config(const RunConfig& config) {
  RunConfig c = config;
  const double eps_t = c.weights.eps_t;
  c.weights = LossWeights::baseline();
  c.weights.eps_t = eps_t;
  return c;
}

TrainResult baseline_reference(const RunConfig& config, const TrainOptions& options) {
  const RunConfig c = baseline_config(config);
  return run_training(c, c.weights, options);
}

MetricsReport evaluate(const Checkpoint& checkpoint, const RunConfig& config) {
  config.validate();
  const NetShape& have = checkpoint.net.shape();
  const NetShape want = config.net_shape();
  if (have.basis_size != want.basis_size)
    throw std::invalid_argument("checkpoint basis size " + std::to_string(have.basis_size) +
                                " does not match the configured basis size " + std::to_string(want.basis_size));
  const ObjectiveSetup setup =
      make_objective_setup(config.model, config.basis(), config.grid(), config.objective_options());
  return evaluate_protocol(protocol_from_net(checkpoint.net, setup), config.evaluation_options());
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MagnusStudy magnus_study(const Protocol& protocol, const std::vector<std::size_t>& n_w, const std::vector<int>& orders,
                         double delta_rel) {
  if (n_w.empty() || orders.empty()) throw std::invalid_argument("magnus_study: empty sweep");
  for (auto w : n_w)
    if (w == 0 || protocol.grid.n_t % w != 0)
      throw std::invalid_argument("magnus_study: n_w = " + std::to_string(w) + " does not divide N_t");
  protocol.validate();
  const double omega = protocol.model.omega;
  const double delta = delta_rel * omega;
  const auto h = protocol.total_dense(omega);
  const CVector psi_seq = evolve_sequential(protocol.psi_in, h, protocol.grid);
  const double f_max = qfi_max_bound(protocol.sensitivity_dense(omega), protocol.grid);
  const double f_seq = qfi_central_diff(protocol, omega, delta, {true, 1, 1}).F;

  MagnusStudy study;
  for (int p : orders) {
    std::vector<double> xs, ys, es;
    for (auto w : n_w) {
      MagnusStudyRow row;
      row.n_w = w;
      row.order = p;
      const auto ev = evolve_windowed(protocol.psi_in, h, protocol.grid, WindowPlan(protocol.grid.n_t, w), p);
      row.state_error = (ev.psi_final - psi_seq).norm();
      row.unitarity = unitarity_error(ev.propagators);
      const double f_win = qfi_central_diff(protocol, omega, delta, {false, w, p}).F;
      row.eta_error = f_max > 0 ? std::abs(f_win - f_seq) / f_max : std::abs(f_win - f_seq);
      row.bound = truncation_error_bound(protocol.grid.T, w, p);
      study.rows.push_back(row);
      xs.push_back(static_cast<double>(w));
      ys.push_back(row.state_error);
      es.push_back(row.eta_error);
    }
    if (xs.size() >= 2) {
      study.state_slope[p] = loglog_slope(xs, ys);
      study.eta_slope[p] = loglog_slope(xs, es);
    }
  }
  return study;
}

void write_magnus_study(const std::filesystem::path& dir, const MagnusStudy& study) {
  CsvTable t{{"n_w", "p", "measured_error", "state_error", "bound", "unitarity_error"}, {{}, {}, {}, {}, {}, {}}};
  std::map<int, Series> measured, bounds;
  for (const auto& r : study.rows) {
    t.columns[0].push_back(static_cast<double>(r.n_w));
    t.columns[1].push_back(r.order);
    t.columns[2].push_back(r.eta_error);
    t.columns[3].push_back(r.state_error);
    t.columns[4].push_back(r.bound);
    t.columns[5].push_back(r.unitarity);
    auto& m = measured[r.order];
    m.label = "p=" + std::to_string(r.order) + " state error";
    m.x.push_back(static_cast<double>(r.n_w));
    m.y.push_back(r.state_error);
    auto& b = bounds[r.order];
    b.label = "p=" + std::to_string(r.order) + " bound";
    b.x.push_back(static_cast<double>(r.n_w));
    b.y.push_back(r.bound);
  }
  write_csv(dir / "magnus_study.csv", t);
  std::vector<Series> series;
  for (auto& [p, s] : measured) {
    series.push_back(s);
    series.push_back(bounds[p]);
  }
  write_text(dir / "magnus_study.svg",
             svg_line_plot(series, {"Windowed Magnus error", "n_w", "error", true, true}));
}

double output_memory_gib(std::size_t n_t, std::size_t n_out, std::size_t bytes) {
  return static_cast<double>(n_t) * static_cast<double>(n_out) * static_cast<double>(bytes) /
         (1024.0 * 1024.0 * 1024.0);
}

std::vector<ScalabilityRow> scalability_report(const RunConfig& config, const std::vector<int>& qs, int k) {
  std::vector<ScalabilityRow> rows;
  for (int q : qs) {
    RunConfig c = config;
    c.model.q = q;
    c.k = std::min(k, q);
    c.validate();
    ScalabilityRow row;
    row.q = q;
    row.basis_size = basis_size(q, c.k);
    row.n_out = row.basis_size + 1;
    row.memory_gib = output_memory_gib(c.n_t, row.n_out);
    const ObjectiveSetup setup = make_objective_setup(c.model, c.basis(), c.grid(), c.objective_options());
    const DualBranchNet net = DualBranchNet::xavier(c.net_shape(), c.seed);
    auto t0 = Clock::now();
    (void)evaluate_objective(net, setup, c.weights, true);
    row.train_step_seconds = seconds_since(t0);
    t0 = Clock::now();
    (void)net.forward(setup.tau);
    row.inference_seconds = seconds_since(t0);
    rows.push_back(row);
  }
  return rows;
}

void write_scalability(const std::filesystem::path& path, const std::vector<ScalabilityRow>& rows) {
  CsvTable t{{"q", "basis_size", "n_out", "train_step_seconds", "inference_seconds", "memory_gib"},
             {{}, {}, {}, {}, {}, {}}};
  for (const auto& r : rows) {
    t.columns[0].push_back(r.q);
    t.columns[1].push_back(static_cast<double>(r.basis_size));
    t.columns[2].push_back(static_cast<double>(r.n_out));
    t.columns[3].push_back(r.train_step_seconds);
    t.columns[4].push_back(r.inference_seconds);
    t.columns[5].push_back(r.memory_gib);
  }
  write_csv(path, t);
}

}  // namespace qficd
