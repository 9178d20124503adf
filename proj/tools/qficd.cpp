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

// Command-line front end: train, evaluate, baseline, magnus-study and
// scalability subcommands over a JSON run configuration.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qficd/config.hpp"
#include "qficd/io.hpp"
#include "qficd/trainer.hpp"

namespace fs = std::filesystem;
using namespace qficd;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  std::vector<std::string> overrides;
  int repeats = 3;
};

RunConfig resolve_config(const GlobalOptions& g) {
  nlohmann::json doc = nlohmann::json::object();
  if (!g.config_path.empty()) {
    std::ifstream is(g.config_path);
    if (!is) throw std::runtime_error("cannot read config " + g.config_path);
    doc = nlohmann::json::parse(is);
  }
  for (const auto& o : g.overrides) apply_override(doc, o);
  if (g.seed_set) doc["seed"] = g.seed;
  if (!g.out.empty()) doc["output_dir"] = g.out;
  return config_from_json(doc);
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int run_repeated(const GlobalOptions& g, bool baseline) {
  const RunConfig base = resolve_config(g);
  if (g.repeats < 1) throw std::invalid_argument("--repeats must be at least 1");
  std::vector<double> etas;
  nlohmann::json runs = nlohmann::json::array();
  for (int r = 0; r < g.repeats; ++r) {
    RunConfig c = base;
    c.seed = base.seed + static_cast<std::uint64_t>(r);
    if (g.repeats > 1) c.output_dir = (fs::path(base.output_dir) / ("seed-" + std::to_string(c.seed))).string();
    TrainOptions opts;
    opts.progress = &std::cerr;
    const TrainResult res = baseline ? baseline_reference(c, opts) : train(c, opts);
    const auto& m = res.manifest;
    const double eta = m.metrics.eta.value_or(std::nan(""));
    etas.push_back(eta);
    std::cout << (baseline ? "baseline" : "train") << " seed " << c.seed << " eta " << format_double(eta)
              << (m.aborted ? " (aborted: " + m.abort_reason + ")" : "") << " -> " << c.output_dir << '\n';
    runs.push_back({{"seed", c.seed}, {"eta", eta}, {"output_dir", c.output_dir}, {"aborted", m.aborted}});
  }
  if (g.repeats > 1) {
    double mean = 0.0;
    for (double e : etas) mean += e;
    mean /= static_cast<double>(etas.size());
    double var = 0.0;
    for (double e : etas) var += (e - mean) * (e - mean);
    const double sd = etas.size() > 1 ? std::sqrt(var / static_cast<double>(etas.size() - 1)) : 0.0;
    const nlohmann::json summary = {
        {"runs", runs}, {"eta_mean", mean}, {"eta_std", sd}, {"eta_median", median(etas)}};
    write_text(fs::path(base.output_dir) / "summary.json", summary.dump(2) + "\n");
    std::cout << "eta mean " << format_double(mean) << " std " << format_double(sd) << " median "
              << format_double(median(etas)) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counter-diabatic protocol synthesis for quantum-enhanced frequency estimation"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
  app.add_option_function<std::uint64_t>(
      "--seed",
      [&](const std::uint64_t& s) {
        g.seed = s;
        g.seed_set = true;
      },
      "Random seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--override", g.overrides, "Configuration override key=value (dotted keys)")->take_all();
  app.fallthrough();

  auto* train_cmd = app.add_subcommand("train", "Train the network and write checkpoint, logs and metrics");
  train_cmd->add_option("--repeats", g.repeats, "Number of seeds (seed, seed+1, ...)");

  auto* base_cmd = app.add_subcommand("baseline", "Train with only the Euler-Lagrange term active");
  base_cmd->add_option("--repeats", g.repeats, "Number of seeds (seed, seed+1, ...)");

  std::string checkpoint_path;
  auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  eval_cmd->add_option("--checkpoint", checkpoint_path, "Checkpoint file")->required()->check(CLI::ExistingFile);

  std::vector<std::size_t> n_ws{4, 8, 16, 32, 64};
  std::vector<int> orders{1, 2, 3};
  std::string study_checkpoint;
  auto* study_cmd = app.add_subcommand("magnus-study", "Windowed Magnus error against step-by-step propagation");
  study_cmd->add_option("--n-w", n_ws, "Window counts")->delimiter(',');
  study_cmd->add_option("--orders", orders, "Magnus orders")->delimiter(',');
  study_cmd->add_option("--checkpoint", study_checkpoint, "Use a trained protocol instead of the reference one")
      ->check(CLI::ExistingFile);

  std::vector<int> qs{2, 3, 4};
  int k = 2;
  auto* scal_cmd = app.add_subcommand("scalability", "Per-step timing and output-memory model across system sizes");
  scal_cmd->add_option("--q", qs, "System sizes")->delimiter(',');
  scal_cmd->add_option("--k", k, "Basis locality");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_repeated(g, false);
    if (*base_cmd) return run_repeated(g, true);
    if (*eval_cmd) {
      const RunConfig c = resolve_config(g);
      const Checkpoint ck = load_checkpoint(checkpoint_path);
      const MetricsReport r = evaluate(ck, c);
      for (const auto& f : write_report(c.output_dir, r)) std::cout << "wrote " << f << '\n';
      std::cout << nlohmann::json(r).dump(2) << '\n';
      return 0;
    }
    if (*study_cmd) {
      const RunConfig c = resolve_config(g);
      const ObjectiveSetup setup = make_objective_setup(c.model, c.basis(), c.grid(), c.objective_options());
      const Protocol p = study_checkpoint.empty()
                             ? reference_protocol(c.model, setup.basis, setup.grid, setup.psi_in)
                             : protocol_from_net(load_checkpoint(study_checkpoint).net, setup);
      const MagnusStudy s = magnus_study(p, n_ws, orders, c.delta_rel);
      fs::create_directories(c.output_dir);
      write_magnus_study(c.output_dir, s);
      for (const auto& [order, slope] : s.state_slope)
        std::cout << "p=" << order << " state-error slope " << format_double(slope) << " eta-error slope "
                  << format_double(s.eta_slope.at(order)) << '\n';
      std::cout << "wrote " << (fs::path(c.output_dir) / "magnus_study.csv").string() << '\n';
      return 0;
    }
    if (*scal_cmd) {
      const RunConfig c = resolve_config(g);
      const auto rows = scalability_report(c, qs, k);
      const auto path = fs::path(c.output_dir) / "scalability.csv";
      write_scalability(path, rows);
      for (const auto& r : rows)
        std::cout << "q=" << r.q << " basis " << r.basis_size << " N_out " << r.n_out << " step "
                  << format_double(r.train_step_seconds) << " s, M_out " << format_double(r.memory_gib) << " GiB\n";
      std::cout << "wrote " << path.string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
