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

#include "qficd/config.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "qficd/io.hpp"

namespace qficd {

void RunConfig::validate() const {
  model.validate();
  if (k < 2 || k > model.q) throw std::invalid_argument("config: basis locality k must satisfy 2 <= k <= q");
  if (n_t < 3) throw std::invalid_argument("config: grid needs at least three points");
  if (n_w == 0 || n_t % n_w != 0) throw std::invalid_argument("config: n_w must divide N_t");
  if (order < 1 || order > 3) throw std::invalid_argument("config: Magnus order must be 1, 2 or 3");
  weights.validate();
  if (!(lr > 0.0)) throw std::invalid_argument("config: learning rate must be positive");
  if (epochs < 1) throw std::invalid_argument("config: epochs must be at least 1");
  if (!(delta_rel > 0.0)) throw std::invalid_argument("config: delta_omega must be positive");
  net_shape().validate();
}

BasisPtr RunConfig::basis() const { return build_basis(model.q, k); }
TimeGrid RunConfig::grid() const { return TimeGrid(n_t, model.T); }

NetShape RunConfig::net_shape() const {
  return {lambda_width, lambda_depth, agp_width, agp_depth, basis_size(model.q, k)};
}

ObjectiveOptions RunConfig::objective_options() const { return {n_w, order, delta_rel, schedule, initial}; }

EvaluationOptions RunConfig::evaluation_options() const { return {delta_rel, Propagation{false, n_w, order}, frame}; }

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json model = c.model;
  model["J"] = c.model.J;
  model["T"] = c.model.T;
  return {{"schema_version", kConfigSchemaVersion},
          {"model", model},
          {"basis", {{"k", c.k}}},
          {"grid", {{"n_t", c.n_t}, {"n_w", c.n_w}, {"order", c.order}}},
          {"schedule", to_string(c.schedule)},
          {"loss", c.weights},
          {"optimizer", {{"lr", c.lr}, {"epochs", c.epochs}}},
          {"network",
           {{"lambda_width", c.lambda_width},
            {"lambda_depth", c.lambda_depth},
            {"agp_width", c.agp_width},
            {"agp_depth", c.agp_depth}}},
          {"seed", c.seed},
          {"initial_state", to_string(c.initial)},
          {"delta_omega_rel", c.delta_rel},
          {"extremal_frame", to_string(c.frame)},
          {"output_dir", c.output_dir}};
}

namespace {

void only_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items())
    if (!keys.count(key)) throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
}

}  // namespace

RunConfig config_from_json(const nlohmann::json& j) {
  only_keys(j,
            {"schema_version", "model", "basis", "grid", "schedule", "loss", "optimizer", "network", "seed",
             "initial_state", "delta_omega_rel", "extremal_frame", "output_dir"},
            "configuration");
  const int version = j.value("schema_version", kConfigSchemaVersion);
  if (version != kConfigSchemaVersion)
    throw std::invalid_argument("config: unsupported schema_version " + std::to_string(version));
  RunConfig c;
  try {
    if (j.contains("model")) {
      nlohmann::json m = j.at("model");
      only_keys(m, {"family", "q", "h", "omega", "J", "T"}, "model");
      if (m.contains("J")) c.model.J = m.at("J").get<double>();
      if (m.contains("T")) c.model.T = m.at("T").get<double>();
      m.erase("J");
      m.erase("T");
      nlohmann::json merged = c.model;
      merged.update(m);
      const double J = c.model.J, T = c.model.T;
      from_json(merged, c.model);
      c.model.J = J;
      c.model.T = T;
    }
    if (j.contains("basis")) {
      only_keys(j.at("basis"), {"k"}, "basis");
      c.k = j.at("basis").value("k", c.k);
    }
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      only_keys(g, {"n_t", "n_w", "order"}, "grid");
      c.n_t = g.value("n_t", c.n_t);
      c.n_w = g.value("n_w", c.n_w);
      c.order = g.value("order", c.order);
    }
    if (j.contains("schedule")) c.schedule = schedule_mode_from_string(j.at("schedule").get<std::string>());
    if (j.contains("loss")) c.weights = j.at("loss").get<LossWeights>();
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      only_keys(o, {"lr", "epochs"}, "optimizer");
      c.lr = o.value("lr", c.lr);
      const auto epochs = o.value("epochs", static_cast<long long>(c.epochs));
      if (epochs < 1) throw std::invalid_argument("config: epochs must be at least 1");
      c.epochs = static_cast<std::size_t>(epochs);
    }
    if (j.contains("network")) {
      const auto& n = j.at("network");
      only_keys(n, {"lambda_width", "lambda_depth", "agp_width", "agp_depth"}, "network");
      c.lambda_width = n.value("lambda_width", c.lambda_width);
      c.lambda_depth = n.value("lambda_depth", c.lambda_depth);
      c.agp_width = n.value("agp_width", c.agp_width);
      c.agp_depth = n.value("agp_depth", c.agp_depth);
    }
    c.seed = j.value("seed", c.seed);
    if (j.contains("initial_state")) c.initial = initial_state_from_string(j.at("initial_state").get<std::string>());
    c.delta_rel = j.value("delta_omega_rel", c.delta_rel);
    if (j.contains("extremal_frame")) c.frame = extremal_frame_from_string(j.at("extremal_frame").get<std::string>());
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read config " + path.string());
  return config_from_json(nlohmann::json::parse(is));
}

void apply_override(nlohmann::json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  nlohmann::json value;
  try {
    value = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error&) {
    value = raw;
  }
  nlohmann::json* node = &doc;
  std::stringstream ss(key);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node->is_object()) throw std::invalid_argument("override path is not an object: " + key);
    node = &(*node)[parts[i]];
    if (node->is_null()) *node = nlohmann::json::object();
  }
  if (!node->is_object()) throw std::invalid_argument("override path is not an object: " + key);
  (*node)[parts.back()] = value;
}

std::string config_hash(const RunConfig& c) {
  nlohmann::json j = to_json(c);
  j.erase("output_dir");
  const std::string text = j.dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* const kHex = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 15];
  }
  return hex;
}

nlohmann::json to_json(const Checkpoint& c) {
  return {{"format", "qficd-checkpoint"}, {"version", 1},       {"config_hash", c.config_hash},
          {"seed", c.seed},               {"epoch", c.epoch},   {"network", c.net},
          {"optimizer", c.optimizer}};
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "qficd-checkpoint" || j.value("version", 0) != 1)
    throw std::invalid_argument("not a version-1 checkpoint");
  Checkpoint c;
  c.config_hash = j.at("config_hash").get<std::string>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.epoch = j.at("epoch").get<std::size_t>();
  c.net = j.at("network").get<DualBranchNet>();
  c.optimizer = j.at("optimizer").get<Adam>();
  return c;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  write_text(path, to_json(c).dump(1) + "\n");
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read checkpoint " + path.string());
  return checkpoint_from_json(nlohmann::json::parse(is));
}

}  // namespace qficd
