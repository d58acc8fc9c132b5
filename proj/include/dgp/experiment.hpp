// Copyright 2026 The dgp-vgae Authors. All Rights Reserved.
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

// End-to-end experiment protocol: load or synthesize a graph, split it,
// train one model per run with seed base + k, score the test pairs and
// aggregate AUC / AP across runs.

#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "dgp/baselines.hpp"
#include "dgp/error.hpp"
#include "dgp/graph.hpp"
#include "dgp/ingest.hpp"
#include "dgp/io.hpp"
#include "dgp/metrics.hpp"
#include "dgp/split.hpp"
#include "dgp/vgae.hpp"

namespace dgp {

enum class ModelKind { Vgae, Cvgae, DeepWalk, Node2Vec };

inline constexpr std::string_view to_string(ModelKind m) {
  switch (m) {
    case ModelKind::Vgae: return "vgae";
    case ModelKind::Cvgae: return "cvgae";
    case ModelKind::DeepWalk: return "deepwalk";
    case ModelKind::Node2Vec: return "node2vec";
  }
  return "vgae";
}

inline ModelKind model_from_string(const std::string& s) {
  if (s == "vgae") return ModelKind::Vgae;
  if (s == "cvgae") return ModelKind::Cvgae;
  if (s == "deepwalk") return ModelKind::DeepWalk;
  if (s == "node2vec") return ModelKind::Node2Vec;
  throw Error(ErrorCode::InvalidParams, "unknown model '" + s + "'");
}

inline bool is_vgae_family(ModelKind m) { return m == ModelKind::Vgae || m == ModelKind::Cvgae; }

struct ModelSettings {
  ModelKind kind = ModelKind::Vgae;
  VgaeConfig vgae{};
  WalkConfig walk{};
  SgnsConfig sgns{};
};

/// Where the graph comes from: an edge-list file or the planted-partition
/// generator.
struct DataSource {
  std::optional<std::string> path;
  bool swap_columns = false;
  /// Every node Generic: a homogeneous graph for general link prediction.
  bool untyped = false;
  std::optional<SbmParams> synthetic;
};

struct ExperimentConfig {
  DataSource data;
  SplitPolicy policy = SplitPolicy::General;
  SplitRatios ratios{};
  std::uint64_t seed = 0;
  /// When set, every run reuses this split instead of drawing a new one.
  std::optional<std::string> split_file;
  ModelSettings model{};
  std::size_t runs = 10;
};

inline std::uint64_t run_seed(std::uint64_t base, std::size_t run) { return base + run; }

inline ParsedGraph load_dataset(const DataSource& src) {
  if (src.synthetic) return synth_bipartite_sbm(*src.synthetic);
  if (!src.path) throw Error(ErrorCode::InvalidParams, "no dataset given");
  std::ifstream in(*src.path);
  if (!in) throw Error(ErrorCode::EmptyInput, "cannot open '" + *src.path + "'");
  if (src.untyped) return parse_edge_list(in, ColumnSpec{0, ColumnSpec::kLastColumn}, KindByPrefix{});
  return load_biosnap_dg(in, src.swap_columns);
}

inline EdgeSplit load_split_file(const std::string& path, const Graph& g) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::EmptyInput, "cannot open split file '" + path + "'");
  EdgeSplit s = split_from_json(parse_json(in));
  if (s.num_nodes != g.num_nodes()) throw Error(ErrorCode::BadFormat, "split node count does not match dataset");
  return s;
}

struct RunResult {
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double auc = 0.0;
  double ap = 0.0;
  /// VGAE models: epoch whose params were evaluated (0 = initialization).
  std::size_t selected_epoch = 0;
};

/// The settings actually used for one run: every seed replaced by `seed`
/// (SGNS gets a stream derived from it), DeepWalk pinned to p = q = 1.
inline ModelSettings seeded_settings(ModelSettings m, std::uint64_t seed) {
  m.vgae.seed = seed;
  m.walk.seed = seed;
  m.sgns.seed = derive_seed(seed, 1);
  m.sgns.window = m.walk.window;
  if (m.kind == ModelKind::DeepWalk) m.walk.p = m.walk.q = 1.0;
  return m;
}

/// Baseline embeddings trained on the training edges only.
inline Embeddings train_walk_embeddings(const Graph& full, const EdgeSplit& split, const ModelSettings& m) {
  const Graph train_g = training_graph(full, split);
  const WalkCorpus corpus = generate_walks(train_g, m.walk);
  return train_sgns(corpus, full.num_nodes(), m.sgns);
}

/// Test-set scores (logits) for one trained model.
inline ScoredPairs score_test_pairs(const DenseMatrix& node_vectors, const EdgeSplit& split) {
  return {decode_logits(node_vectors, split.test_pos), decode_logits(node_vectors, split.test_neg)};
}

inline RunResult run_model(const Graph& full, const EdgeSplit& split, const ModelSettings& settings,
                           std::uint64_t seed) {
  const ModelSettings m = seeded_settings(settings, seed);
  RunResult r;
  r.seed = seed;
  ScoredPairs scored;
  if (is_vgae_family(m.kind)) {
    const auto objective = m.kind == ModelKind::Vgae ? Objective::Vgae : Objective::Cvgae;
    const TrainResult tr = train(full, split, m.vgae, objective);
    const TrainingView view(full, split);
    Rng unused(0);
    const LatentSample lat = encode(view.normalized, tr.params, m.vgae, unused, false);
    scored = score_test_pairs(lat.z, split);
    r.selected_epoch = tr.selected_epoch;
  } else {
    const Embeddings emb = train_walk_embeddings(full, split, m);
    scored = score_test_pairs(emb.table, split);
  }
  r.auc = roc_auc(scored);
  r.ap = average_precision(scored);
  return r;
}

struct ExperimentResult {
  std::vector<RunResult> runs;
  std::optional<RunSummary> summary;
  bool ok = true;
  std::string error;
  std::optional<ErrorCode> error_code;
};

/// Runs every seed in order. A failing run stops the experiment; the runs
/// completed so far are kept and the result is marked failed.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const std::function<void(const RunResult&)>& on_run = {}) {
  ExperimentResult res;
  try {
    if (cfg.runs < 1) throw Error(ErrorCode::InvalidParams, "runs must be >= 1");
    const ParsedGraph data = load_dataset(cfg.data);
    std::optional<EdgeSplit> fixed;
    if (cfg.split_file) fixed = load_split_file(*cfg.split_file, data.graph);
    for (std::size_t k = 0; k < cfg.runs; ++k) {
      const std::uint64_t seed = run_seed(cfg.seed, k);
      const EdgeSplit split = fixed ? *fixed : split_edges(data.graph, cfg.ratios, cfg.policy, seed);
      RunResult r = run_model(data.graph, split, cfg.model, seed);
      r.run = k;
      res.runs.push_back(r);
      if (on_run) on_run(r);
    }
  } catch (const Error& e) {
    res.ok = false;
    res.error = e.what();
    res.error_code = e.code();
  }
  if (!res.runs.empty()) {
    std::vector<double> auc, ap;
    for (const auto& r : res.runs) {
      auc.push_back(r.auc);
      ap.push_back(r.ap);
    }
    res.summary = aggregate_runs(std::move(auc), std::move(ap));
  }
  return res;
}

// ---- config (de)serialization ----

inline json to_json(const SbmParams& p) {
  return {{"n_disease", p.n_disease}, {"n_gene", p.n_gene}, {"blocks", p.blocks},
          {"p_in", p.p_in},           {"p_out", p.p_out},   {"seed", p.seed}};
}

inline SbmParams sbm_from_json(const json& j) {
  SbmParams p;
  p.n_disease = detail::get_or_throw<std::size_t>(j, "n_disease");
  p.n_gene = detail::get_or_throw<std::size_t>(j, "n_gene");
  p.blocks = detail::get_or_throw<std::size_t>(j, "blocks");
  p.p_in = detail::get_or_throw<double>(j, "p_in");
  p.p_out = detail::get_or_throw<double>(j, "p_out");
  p.seed = detail::get_or_throw<std::uint64_t>(j, "seed");
  return p;
}

inline json to_json(const ExperimentConfig& c) {
  json data = json::object();
  if (c.data.path) data["path"] = *c.data.path;
  data["swap_columns"] = c.data.swap_columns;
  data["untyped"] = c.data.untyped;
  if (c.data.synthetic) data["synthetic"] = to_json(*c.data.synthetic);
  json model = {{"kind", std::string(to_string(c.model.kind))}};
  if (is_vgae_family(c.model.kind)) {
    model["vgae"] = to_json(c.model.vgae);
  } else {
    model["walk"] = to_json(c.model.walk);
    model["sgns"] = to_json(c.model.sgns);
  }
  json j = {{"data", data},
            {"policy", std::string(to_string(c.policy))},
            {"ratios", {c.ratios.train, c.ratios.val, c.ratios.test}},
            {"seed", c.seed},
            {"runs", c.runs},
            {"model", model}};
  if (c.split_file) j["split_file"] = *c.split_file;
  return j;
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  const json& data = j.at("data");
  if (data.contains("path")) c.data.path = data.at("path").get<std::string>();
  c.data.swap_columns = data.value("swap_columns", false);
  c.data.untyped = data.value("untyped", false);
  if (data.contains("synthetic")) c.data.synthetic = sbm_from_json(data.at("synthetic"));
  c.policy = policy_from_string(detail::get_or_throw<std::string>(j, "policy"));
  const auto r = detail::get_or_throw<std::vector<double>>(j, "ratios");
  if (r.size() != 3) throw Error(ErrorCode::BadFormat, "ratios must have three entries");
  c.ratios = {r[0], r[1], r[2]};
  c.seed = detail::get_or_throw<std::uint64_t>(j, "seed");
  c.runs = detail::get_or_throw<std::size_t>(j, "runs");
  if (j.contains("split_file")) c.split_file = j.at("split_file").get<std::string>();
  const json& model = j.at("model");
  c.model.kind = model_from_string(detail::get_or_throw<std::string>(model, "kind"));
  if (model.contains("vgae")) c.model.vgae = vgae_config_from_json(model.at("vgae"));
  if (model.contains("walk")) c.model.walk = walk_config_from_json(model.at("walk"));
  if (model.contains("sgns")) c.model.sgns = sgns_config_from_json(model.at("sgns"));
  return c;
}

/// Fixed facts about the protocol, echoed into every report.
inline json protocol_metadata(const ExperimentConfig& c) {
  json m = {{"negatives_per_positive", 1},
            {"negative_sampling", "uniform over non-edges, drawn once per split"},
            {"run_seed_rule", "seed + run_index"},
            {"split_reuse", c.split_file ? "fixed split file" : "fresh split per run"},
            {"score", "inner-product logit; AUC/AP are threshold-free"}};
  if (is_vgae_family(c.model.kind)) {
    m["param_selection"] = "best validation AUC epoch";
    m["encoder_input"] = "training edges plus self-loops";
  } else {
    m["embedding_training_graph"] = "training edges only";
  }
  return m;
}

// ---- reports ----

inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline json to_json(const ExperimentResult& r, const ExperimentConfig& c) {
  json runs = json::array();
  for (const auto& run : r.runs) {
    json jr = {{"run", run.run}, {"seed", run.seed}, {"auc", run.auc}, {"ap", run.ap}};
    if (is_vgae_family(c.model.kind)) jr["selected_epoch"] = run.selected_epoch;
    runs.push_back(jr);
  }
  json j = {{"format", "dgp-experiment"},
            {"version", kFormatVersion},
            {"method", std::string(to_string(c.model.kind))},
            {"config", to_json(c)},
            {"metadata", protocol_metadata(c)},
            {"runs", runs}};
  if (r.summary) {
    j["summary"] = {{"runs", r.summary->auc.size()},
                    {"auc_mean", r.summary->auc_summary.mean},
                    {"auc_stderr", r.summary->auc_summary.std_error},
                    {"ap_mean", r.summary->ap_summary.mean},
                    {"ap_stderr", r.summary->ap_summary.std_error},
                    {"single_run_warning", r.summary->single_run}};
  }
  j["status"] = r.ok ? "ok" : "failed";
  if (!r.ok) j["error"] = r.error;
  return j;
}

/// CSV with columns method,run,auc,ap. The effective config is embedded as
/// a '# config: ' comment line; the summary is two rows whose run column is
/// "mean" and "stderr".
inline void write_csv(std::ostream& out, const ExperimentResult& r, const ExperimentConfig& c) {
  const std::string method(to_string(c.model.kind));
  out << "# config: " << to_json(c).dump() << '\n';
  out << "# metadata: " << protocol_metadata(c).dump() << '\n';
  out << "method,run,auc,ap\n";
  for (const auto& run : r.runs)
    out << method << ',' << run.run << ',' << format_double(run.auc) << ',' << format_double(run.ap) << '\n';
  if (r.summary) {
    out << method << ",mean," << format_double(r.summary->auc_summary.mean) << ','
        << format_double(r.summary->ap_summary.mean) << '\n';
    out << method << ",stderr," << format_double(r.summary->auc_summary.std_error) << ','
        << format_double(r.summary->ap_summary.std_error) << '\n';
  }
  if (!r.ok) out << "# status: failed: " << r.error << '\n';
}

/// Recovers the experiment config from a previous JSON or CSV report.
inline ExperimentConfig config_from_report(std::istream& in) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    std::istringstream js(text);
    const json j = parse_json(js);
    if (!j.contains("config")) throw Error(ErrorCode::BadFormat, "report has no config block");
    return experiment_config_from_json(j.at("config"));
  }
  std::istringstream lines(text);
  std::string line;
  constexpr std::string_view prefix = "# config: ";
  while (std::getline(lines, line)) {
    if (line.starts_with(prefix)) {
      std::istringstream js(line.substr(prefix.size()));
      return experiment_config_from_json(parse_json(js));
    }
  }
  throw Error(ErrorCode::BadFormat, "report has no config line");
}

}  // namespace dgp
