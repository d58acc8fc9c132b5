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

// dgp: batch command line for splitting, training, evaluating and ranking.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dgp/experiment.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(dgp::ErrorCode code) {
  if (dgp::is_numerical(code)) return kExitNumerical;
  if (code == dgp::ErrorCode::InvalidParams || code == dgp::ErrorCode::InvalidKeepProb) return kExitUsage;
  return kExitData;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw dgp::Error(dgp::ErrorCode::InvalidParams, "not a number: '" + item + "'");
    }
  }
  return out;
}

dgp::SplitRatios parse_ratios(const std::string& text) {
  const auto r = parse_number_list(text);
  if (r.size() != 3) throw dgp::Error(dgp::ErrorCode::InvalidParams, "--ratios needs train,val,test");
  return {r[0], r[1], r[2]};
}

/// "n_disease,n_gene,blocks,p_in,p_out[,seed]"
dgp::SbmParams parse_synthetic(const std::string& text, std::uint64_t default_seed) {
  const auto v = parse_number_list(text);
  if (v.size() != 5 && v.size() != 6)
    throw dgp::Error(dgp::ErrorCode::InvalidParams, "--synthetic needs n_disease,n_gene,blocks,p_in,p_out[,seed]");
  dgp::SbmParams p;
  p.n_disease = static_cast<std::size_t>(v[0]);
  p.n_gene = static_cast<std::size_t>(v[1]);
  p.blocks = static_cast<std::size_t>(v[2]);
  p.p_in = v[3];
  p.p_out = v[4];
  p.seed = v.size() == 6 ? static_cast<std::uint64_t>(v[5]) : default_seed;
  return p;
}

/// Raw flag values; turned into library configs after parsing.
struct Options {
  std::string data;
  bool swap_columns = false;
  bool untyped = false;
  std::string synthetic;
  std::string policy;
  std::string ratios = "0.8,0.1,0.1";
  std::uint64_t seed = 0;
  std::string split_file;
  std::string model = "vgae";
  std::size_t runs = 10;
  dgp::VgaeConfig vgae{};
  std::optional<double> kl_weight;
  std::optional<double> pos_weight;
  dgp::WalkConfig walk{};
  dgp::SgnsConfig sgns{};
  std::string out;
  std::string format = "json";
  std::string from_config;
  std::string model_file;
  std::string disease;
};

void add_data_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.data, "Disease-gene edge list (TSV/CSV, '#' comments)");
  cmd->add_flag("--swap-columns", o.swap_columns, "Read the first column as genes and the last as diseases");
  cmd->add_flag("--untyped", o.untyped, "Treat every node as untyped (homogeneous graph)");
  cmd->add_option("--synthetic", o.synthetic, "Planted bipartite SBM: n_disease,n_gene,blocks,p_in,p_out[,seed]");
  cmd->add_option("--policy", o.policy, "Split policy")->check(CLI::IsMember({"general", "bipartite"}));
  cmd->add_option("--ratios", o.ratios, "Train,val,test fractions")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Base seed")->capture_default_str();
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "Model")
      ->check(CLI::IsMember({"vgae", "cvgae", "deepwalk", "node2vec"}))
      ->capture_default_str();
  cmd->add_option("--split", o.split_file, "Reuse a split file written by 'dgp split'");
  cmd->add_option("--epochs", o.vgae.epochs, "VGAE training epochs")->capture_default_str();
  cmd->add_option("--hidden", o.vgae.hidden_dim, "VGAE hidden units")->capture_default_str();
  cmd->add_option("--latent", o.vgae.latent_dim, "VGAE latent dimension")->capture_default_str();
  cmd->add_option("--keep-prob", o.vgae.keep_prob, "Dropout keep probability")->capture_default_str();
  cmd->add_option("--lr", o.vgae.adam.step_size, "Adam step size")->capture_default_str();
  cmd->add_option("--kl-weight", o.kl_weight, "KL weight (default 1/N)");
  cmd->add_option("--pos-weight", o.pos_weight, "Fixed positive-class BCE weight (default: auto)");
  cmd->add_option("--dim", o.sgns.dim, "Baseline embedding dimension")->capture_default_str();
  cmd->add_option("--walks", o.walk.num_walks, "Walks per node")->capture_default_str();
  cmd->add_option("--walk-length", o.walk.walk_length, "Nodes per walk")->capture_default_str();
  cmd->add_option("--window", o.walk.window, "Skip-gram window")->capture_default_str();
  cmd->add_option("--p", o.walk.p, "node2vec return parameter")->capture_default_str();
  cmd->add_option("--q", o.walk.q, "node2vec in-out parameter")->capture_default_str();
  cmd->add_option("--negatives", o.sgns.negatives, "SGNS negatives per positive")->capture_default_str();
  cmd->add_option("--sgns-epochs", o.sgns.epochs, "SGNS passes over the corpus")->capture_default_str();
  cmd->add_option("--sgns-lr", o.sgns.step_size, "SGNS initial step size")->capture_default_str();
}

dgp::ExperimentConfig build_config(const Options& o) {
  dgp::ExperimentConfig c;
  if (!o.synthetic.empty()) c.data.synthetic = parse_synthetic(o.synthetic, o.seed);
  else if (!o.data.empty()) c.data.path = o.data;
  else throw dgp::Error(dgp::ErrorCode::InvalidParams, "one of --data or --synthetic is required");
  c.data.swap_columns = o.swap_columns;
  c.data.untyped = o.untyped;
  c.model.kind = dgp::model_from_string(o.model);
  c.policy = !o.policy.empty() ? dgp::policy_from_string(o.policy)
             : c.model.kind == dgp::ModelKind::Cvgae ? dgp::SplitPolicy::Bipartite
                                                     : dgp::SplitPolicy::General;
  c.ratios = parse_ratios(o.ratios);
  c.seed = o.seed;
  if (!o.split_file.empty()) c.split_file = o.split_file;
  c.runs = o.runs;
  c.model.vgae = o.vgae;
  c.model.vgae.kl_weight = o.kl_weight;
  if (o.pos_weight) c.model.vgae.pos_weight = dgp::PosWeight::fixed(*o.pos_weight);
  c.model.walk = o.walk;
  c.model.sgns = o.sgns;
  c.model.sgns.window = o.walk.window;
  if (c.model.kind == dgp::ModelKind::DeepWalk) c.model.walk.p = c.model.walk.q = 1.0;
  if (dgp::is_vgae_family(c.model.kind)) dgp::validate(c.model.vgae);
  else dgp::validate(c.model.walk);
  if (c.runs < 1) throw dgp::Error(dgp::ErrorCode::InvalidParams, "--runs must be >= 1");
  return c;
}

/// Writes to `path`, or stdout when empty.
template <typename Fn>
void with_output(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dgp::Error(dgp::ErrorCode::EmptyInput, "cannot write '" + path + "'");
  write(out);
}

int cmd_split(const Options& o) {
  const dgp::ExperimentConfig c = build_config(o);
  const dgp::ParsedGraph data = dgp::load_dataset(c.data);
  const dgp::EdgeSplit s = dgp::split_edges(data.graph, c.ratios, c.policy, c.seed);
  with_output(o.out, [&](std::ostream& out) { out << dgp::to_json(s).dump(1) << '\n'; });
  std::cerr << "nodes=" << data.graph.num_nodes() << " diseases=" << data.graph.count_kind(dgp::NodeKind::Disease)
            << " genes=" << data.graph.count_kind(dgp::NodeKind::Gene) << " edges=" << data.graph.num_edges()
            << " train=" << s.train_edges.size() << " val=" << s.val_pos.size() << '+' << s.val_neg.size()
            << " test=" << s.test_pos.size() << '+' << s.test_neg.size() << '\n';
  return 0;
}

int cmd_experiment(const Options& o) {
  dgp::ExperimentConfig c;
  if (!o.from_config.empty()) {
    std::ifstream in(o.from_config);
    if (!in) throw dgp::Error(dgp::ErrorCode::EmptyInput, "cannot open '" + o.from_config + "'");
    c = dgp::config_from_report(in);
  } else {
    c = build_config(o);
  }
  const auto res = dgp::run_experiment(c, [&](const dgp::RunResult& r) {
    std::cerr << to_string(c.model.kind) << " run " << r.run << " seed " << r.seed << ": auc "
              << dgp::format_double(r.auc) << " ap " << dgp::format_double(r.ap) << '\n';
  });
  with_output(o.out, [&](std::ostream& out) {
    if (o.format == "csv") dgp::write_csv(out, res, c);
    else out << dgp::to_json(res, c).dump(1) << '\n';
  });
  if (res.summary)
    std::cerr << "summary: auc " << res.summary->auc_summary.mean << " +- " << res.summary->auc_summary.std_error
              << ", ap " << res.summary->ap_summary.mean << " +- " << res.summary->ap_summary.std_error
              << (res.summary->single_run ? " (single run: stderr not estimated)" : "") << '\n';
  if (!res.ok) {
    std::cerr << "error: " << res.error << '\n';
    return exit_code_for(*res.error_code);
  }
  return 0;
}

int cmd_train(const Options& o) {
  const dgp::ExperimentConfig c = build_config(o);
  const dgp::ParsedGraph data = dgp::load_dataset(c.data);
  const dgp::EdgeSplit split = c.split_file ? dgp::load_split_file(*c.split_file, data.graph)
                                            : dgp::split_edges(data.graph, c.ratios, c.policy, c.seed);
  const dgp::ModelSettings m = dgp::seeded_settings(c.model, c.seed);
  dgp::ModelFile mf;
  mf.labels = data.ids.labels();
  mf.provenance = {{"config", dgp::to_json(c)}, {"metadata", dgp::protocol_metadata(c)}};
  if (dgp::is_vgae_family(m.kind)) {
    const auto objective = m.kind == dgp::ModelKind::Vgae ? dgp::Objective::Vgae : dgp::Objective::Cvgae;
    const dgp::TrainResult tr = dgp::train(data.graph, split, m.vgae, objective);
    mf.kind = dgp::ModelFile::Kind::Vgae;
    mf.vgae_config = m.vgae;
    mf.params = tr.params;
    mf.provenance["selected_epoch"] = tr.selected_epoch;
    if (!tr.history.empty()) mf.provenance["final_loss"] = tr.history.back().loss.total;
  } else {
    mf.kind = dgp::ModelFile::Kind::Embeddings;
    mf.embeddings = dgp::train_walk_embeddings(data.graph, split, m);
  }
  if (o.out.empty()) throw dgp::Error(dgp::ErrorCode::InvalidParams, "--out is required for train");
  with_output(o.out, [&](std::ostream& out) { out << dgp::to_json(mf).dump() << '\n'; });
  return 0;
}

int cmd_predict(const Options& o) {
  if (o.model_file.empty() || o.disease.empty())
    throw dgp::Error(dgp::ErrorCode::InvalidParams, "predict needs --model-file and --disease");
  std::ifstream in(o.model_file);
  if (!in) throw dgp::Error(dgp::ErrorCode::EmptyInput, "cannot open model file '" + o.model_file + "'");
  const dgp::ModelFile mf = dgp::model_from_json(dgp::parse_json(in));

  dgp::DataSource src;
  if (!o.synthetic.empty()) src.synthetic = parse_synthetic(o.synthetic, o.seed);
  else if (!o.data.empty()) src.path = o.data;
  else throw dgp::Error(dgp::ErrorCode::InvalidParams, "one of --data or --synthetic is required");
  src.swap_columns = o.swap_columns;
  const dgp::ParsedGraph data = dgp::load_dataset(src);
  if (data.ids.labels() != mf.labels) throw dgp::Error(dgp::ErrorCode::BadFormat, "model was trained on different nodes");

  const dgp::NodeId disease = data.ids.at(o.disease);
  if (data.graph.kind(disease) != dgp::NodeKind::Disease)
    throw dgp::Error(dgp::ErrorCode::UnknownLabel, "'" + o.disease + "' is not a disease");

  dgp::DenseMatrix z;
  if (mf.kind == dgp::ModelFile::Kind::Vgae) {
    const auto norm = dgp::normalize_symmetric(dgp::add_self_loops(data.graph));
    dgp::Rng unused(0);
    z = dgp::encode(norm, mf.params, mf.vgae_config, unused, false).z;
  } else {
    z = mf.embeddings.table;
  }

  struct Candidate {
    dgp::NodeId gene;
    double logit;
  };
  std::vector<Candidate> ranked;
  for (dgp::NodeId g = 0; g < data.graph.num_nodes(); ++g) {
    if (data.graph.kind(g) != dgp::NodeKind::Gene || data.graph.has_edge(disease, g)) continue;
    ranked.push_back({g, dgp::decode_logit(z, disease, g)});
  }
  std::sort(ranked.begin(), ranked.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.logit != b.logit) return a.logit > b.logit;
    return data.ids.label(a.gene) < data.ids.label(b.gene);
  });
  with_output(o.out, [&](std::ostream& out) {
    out << "# gene\tprobability\n";
    for (const auto& c : ranked) out << data.ids.label(c.gene) << '\t' << dgp::format_double(dgp::sigmoid(c.logit)) << '\n';
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Disease-gene link prediction with (constrained) variational graph auto-encoders"};
  app.require_subcommand(1);
  Options o;

  auto* split = app.add_subcommand("split", "Write a reproducible train/val/test edge split as JSON");
  add_data_flags(split, o);
  split->add_option("--model", o.model, "Model the split is for (picks the default policy)");
  split->add_option("--out", o.out, "Output path (default stdout)");

  auto* experiment = app.add_subcommand("experiment", "Train and evaluate a model over several seeded runs");
  add_data_flags(experiment, o);
  add_model_flags(experiment, o);
  experiment->add_option("--runs", o.runs, "Number of runs")->capture_default_str();
  experiment->add_option("--out", o.out, "Output path (default stdout)");
  experiment->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  experiment->add_option("--from-config", o.from_config, "Re-run the config embedded in a previous report");

  auto* train = app.add_subcommand("train", "Train one model and write it to a model file");
  add_data_flags(train, o);
  add_model_flags(train, o);
  train->add_option("--out", o.out, "Model file path")->required();

  auto* predict = app.add_subcommand("predict", "Rank unlinked genes for one disease");
  predict->add_option("--data", o.data, "Dataset the model was trained on");
  predict->add_flag("--swap-columns", o.swap_columns, "Read the first column as genes");
  predict->add_option("--synthetic", o.synthetic, "Synthetic dataset spec the model was trained on");
  predict->add_option("--seed", o.seed, "Seed for --synthetic without an explicit seed");
  predict->add_option("--model-file", o.model_file, "Model file from 'dgp train'")->required();
  predict->add_option("--disease", o.disease, "Disease label")->required();
  predict->add_option("--out", o.out, "Output TSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*split) return cmd_split(o);
    if (*experiment) return cmd_experiment(o);
    if (*train) return cmd_train(o);
    if (*predict) return cmd_predict(o);
  } catch (const dgp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
