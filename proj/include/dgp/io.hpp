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

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgp/baselines.hpp"
#include "dgp/dense.hpp"
#include "dgp/error.hpp"
#include "dgp/split.hpp"
#include "dgp/vgae.hpp"

namespace dgp {

using json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

namespace detail {

template <typename T>
T get_or_throw(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::BadFormat, std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, std::string("field '") + key + "': " + e.what());
  }
}

inline void expect_format(const json& j, const char* format) {
  if (!j.is_object() || j.value("format", std::string{}) != format)
    throw Error(ErrorCode::BadFormat, std::string("expected a '") + format + "' document");
  if (j.value("version", 0) != kFormatVersion)
    throw Error(ErrorCode::BadFormat, "unsupported version");
}

inline json edges_to_json(const std::vector<Edge>& edges) {
  json arr = json::array();
  for (const Edge& e : edges) arr.push_back({e.u, e.v});
  return arr;
}

inline std::vector<Edge> edges_from_json(const json& arr, std::size_t num_nodes) {
  std::vector<Edge> out;
  if (!arr.is_array()) throw Error(ErrorCode::BadFormat, "edge list must be an array");
  for (const auto& pair : arr) {
    if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::BadFormat, "edge must be a [u, v] pair");
    const auto u = pair[0].get<NodeId>();
    const auto v = pair[1].get<NodeId>();
    if (u >= num_nodes || v >= num_nodes) throw Error(ErrorCode::BadFormat, "edge endpoint out of range");
    out.push_back(Edge::make(u, v));
  }
  return out;
}

}  // namespace detail

inline json to_json(const DenseMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.values().begin(), m.values().end())}};
}

inline DenseMatrix matrix_from_json(const json& j) {
  const auto rows = detail::get_or_throw<std::size_t>(j, "rows");
  const auto cols = detail::get_or_throw<std::size_t>(j, "cols");
  const auto data = detail::get_or_throw<std::vector<double>>(j, "data");
  if (data.size() != rows * cols) throw Error(ErrorCode::BadFormat, "matrix data length != rows * cols");
  DenseMatrix m(rows, cols);
  std::copy(data.begin(), data.end(), m.values().begin());
  check_finite(m, "matrix");
  return m;
}

// ---- edge split ----

inline json to_json(const EdgeSplit& s) {
  return {{"format", "dgp-edge-split"},
          {"version", kFormatVersion},
          {"policy", std::string(to_string(s.policy))},
          {"seed", s.seed},
          {"ratios", {s.ratios.train, s.ratios.val, s.ratios.test}},
          {"negatives_per_positive", 1},
          {"num_nodes", s.num_nodes},
          {"train", detail::edges_to_json(s.train_edges)},
          {"val_pos", detail::edges_to_json(s.val_pos)},
          {"val_neg", detail::edges_to_json(s.val_neg)},
          {"test_pos", detail::edges_to_json(s.test_pos)},
          {"test_neg", detail::edges_to_json(s.test_neg)}};
}

inline SplitPolicy policy_from_string(const std::string& s) {
  if (s == "general") return SplitPolicy::General;
  if (s == "bipartite") return SplitPolicy::Bipartite;
  throw Error(ErrorCode::InvalidParams, "unknown split policy '" + s + "'");
}

inline EdgeSplit split_from_json(const json& j) {
  detail::expect_format(j, "dgp-edge-split");
  EdgeSplit s;
  s.policy = policy_from_string(detail::get_or_throw<std::string>(j, "policy"));
  s.seed = detail::get_or_throw<std::uint64_t>(j, "seed");
  const auto r = detail::get_or_throw<std::vector<double>>(j, "ratios");
  if (r.size() != 3) throw Error(ErrorCode::BadFormat, "ratios must have three entries");
  s.ratios = {r[0], r[1], r[2]};
  s.num_nodes = detail::get_or_throw<std::size_t>(j, "num_nodes");
  s.train_edges = detail::edges_from_json(j.at("train"), s.num_nodes);
  s.val_pos = detail::edges_from_json(j.at("val_pos"), s.num_nodes);
  s.val_neg = detail::edges_from_json(j.at("val_neg"), s.num_nodes);
  s.test_pos = detail::edges_from_json(j.at("test_pos"), s.num_nodes);
  s.test_neg = detail::edges_from_json(j.at("test_neg"), s.num_nodes);
  return s;
}

// ---- configs ----

inline json to_json(const VgaeConfig& c) {
  json j = {{"hidden_dim", c.hidden_dim},
            {"latent_dim", c.latent_dim},
            {"keep_prob", c.keep_prob},
            {"step_size", c.adam.step_size},
            {"beta1", c.adam.beta1},
            {"beta2", c.adam.beta2},
            {"adam_epsilon", c.adam.epsilon},
            {"epochs", c.epochs},
            {"kl_weight", c.kl_weight ? json(*c.kl_weight) : json("1/N")},
            {"pos_weight", c.pos_weight.automatic ? json("auto") : json(c.pos_weight.value)},
            {"seed", c.seed}};
  return j;
}

inline VgaeConfig vgae_config_from_json(const json& j) {
  VgaeConfig c;
  c.hidden_dim = detail::get_or_throw<std::size_t>(j, "hidden_dim");
  c.latent_dim = detail::get_or_throw<std::size_t>(j, "latent_dim");
  c.keep_prob = detail::get_or_throw<double>(j, "keep_prob");
  c.adam.step_size = detail::get_or_throw<double>(j, "step_size");
  c.adam.beta1 = detail::get_or_throw<double>(j, "beta1");
  c.adam.beta2 = detail::get_or_throw<double>(j, "beta2");
  c.adam.epsilon = detail::get_or_throw<double>(j, "adam_epsilon");
  c.epochs = detail::get_or_throw<std::size_t>(j, "epochs");
  const json& kl = j.at("kl_weight");
  if (kl.is_number()) c.kl_weight = kl.get<double>();
  const json& pw = j.at("pos_weight");
  if (pw.is_number()) c.pos_weight = PosWeight::fixed(pw.get<double>());
  c.seed = detail::get_or_throw<std::uint64_t>(j, "seed");
  return c;
}

inline json to_json(const WalkConfig& c) {
  return {{"num_walks", c.num_walks}, {"walk_length", c.walk_length}, {"window", c.window},
          {"p", c.p},                 {"q", c.q},                     {"seed", c.seed}};
}

inline WalkConfig walk_config_from_json(const json& j) {
  WalkConfig c;
  c.num_walks = detail::get_or_throw<std::size_t>(j, "num_walks");
  c.walk_length = detail::get_or_throw<std::size_t>(j, "walk_length");
  c.window = detail::get_or_throw<std::size_t>(j, "window");
  c.p = detail::get_or_throw<double>(j, "p");
  c.q = detail::get_or_throw<double>(j, "q");
  c.seed = detail::get_or_throw<std::uint64_t>(j, "seed");
  return c;
}

inline json to_json(const SgnsConfig& c) {
  return {{"dim", c.dim},           {"negatives", c.negatives}, {"epochs", c.epochs},
          {"step_size", c.step_size}, {"window", c.window},       {"seed", c.seed}};
}

inline SgnsConfig sgns_config_from_json(const json& j) {
  SgnsConfig c;
  c.dim = detail::get_or_throw<std::size_t>(j, "dim");
  c.negatives = detail::get_or_throw<std::size_t>(j, "negatives");
  c.epochs = detail::get_or_throw<std::size_t>(j, "epochs");
  c.step_size = detail::get_or_throw<double>(j, "step_size");
  c.window = detail::get_or_throw<std::size_t>(j, "window");
  c.seed = detail::get_or_throw<std::uint64_t>(j, "seed");
  return c;
}

// ---- trained models ----

/// A trained model as stored on disk: either VGAE encoder weights or a
/// baseline embedding table, plus the node labels it was trained on.
struct ModelFile {
  enum class Kind { Vgae, Embeddings };

  Kind kind = Kind::Vgae;
  std::vector<std::string> labels;
  VgaeConfig vgae_config;
  VgaeParams params;
  Embeddings embeddings;
  json provenance = json::object();
};

inline json to_json(const ModelFile& m) {
  json j = {{"format", "dgp-model"},
            {"version", kFormatVersion},
            {"kind", m.kind == ModelFile::Kind::Vgae ? "vgae" : "embeddings"},
            {"labels", m.labels}};
  if (m.kind == ModelFile::Kind::Vgae) {
    j["config"] = to_json(m.vgae_config);
    j["w0"] = to_json(m.params.w0);
    j["w1_mu"] = to_json(m.params.w1_mu);
    j["w1_sigma"] = to_json(m.params.w1_sigma);
  } else {
    j["table"] = to_json(m.embeddings.table);
  }
  j["provenance"] = m.provenance;
  return j;
}

inline ModelFile model_from_json(const json& j) {
  detail::expect_format(j, "dgp-model");
  ModelFile m;
  const auto kind = detail::get_or_throw<std::string>(j, "kind");
  m.labels = detail::get_or_throw<std::vector<std::string>>(j, "labels");
  if (kind == "vgae") {
    m.kind = ModelFile::Kind::Vgae;
    m.vgae_config = vgae_config_from_json(j.at("config"));
    m.params.w0 = matrix_from_json(j.at("w0"));
    m.params.w1_mu = matrix_from_json(j.at("w1_mu"));
    m.params.w1_sigma = matrix_from_json(j.at("w1_sigma"));
    if (m.params.w0.rows() != m.labels.size()) throw Error(ErrorCode::BadFormat, "w0 rows != label count");
  } else if (kind == "embeddings") {
    m.kind = ModelFile::Kind::Embeddings;
    m.embeddings.table = matrix_from_json(j.at("table"));
    if (m.embeddings.table.rows() != m.labels.size()) throw Error(ErrorCode::BadFormat, "table rows != label count");
  } else {
    throw Error(ErrorCode::BadFormat, "unknown model kind '" + kind + "'");
  }
  if (j.contains("provenance")) m.provenance = j.at("provenance");
  return m;
}

inline json parse_json(std::istream& in) {
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadFormat, e.what());
  }
}

/// Plain-text embedding table: "N d" header, then one row of d values per node.
inline void write_embeddings(std::ostream& out, const Embeddings& emb) {
  out << emb.table.rows() << ' ' << emb.table.cols() << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < emb.table.rows(); ++i) {
    const auto r = emb.table.row(i);
    for (std::size_t k = 0; k < r.size(); ++k) out << (k ? " " : "") << r[k];
    out << '\n';
  }
}

inline Embeddings read_embeddings(std::istream& in) {
  std::size_t n = 0, d = 0;
  if (!(in >> n >> d)) throw Error(ErrorCode::BadFormat, "embedding header");
  Embeddings emb{DenseMatrix(n, d)};
  for (double& v : emb.table.values())
    if (!(in >> v)) throw Error(ErrorCode::BadFormat, "embedding row truncated");
  return emb;
}

}  // namespace dgp
