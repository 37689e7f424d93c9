// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/model_io.hpp"

#include <cmath>

#include <json.hpp>

#include "cohortsel/error.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

using json = nlohmann::json;

namespace {

constexpr std::string_view kChecksumPrefix = "fnv1a64:";

std::string checksum_of(const json& body) { return std::string(kChecksumPrefix) + to_hex(fnv1a64(body.dump())); }

json linear_to_json(const LinearModel& m) {
  json j{{"weights", m.weights}, {"bias", m.bias}, {"calibration", nullptr}};
  if (m.calibration) j["calibration"] = {{"a", m.calibration->a}, {"b", m.calibration->b}};
  return j;
}

json gbdt_to_json(const GbdtModel& m) {
  json trees = json::array();
  for (const auto& t : m.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value, n.samples});
    trees.push_back(std::move(nodes));
  }
  return {{"initial_score", m.initial_score},
          {"shrinkage", m.shrinkage},
          {"max_depth", m.max_depth},
          {"trees", std::move(trees)}};
}

json doc_clf_to_json(const DocClfModel& m) {
  json rows = json::array();
  for (const auto& [bucket, r] : m.trained_rows()) rows.push_back({{"bucket", bucket}, {"values", r}});
  return {{"dim", m.dim()},
          {"bucket_count", m.bucket_count()},
          {"n_classes", m.n_classes()},
          {"seed", m.seed()},
          {"rows", std::move(rows)},
          {"output", m.output()}};
}

std::vector<double> finite_array(const json& j, const std::string& what) {
  auto v = j.get<std::vector<double>>();
  for (double x : v) {
    if (!std::isfinite(x)) throw Error("model file: non-finite value in " + what);
  }
  return v;
}

LinearModel linear_from_json(const json& j, LinearKind kind, std::size_t n_features, const std::string& where) {
  LinearModel m;
  m.kind = kind;
  m.weights = finite_array(j.at("weights"), where);
  if (m.weights.size() != n_features) throw Error("model file: " + where + " weight count does not match features");
  m.bias = j.at("bias").get<double>();
  if (!j.at("calibration").is_null()) {
    m.calibration = PlattParams{j.at("calibration").at("a").get<double>(), j.at("calibration").at("b").get<double>()};
  }
  return m;
}

GbdtModel gbdt_from_json(const json& j, std::size_t n_features, const std::string& where) {
  GbdtModel m;
  m.initial_score = j.at("initial_score").get<double>();
  m.shrinkage = j.at("shrinkage").get<double>();
  m.max_depth = j.at("max_depth").get<int>();
  for (const auto& t : j.at("trees")) {
    RegressionTree tree;
    for (const auto& n : t) {
      if (!n.is_array() || n.size() != 6) throw Error("model file: malformed tree node in " + where);
      TreeNode node;
      node.feature = n[0].get<int>();
      node.threshold = n[1].get<double>();
      node.left = n[2].get<int>();
      node.right = n[3].get<int>();
      node.value = n[4].get<double>();
      node.samples = n[5].get<std::size_t>();
      tree.nodes.push_back(node);
    }
    const auto size = static_cast<int>(tree.nodes.size());
    if (size == 0) throw Error("model file: empty tree in " + where);
    for (int i = 0; i < size; ++i) {
      const auto& node = tree.nodes[static_cast<std::size_t>(i)];
      if (node.is_leaf()) continue;
      // Children always follow their parent, which also rules out cycles.
      if (static_cast<std::size_t>(node.feature) >= n_features || node.left <= i || node.right <= i ||
          node.left >= size || node.right >= size) {
        throw Error("model file: invalid tree structure in " + where);
      }
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

DocClfModel doc_clf_from_json(const json& j) {
  std::map<std::uint32_t, std::vector<double>> rows;
  for (const auto& r : j.at("rows")) rows.emplace(r.at("bucket").get<std::uint32_t>(), finite_array(r.at("values"), "doc classifier"));
  return DocClfModel::restore(j.at("dim").get<std::size_t>(), j.at("bucket_count").get<std::size_t>(),
                              j.at("n_classes").get<std::size_t>(), j.at("seed").get<std::uint64_t>(),
                              std::move(rows), finite_array(j.at("output"), "doc classifier"));
}

json tfidf_to_json(const TfidfModel& t) {
  return {{"vocabulary", t.vocabulary}, {"df", t.df}, {"n_docs", t.n_docs}};
}

}  // namespace

std::string serialize_model(const PipelineConfig& config, const EnsembleModel& model) {
  PipelineConfig snapshot = config;
  snapshot.paths = {};
  json labels = json::array();
  for (const auto& lm : model.labels) {
    json l{{"label", lm.label()},
           {"features", lm.space.names()},
           {"logreg", linear_to_json(lm.logreg)},
           {"svm", linear_to_json(lm.svm)},
           {"gbdt", gbdt_to_json(lm.gbdt)},
           {"weights", lm.weights},
           {"doc_classifier", nullptr},
           {"constant_proba", nullptr}};
    if (lm.doc_clf) l["doc_classifier"] = doc_clf_to_json(*lm.doc_clf);
    if (lm.constant_proba) l["constant_proba"] = *lm.constant_proba;
    labels.push_back(std::move(l));
  }
  json body{{"format_version", kModelFormatVersion},
            {"config", config_to_json(snapshot, true)},
            {"tfidf", tfidf_to_json(model.tfidf)},
            {"labels", std::move(labels)}};
  const auto sum = checksum_of(body);
  body["checksum"] = sum;
  return body.dump() + "\n";
}

ModelFile parse_model(std::string_view text) {
  json body;
  try {
    body = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("model file: malformed JSON: ") + e.what());
  }
  if (!body.is_object() || !body.contains("checksum") || !body["checksum"].is_string()) {
    throw Error("model file: missing checksum");
  }
  const auto stored = body["checksum"].get<std::string>();
  body.erase("checksum");
  if (stored != checksum_of(body)) throw Error("model file: checksum mismatch (file is corrupted or was edited)");
  if (!body.contains("format_version") || !body["format_version"].is_number_integer() ||
      body["format_version"].get<int>() != kModelFormatVersion) {
    throw Error("model file: unsupported format_version (expected " + std::to_string(kModelFormatVersion) + ")");
  }

  ModelFile out;
  try {
    out.config = parse_config(body.at("config"), std::filesystem::path("."));
    auto& m = out.model;
    m.schema = out.config.schema;
    const auto& t = body.at("tfidf");
    m.tfidf.vocabulary = t.at("vocabulary").get<std::vector<std::string>>();
    m.tfidf.df = t.at("df").get<std::vector<std::size_t>>();
    m.tfidf.n_docs = t.at("n_docs").get<std::size_t>();
    if (m.tfidf.df.size() != m.tfidf.vocabulary.size()) throw Error("model file: tfidf df/vocabulary size mismatch");
    m.tfidf.reindex();

    const auto& labels = body.at("labels");
    if (labels.size() != m.schema.size()) throw Error("model file: label count does not match the schema");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto& l = labels[i];
      const std::string where = "labels[" + std::to_string(i) + "]";
      LabelModel lm;
      lm.config = out.config.labels[i];
      if (l.at("label").get<std::string>() != lm.config.label) throw Error("model file: " + where + " label mismatch");
      lm.space = FeatureSpace::from_names(l.at("features").get<std::vector<std::string>>());
      lm.logreg = linear_from_json(l.at("logreg"), LinearKind::logreg, lm.space.size(), where + ".logreg");
      lm.svm = linear_from_json(l.at("svm"), LinearKind::svm, lm.space.size(), where + ".svm");
      lm.gbdt = gbdt_from_json(l.at("gbdt"), lm.space.size(), where + ".gbdt");
      const auto w = l.at("weights").get<std::vector<double>>();
      if (w.size() != 3) throw Error("model file: " + where + ".weights must have 3 entries");
      lm.weights = {w[0], w[1], w[2]};
      validate_component_weights(lm.weights, "model file: " + where + ".weights");
      if (!l.at("doc_classifier").is_null()) lm.doc_clf = doc_clf_from_json(l.at("doc_classifier"));
      if (!l.at("constant_proba").is_null()) lm.constant_proba = l.at("constant_proba").get<double>();
      m.labels.push_back(std::move(lm));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("model file: ") + e.what());
  }
  return out;
}

void save_model(const std::filesystem::path& path, const PipelineConfig& config, const EnsembleModel& model) {
  write_file_atomic(path, serialize_model(config, model));
}

ModelFile load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

}  // namespace cohortsel
