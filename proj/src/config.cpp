// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/config.hpp"

#include <cmath>
#include <set>

#include "cohortsel/error.hpp"
#include "cohortsel/resources.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

using json = nlohmann::json;

namespace {

// Typed field access with dotted paths in error messages.
class Fields {
 public:
  Fields(const json& obj, std::string path, std::set<std::string> allowed) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw Error(where() + ": expected an object");
    for (const auto& [key, value] : obj_.items()) {
      if (!allowed.contains(key)) throw Error(at(key) + ": unknown field");
    }
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "<config>" : path_; }
  bool has(const std::string& key) const { return obj_.contains(key) && !obj_[key].is_null(); }
  const json& raw(const std::string& key) const { return obj_[key]; }

  double number(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const auto& v = obj_[key];
    if (!v.is_number() || !std::isfinite(v.get<double>())) throw Error(at(key) + ": expected a finite number");
    return v.get<double>();
  }
  double non_negative(const std::string& key, double fallback) const {
    const double v = number(key, fallback);
    if (v < 0) throw Error(at(key) + ": must be >= 0");
    return v;
  }
  std::uint64_t integer(const std::string& key, std::uint64_t fallback, std::uint64_t min = 0) const {
    if (!has(key)) return fallback;
    const auto& v = obj_[key];
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw Error(at(key) + ": expected a non-negative integer");
    }
    const auto u = v.get<std::uint64_t>();
    if (u < min) throw Error(at(key) + ": must be >= " + std::to_string(min));
    return u;
  }
  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    if (!obj_[key].is_boolean()) throw Error(at(key) + ": expected true or false");
    return obj_[key].get<bool>();
  }
  std::string string(const std::string& key) const {
    if (!has(key) || !obj_[key].is_string()) throw Error(at(key) + ": expected a string");
    return obj_[key].get<std::string>();
  }
  std::vector<std::string> strings(const std::string& key) const {
    std::vector<std::string> out;
    if (!has(key)) return out;
    if (!obj_[key].is_array()) throw Error(at(key) + ": expected an array of strings");
    for (std::size_t i = 0; i < obj_[key].size(); ++i) {
      if (!obj_[key][i].is_string()) throw Error(at(key) + "[" + std::to_string(i) + "]: expected a string");
      out.push_back(obj_[key][i].get<std::string>());
    }
    return out;
  }
  std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    if (!obj_[key].is_array()) throw Error(at(key) + ": expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < obj_[key].size(); ++i) {
      const auto& v = obj_[key][i];
      if (!v.is_number() || !std::isfinite(v.get<double>())) {
        throw Error(at(key) + "[" + std::to_string(i) + "]: expected a finite number");
      }
      out.push_back(v.get<double>());
    }
    return out;
  }

 private:
  const json& obj_;
  std::string path_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::filesystem::path existing_file(const std::filesystem::path& base, const std::string& p, const std::string& field) {
  auto path = resolve(base, p);
  if (!std::filesystem::is_regular_file(path)) throw Error(field + ": file not found: " + path.string());
  return path;
}

ComponentWeights parse_weights(const Fields& f, const std::string& key, ComponentWeights fallback) {
  if (!f.has(key)) return fallback;
  const auto v = f.numbers(key, {});
  if (v.size() != 3) throw Error(f.at(key) + ": expected [logreg, svm, gbdt]");
  ComponentWeights w{v[0], v[1], v[2]};
  for (double x : w) {
    if (x < 0) throw Error(f.at(key) + ": weights must be >= 0");
  }
  if (w[0] == 0 && w[1] == 0 && w[2] == 0) throw Error(f.at(key) + ": at least one weight must be positive");
  return w;
}

WindowSpec parse_window(const json& j, const std::string& path, const std::filesystem::path& base, bool gazetteer,
                        const std::string& owner) {
  const Fields f(j, path, gazetteer ? std::set<std::string>{"name", "file", "phrases", "window", "weight"}
                                    : std::set<std::string>{"words", "window", "weight"});
  WindowSpec w;
  if (gazetteer) {
    w.name = f.string("name");
    if (f.has("phrases")) {
      w.phrases = f.strings("phrases");
      if (f.has("file")) w.source = f.string("file");
    } else {
      const auto file = existing_file(base, f.string("file"), f.at("file"));
      w.phrases = load_phrase_list(file);
      w.source = file.string();
    }
    if (w.name.empty() || w.name.find(':') != std::string::npos) throw Error(f.at("name") + ": must be non-empty without ':'");
  } else {
    w.name = owner;
    w.phrases = f.strings("words");
    if (w.phrases.empty()) throw Error(f.at("words") + ": at least one trigger word is required");
  }
  const auto window = f.integer("window", 5, 1);
  if (window > 1000) throw Error(f.at("window") + ": must be <= 1000");
  w.window = static_cast<int>(window);
  w.weight = f.number("weight", 2.0);
  return w;
}

LabelConfig parse_label(const json& j, const std::string& path, const std::filesystem::path& base) {
  const Fields f(j, path,
                 {"name", "tfidf_weight", "kw_weight", "gazetteers", "triggers", "imports", "use_doc_clf",
                  "component_weights"});
  LabelConfig c;
  c.label = f.string("name");
  c.tfidf_weight = f.non_negative("tfidf_weight", 1.0);
  c.kw_weight = f.non_negative("kw_weight", 1.0);
  for (const auto* key : {"gazetteers", "triggers"}) {
    if (!f.has(key)) continue;
    if (!f.raw(key).is_array()) throw Error(f.at(key) + ": expected an array");
    for (std::size_t i = 0; i < f.raw(key).size(); ++i) {
      const bool gaz = std::string(key) == "gazetteers";
      auto spec = parse_window(f.raw(key)[i], f.at(key) + "[" + std::to_string(i) + "]", base, gaz, c.label);
      (gaz ? c.gazetteers : c.triggers).push_back(std::move(spec));
    }
  }
  c.imports = f.strings("imports");
  c.use_doc_clf = f.boolean("use_doc_clf", true);
  if (f.has("component_weights")) c.component_weights = parse_weights(f, "component_weights", {1, 1, 1});
  return c;
}

json window_to_json(const WindowSpec& w, bool gazetteer, bool inline_resources) {
  json j{{"window", w.window}, {"weight", w.weight}};
  if (gazetteer) {
    j["name"] = w.name;
    if (inline_resources || w.source.empty()) {
      j["phrases"] = w.phrases;
      if (!w.source.empty()) j["file"] = w.source;
    } else {
      j["file"] = w.source;
    }
  } else {
    j["words"] = w.phrases;
  }
  return j;
}

}  // namespace

PipelineConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  const Fields root(doc, "",
                    {"seed", "labels", "paths", "lexicon", "component_weights", "tfidf", "doc_classifier", "logreg",
                     "svm", "gbdt", "tuner"});
  PipelineConfig cfg;
  if (!root.has("seed")) throw Error("seed: required (no implicit randomness)");
  cfg.seed = root.integer("seed", 0);

  if (!root.has("labels") || !root.raw("labels").is_array() || root.raw("labels").empty()) {
    throw Error("labels: expected a non-empty array");
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < root.raw("labels").size(); ++i) {
    cfg.labels.push_back(parse_label(root.raw("labels")[i], "labels[" + std::to_string(i) + "]", base_dir));
    names.push_back(cfg.labels.back().label);
  }
  cfg.schema = LabelSchema(names);
  validate_label_configs(cfg.labels, cfg.schema);

  if (root.has("paths")) {
    const Fields p(root.raw("paths"), "paths", {"corpus", "annotations", "gold", "model"});
    if (p.has("corpus")) cfg.paths.corpus = existing_file(base_dir, p.string("corpus"), p.at("corpus"));
    if (p.has("annotations")) {
      cfg.paths.annotations = existing_file(base_dir, p.string("annotations"), p.at("annotations"));
    }
    if (p.has("gold")) cfg.paths.gold = existing_file(base_dir, p.string("gold"), p.at("gold"));
    if (p.has("model")) cfg.paths.model = resolve(base_dir, p.string("model"));
  }

  if (root.has("lexicon")) {
    const Fields lx(root.raw("lexicon"), "lexicon", {"problem", "treatment", "test"});
    Lexicon lex;
    for (const char* tag : {"problem", "treatment", "test"}) {
      if (!lx.has(tag)) continue;
      const auto nt = *parse_ner_tag(tag);
      if (lx.raw(tag).is_array()) {
        for (auto& phrase : lx.strings(tag)) lex.emplace(std::move(phrase), nt);
      } else {
        for (auto& phrase : load_phrase_list(existing_file(base_dir, lx.string(tag), lx.at(tag)))) {
          lex.emplace(std::move(phrase), nt);
        }
      }
    }
    cfg.lexicon = std::move(lex);
  }

  cfg.component_weights = parse_weights(root, "component_weights", {1.0, 1.0, 1.0});

  if (root.has("tfidf")) {
    const Fields t(root.raw("tfidf"), "tfidf", {"min_df"});
    cfg.hp.min_df = t.integer("min_df", 2, 1);
  }
  if (root.has("doc_classifier")) {
    const Fields d(root.raw("doc_classifier"), "doc_classifier", {"dim", "bucket_count", "epochs", "lr0", "folds"});
    cfg.hp.doc_clf.dim = d.integer("dim", 16, 1);
    cfg.hp.doc_clf.bucket_count = d.integer("bucket_count", std::uint64_t{1} << 18, 1);
    if (cfg.hp.doc_clf.bucket_count > (std::uint64_t{1} << 32)) throw Error(d.at("bucket_count") + ": must be <= 2^32");
    cfg.hp.doc_clf.epochs = d.integer("epochs", 5, 1);
    cfg.hp.doc_clf.lr0 = d.non_negative("lr0", 0.1);
    cfg.hp.doc_clf_folds = d.integer("folds", 3);
  }
  if (root.has("logreg")) {
    const Fields l(root.raw("logreg"), "logreg", {"l2", "iters", "lr"});
    cfg.hp.logreg.l2 = l.non_negative("l2", 1e-4);
    cfg.hp.logreg.iters = static_cast<int>(l.integer("iters", 200));
    cfg.hp.logreg.lr = l.non_negative("lr", 0.5);
  }
  if (root.has("svm")) {
    const Fields s(root.raw("svm"), "svm", {"l2", "epochs", "calibration_folds"});
    cfg.hp.svm.l2 = s.number("l2", 1e-4);
    if (!(cfg.hp.svm.l2 > 0)) throw Error(s.at("l2") + ": must be > 0");
    cfg.hp.svm.epochs = static_cast<int>(s.integer("epochs", 20, 1));
    cfg.hp.svm.calibration_folds = s.integer("calibration_folds", 3, 2);
  }
  if (root.has("gbdt")) {
    const Fields g(root.raw("gbdt"), "gbdt", {"rounds", "max_depth", "shrinkage", "min_leaf"});
    cfg.hp.gbdt.rounds = static_cast<int>(g.integer("rounds", 100));
    cfg.hp.gbdt.max_depth = static_cast<int>(g.integer("max_depth", 3, 1));
    cfg.hp.gbdt.shrinkage = g.non_negative("shrinkage", 0.1);
    cfg.hp.gbdt.min_leaf = g.integer("min_leaf", 2, 1);
  }
  if (root.has("tuner")) {
    const Fields t(root.raw("tuner"), "tuner", {"folds", "component_grid", "feature_grid"});
    cfg.folds = t.integer("folds", 5, 2);
    cfg.grid.component_values = t.numbers("component_grid", cfg.grid.component_values);
    cfg.grid.feature_values = t.numbers("feature_grid", cfg.grid.feature_values);
    for (double v : cfg.grid.component_values) {
      if (v < 0) throw Error(t.at("component_grid") + ": values must be >= 0");
    }
    for (double v : cfg.grid.feature_values) {
      if (v < 0) throw Error(t.at("feature_grid") + ": values must be >= 0");
    }
    if (cfg.grid.component_candidates().empty()) throw Error(t.at("component_grid") + ": needs a positive value");
    if (cfg.grid.feature_values.empty()) throw Error(t.at("feature_grid") + ": must not be empty");
  }
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": malformed JSON: " + e.what());
  }
  return parse_config(doc, std::filesystem::absolute(path).parent_path());
}

json config_to_json(const PipelineConfig& cfg, bool inline_resources) {
  json labels = json::array();
  for (const auto& c : cfg.labels) {
    json l{{"name", c.label},
           {"tfidf_weight", c.tfidf_weight},
           {"kw_weight", c.kw_weight},
           {"imports", c.imports},
           {"use_doc_clf", c.use_doc_clf}};
    json gaz = json::array(), trig = json::array();
    for (const auto& g : c.gazetteers) gaz.push_back(window_to_json(g, true, inline_resources));
    for (const auto& t : c.triggers) trig.push_back(window_to_json(t, false, inline_resources));
    l["gazetteers"] = std::move(gaz);
    l["triggers"] = std::move(trig);
    if (c.component_weights) l["component_weights"] = *c.component_weights;
    labels.push_back(std::move(l));
  }
  json j{
      {"seed", cfg.seed},
      {"labels", std::move(labels)},
      {"component_weights", cfg.component_weights},
      {"tfidf", {{"min_df", cfg.hp.min_df}}},
      {"doc_classifier",
       {{"dim", cfg.hp.doc_clf.dim},
        {"bucket_count", cfg.hp.doc_clf.bucket_count},
        {"epochs", cfg.hp.doc_clf.epochs},
        {"lr0", cfg.hp.doc_clf.lr0},
        {"folds", cfg.hp.doc_clf_folds}}},
      {"logreg", {{"l2", cfg.hp.logreg.l2}, {"iters", cfg.hp.logreg.iters}, {"lr", cfg.hp.logreg.lr}}},
      {"svm",
       {{"l2", cfg.hp.svm.l2}, {"epochs", cfg.hp.svm.epochs}, {"calibration_folds", cfg.hp.svm.calibration_folds}}},
      {"gbdt",
       {{"rounds", cfg.hp.gbdt.rounds},
        {"max_depth", cfg.hp.gbdt.max_depth},
        {"shrinkage", cfg.hp.gbdt.shrinkage},
        {"min_leaf", cfg.hp.gbdt.min_leaf}}},
      {"tuner",
       {{"folds", cfg.folds},
        {"component_grid", cfg.grid.component_values},
        {"feature_grid", cfg.grid.feature_values}}},
  };
  json paths = json::object();
  if (cfg.paths.corpus) paths["corpus"] = cfg.paths.corpus->string();
  if (cfg.paths.annotations) paths["annotations"] = cfg.paths.annotations->string();
  if (cfg.paths.gold) paths["gold"] = cfg.paths.gold->string();
  if (cfg.paths.model) paths["model"] = cfg.paths.model->string();
  if (!paths.empty()) j["paths"] = std::move(paths);
  if (cfg.lexicon) {
    json lex{{"problem", json::array()}, {"treatment", json::array()}, {"test", json::array()}};
    for (const auto& [phrase, tag] : *cfg.lexicon) lex[std::string(to_string(tag))].push_back(phrase);
    j["lexicon"] = std::move(lex);
  }
  return j;
}

PipelineConfig default_config() {
  PipelineConfig cfg;
  cfg.schema = default_schema();
  cfg.labels = default_label_configs();
  cfg.lexicon = builtin_lexicon();
  cfg.seed = 42;
  return cfg;
}

}  // namespace cohortsel
