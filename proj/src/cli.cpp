// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cohortsel/config.hpp"
#include "cohortsel/ensemble.hpp"
#include "cohortsel/error.hpp"
#include "cohortsel/evaluation.hpp"
#include "cohortsel/kernels.hpp"
#include "cohortsel/model_io.hpp"
#include "cohortsel/pipeline.hpp"
#include "cohortsel/synthetic.hpp"
#include "cohortsel/tuner.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Options {
  std::string config, corpus, annotations, gold, model, pred, out;
  std::optional<std::uint64_t> seed;
  std::size_t docs = 500;
  std::optional<std::size_t> folds;
  double holdout = 0.0;
};

json confusion_json(const Confusion& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn},
          {"precision", c.precision()}, {"recall", c.recall()}, {"f1", c.f1()}};
}

json report_json(const EvalReport& r) {
  json per_label = json::object();
  for (const auto& [label, c] : r.per_label) per_label[label] = confusion_json(c);
  return {{"micro", confusion_json(r.micro)}, {"micro_f1", r.micro_f1}, {"per_label", std::move(per_label)}};
}

void write_json(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

PipelineConfig base_config(const Options& o) {
  PipelineConfig cfg = o.config.empty() ? default_config() : load_config(o.config);
  if (!o.corpus.empty()) cfg.paths.corpus = fs::absolute(o.corpus);
  if (!o.annotations.empty()) cfg.paths.annotations = fs::absolute(o.annotations);
  if (!o.gold.empty()) cfg.paths.gold = fs::absolute(o.gold);
  if (!o.model.empty()) cfg.paths.model = fs::absolute(o.model);
  if (o.seed) cfg.seed = *o.seed;
  return cfg;
}

const fs::path& require_path(const std::optional<fs::path>& p, const char* what) {
  if (!p) throw Error(std::string("no ") + what + " path: pass --" + what + " or set paths." + what + " in the config");
  return *p;
}

// Annotation file if given, otherwise dictionary tagging with the configured
// lexicon, otherwise no spans.
Annotations annotations_for(const Corpus& corpus, const std::optional<fs::path>& path,
                            const std::optional<Lexicon>& lexicon) {
  if (path) return load_ner_annotations(*path, corpus);
  Annotations ann;
  if (!lexicon) return ann;
  const DictionaryTagger tagger(*lexicon);
  for (const auto& doc : corpus) {
    auto spans = tagger.tag(doc);
    if (!spans.empty()) ann.emplace(doc.id, std::move(spans));
  }
  return ann;
}

struct TrainingData {
  Corpus corpus;
  Annotations spans;
  DecisionMap gold;
};

TrainingData load_training_data(const PipelineConfig& cfg) {
  TrainingData d;
  d.corpus = load_corpus(require_path(cfg.paths.corpus, "corpus"));
  d.spans = annotations_for(d.corpus, cfg.paths.annotations, cfg.lexicon);
  d.gold = load_decisions(require_path(cfg.paths.gold, "gold"));
  validate_gold(d.gold, cfg.schema, d.corpus);
  return d;
}

void write_synthetic(const fs::path& dir, const SyntheticData& data) {
  fs::create_directories(dir);
  write_file_atomic(dir / "corpus.jsonl", serialize_corpus(data.corpus));
  write_file_atomic(dir / "annotations.tsv", serialize_ner_annotations(data.annotations));
  write_file_atomic(dir / "gold.json", serialize_decisions(data.gold));
}

SyntheticData subset(const SyntheticData& data, std::size_t begin, std::size_t end) {
  SyntheticData s;
  for (std::size_t i = begin; i < end; ++i) {
    const auto& doc = data.corpus[i];
    s.corpus.push_back(doc);
    if (auto it = data.annotations.find(doc.id); it != data.annotations.end()) s.annotations.insert(*it);
    s.gold.emplace(doc.id, data.gold.at(doc.id));
  }
  return s;
}

int cmd_synth(const Options& o, std::ostream& out) {
  if (!o.seed) throw Error("synth: --seed is required");
  const auto schema = o.config.empty() ? default_config().schema : load_config(o.config).schema;
  const auto data = generate_synthetic(*o.seed, o.docs, schema);
  const fs::path dir(o.out);
  if (o.holdout > 0.0) {
    const auto n_test = static_cast<std::size_t>(std::llround(o.holdout * static_cast<double>(o.docs)));
    if (n_test == 0 || n_test >= o.docs) throw Error("synth: --holdout leaves an empty split");
    write_synthetic(dir / "train", subset(data, 0, o.docs - n_test));
    write_synthetic(dir / "test", subset(data, o.docs - n_test, o.docs));
    out << "wrote " << (o.docs - n_test) << " training and " << n_test << " test documents to " << dir.string()
        << "\n";
  } else {
    write_synthetic(dir, data);
    out << "wrote " << o.docs << " documents to " << dir.string() << "\n";
  }
  return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
  const auto cfg = base_config(o);
  const auto& model_path = require_path(cfg.paths.model, "model");
  const auto data = load_training_data(cfg);
  const auto model = train_ensemble(cfg.schema, cfg.labels, cfg.component_weights, cfg.hp, data.corpus, data.spans,
                                    data.gold, cfg.seed);
  save_model(model_path, cfg, model);
  out << "trained " << model.labels.size() << " labels on " << data.corpus.size() << " documents; model written to "
      << model_path.string() << "\n";
  return 0;
}

json scores_json(const std::vector<CandidateScore>& scores) {
  json arr = json::array();
  for (const auto& s : scores) {
    arr.push_back({{"weights", s.weights}, {"micro_f1", s.micro_f1}, {"tp", s.counts.tp}, {"fp", s.counts.fp},
                   {"fn", s.counts.fn}});
  }
  return arr;
}

int cmd_tune(const Options& o, std::ostream& out) {
  auto cfg = base_config(o);
  if (o.folds) cfg.folds = *o.folds;
  if (cfg.folds < 2) throw Error("tune: --folds must be at least 2");
  const auto data = load_training_data(cfg);
  const auto result = grid_search_weights(data.corpus, data.spans, data.gold, cfg.schema, cfg.labels,
                                          cfg.component_weights, cfg.hp, cfg.grid, cfg.folds, cfg.seed);

  json feature = json::object();
  for (const auto& [label, w] : result.feature_weights) {
    feature[label] = {{"tfidf_weight", w.first}, {"kw_weight", w.second},
                      {"candidates", scores_json(result.feature_scores.at(label))}};
  }
  json fallbacks = json::array();
  for (const auto& f : result.fallbacks) fallbacks.push_back({{"label", f.label}, {"fold", f.fold}});
  const json report{{"seed", result.seed},
                    {"folds", result.folds},
                    {"grid",
                     {{"component_values", result.grid.component_values},
                      {"feature_values", result.grid.feature_values}}},
                    {"component_weights", result.component_weights},
                    {"component_candidates", scores_json(result.component_scores)},
                    {"feature_weights", std::move(feature)},
                    {"cv", report_json(result.cv_report)},
                    {"single_class_fallbacks", std::move(fallbacks)}};

  PipelineConfig tuned = cfg;
  tuned.labels = apply_tuned(cfg.labels, result);
  tuned.component_weights = result.component_weights;
  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_json(dir / "cv_report.json", report);
  write_json(dir / "tuned_config.json", config_to_json(tuned, false));
  out << format_report_table(result.cv_report);
  char line[128];
  std::snprintf(line, sizeof line, "component weights: logreg %.2f, svm %.2f, gbdt %.2f\n",
                result.component_weights[0], result.component_weights[1], result.component_weights[2]);
  out << line;
  return 0;
}

int cmd_predict(const Options& o, std::ostream& out) {
  PipelineConfig cfg = o.config.empty() ? PipelineConfig{} : load_config(o.config);
  if (!o.model.empty()) cfg.paths.model = fs::absolute(o.model);
  if (!o.corpus.empty()) cfg.paths.corpus = fs::absolute(o.corpus);
  if (!o.annotations.empty()) cfg.paths.annotations = fs::absolute(o.annotations);
  const auto file = load_model(require_path(cfg.paths.model, "model"));
  const auto corpus = load_corpus(require_path(cfg.paths.corpus, "corpus"));
  const auto spans = annotations_for(corpus, cfg.paths.annotations, file.config.lexicon);
  const auto pred = predict_corpus(file.model, corpus, spans);
  write_file_atomic(o.pred, serialize_decisions(pred));
  out << "wrote predictions for " << corpus.size() << " documents to " << o.pred << "\n";
  return 0;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  auto gold = load_decisions(o.gold);
  const auto pred = load_decisions(o.pred);
  if (!o.corpus.empty()) {
    // Score only the documents of this corpus, e.g. a held-out split.
    const auto corpus = load_corpus(o.corpus);
    DecisionMap restricted;
    for (const auto& doc : corpus) {
      auto it = gold.find(doc.id);
      if (it == gold.end()) throw Error("gold has no decisions for document '" + doc.id + "'");
      restricted.insert(*it);
    }
    gold = std::move(restricted);
  }
  const auto report = micro_f1(gold, pred);
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_json(fs::path(o.out) / "eval_report.json", report_json(report));
  }
  out << format_report_table(report);
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cohort selection: per-criterion met / not met classification of clinical notes", "cohortsel"};
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus, NER annotations and gold decisions");
  synth->add_option("--seed", o.seed, "Generator seed");
  synth->add_option("--docs", o.docs, "Number of documents")->check(CLI::PositiveNumber);
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--config", o.config, "Config whose label schema to use");
  synth->add_option("--holdout", o.holdout, "Fraction written to a separate test/ split")->check(CLI::Range(0.0, 1.0));

  auto* train = app.add_subcommand("train", "Fit every label model and write a model file");
  auto* tune = app.add_subcommand("tune", "Grid-search feature and component weights by cross-validation");
  for (auto* sub : {train, tune}) {
    sub->add_option("--config", o.config, "Pipeline config (JSON)");
    sub->add_option("--corpus", o.corpus, "Corpus (JSONL)");
    sub->add_option("--annotations", o.annotations, "NER annotations (TSV)");
    sub->add_option("--gold", o.gold, "Gold decisions (JSON)");
    sub->add_option("--seed", o.seed, "Global seed");
  }
  train->add_option("--model", o.model, "Model output path");
  tune->add_option("--folds", o.folds, "Cross-validation folds (default 5)");
  tune->add_option("--out", o.out, "Output directory")->required();

  auto* predict = app.add_subcommand("predict", "Decide every label for every document");
  predict->add_option("--config", o.config, "Pipeline config (JSON) with paths");
  predict->add_option("--model", o.model, "Model file");
  predict->add_option("--corpus", o.corpus, "Corpus (JSONL)");
  predict->add_option("--annotations", o.annotations, "NER annotations (TSV)");
  predict->add_option("--pred", o.pred, "Predictions output path")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold decisions");
  evaluate->add_option("--gold", o.gold, "Gold decisions (JSON)")->required();
  evaluate->add_option("--pred", o.pred, "Predictions (JSON)")->required();
  evaluate->add_option("--corpus", o.corpus, "Restrict gold to this corpus");
  evaluate->add_option("--out", o.out, "Directory for eval_report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto* failing = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << failing->help();
    return 1;
  }

  try {
    apply_thread_limit();
    if (synth->parsed()) return cmd_synth(o, out);
    if (train->parsed()) return cmd_train(o, out);
    if (tune->parsed()) return cmd_tune(o, out);
    if (predict->parsed()) return cmd_predict(o, out);
    return cmd_evaluate(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cohortsel
