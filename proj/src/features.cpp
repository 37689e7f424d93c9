// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/features.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cohortsel/error.hpp"

namespace cohortsel {

void validate_label_configs(std::span<const LabelConfig> configs, const LabelSchema& schema) {
  std::set<std::string> seen;
  auto check_weight = [](double w, const std::string& what) {
    if (!std::isfinite(w) || w < 0) throw Error(what + " must be a finite non-negative number");
  };
  for (const auto& c : configs) {
    const std::string at = "labels." + c.label;
    if (!schema.contains(c.label)) throw Error(at + ": label is not in the schema");
    if (!seen.insert(c.label).second) throw Error(at + ": configured twice");
    check_weight(c.tfidf_weight, at + ".tfidf_weight");
    check_weight(c.kw_weight, at + ".kw_weight");
    for (const auto* list : {&c.gazetteers, &c.triggers}) {
      for (const auto& w : *list) {
        if (w.window < 1) throw Error(at + ": window for '" + w.name + "' must be >= 1");
        if (!std::isfinite(w.weight)) throw Error(at + ": weight for '" + w.name + "' must be finite");
      }
    }
    for (const auto& imp : c.imports) {
      if (!schema.contains(imp)) throw Error(at + ".imports: unknown label '" + imp + "'");
    }
    if (c.component_weights) {
      bool any = false;
      for (double w : *c.component_weights) {
        check_weight(w, at + ".component_weights");
        any = any || w > 0;
      }
      if (!any) throw Error(at + ".component_weights: at least one weight must be positive");
    }
  }
  for (const auto& name : schema.names()) {
    if (!seen.contains(name)) throw Error("labels: no configuration for schema label " + name);
  }
}

// ---------------------------------------------------------------------------
// TF-IDF

std::optional<FeatureId> TfidfModel::id(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double TfidfModel::idf(FeatureId id) const {
  return std::log((1.0 + static_cast<double>(n_docs)) / (1.0 + static_cast<double>(df.at(id)))) + 1.0;
}

void TfidfModel::reindex() {
  if (df.size() != vocabulary.size()) throw Error("tfidf: vocabulary and df sizes differ");
  index_.clear();
  for (FeatureId i = 0; i < vocabulary.size(); ++i) {
    if (df[i] < 1 || df[i] > n_docs) throw Error("tfidf: df out of range for '" + vocabulary[i] + "'");
    index_.emplace(vocabulary[i], i);
  }
}

TfidfModel fit_tfidf(std::span<const Document> train_docs, std::size_t min_df) {
  if (train_docs.empty()) throw Error("fit_tfidf: empty training corpus");
  std::map<std::string, std::size_t> counts;
  for (const auto& doc : train_docs) {
    std::set<std::string_view> seen;
    for (const auto& t : doc.tokens) seen.insert(t.surface);
    for (auto term : seen) ++counts[std::string(term)];
  }
  TfidfModel m;
  m.n_docs = train_docs.size();
  for (auto& [term, df] : counts) {
    if (df >= min_df) {
      m.vocabulary.push_back(term);
      m.df.push_back(df);
    }
  }
  m.reindex();
  return m;
}

SparseVec tfidf_vector(const TfidfModel& model, const Document& doc) {
  std::map<FeatureId, double> tf;
  for (const auto& t : doc.tokens) {
    if (auto id = model.id(t.surface)) tf[*id] += 1.0;
  }
  double sq = 0;
  for (auto& [id, w] : tf) {
    w *= model.idf(id);
    sq += w * w;
  }
  if (sq > 0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& [id, w] : tf) w *= inv;
  }
  return SparseVec(tf);
}

// ---------------------------------------------------------------------------
// keyword, gazetteer and context families

NamedVec ner_keyword_features(const Document& doc, std::span<const NerSpan> spans, double kw_weight) {
  NamedVec out;
  std::vector<bool> covered(doc.tokens.size(), false);
  for (const auto& s : spans) {
    if (s.doc_id != doc.id || s.start >= s.end || s.end > doc.text.size()) {
      throw Error("NER span [" + std::to_string(s.start) + ", " + std::to_string(s.end) + ") of '" + s.doc_id +
                  "' does not belong to document '" + doc.id + "'");
    }
    out["tag:" + std::string(to_string(s.tag))] += 1.0;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (doc.tokens[i].start >= s.start && doc.tokens[i].end <= s.end) covered[i] = true;
    }
  }
  if (kw_weight != 0.0) {
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (covered[i]) out["kw:" + doc.tokens[i].surface] += kw_weight;
    }
  }
  return out;
}

void add_window_features(const Document& doc, const PhraseMatcher& matcher, int window, double weight,
                         const std::string& prefix, NamedVec& out) {
  if (weight == 0.0) return;
  const auto w = static_cast<std::size_t>(window);
  const std::size_t n = doc.tokens.size();
  for (const auto& m : matcher.find_all(doc.tokens)) {
    const std::size_t left = m.begin >= w ? m.begin - w : 0;
    for (std::size_t i = left; i < m.begin; ++i) out[prefix + doc.tokens[i].surface] += weight;
    const std::size_t right = std::min(n, m.end + w);
    for (std::size_t i = m.end; i < right; ++i) out[prefix + doc.tokens[i].surface] += weight;
  }
}

NamedVec gazetteer_features(const Document& doc, const WindowSpec& gazetteer) {
  NamedVec out;
  add_window_features(doc, PhraseMatcher(gazetteer.phrases), gazetteer.window, gazetteer.weight,
                      "gaz:" + gazetteer.name + ":", out);
  return out;
}

NamedVec context_features(const Document& doc, const WindowSpec& triggers) {
  NamedVec out;
  add_window_features(doc, PhraseMatcher(triggers.phrases), triggers.window, triggers.weight,
                      "ctx:" + triggers.name + ":", out);
  return out;
}

// ---------------------------------------------------------------------------
// assembly

LabelFeaturizer::LabelFeaturizer(const LabelConfig& config, std::span<const LabelConfig> all_configs)
    : config_(config) {
  for (const auto& g : config.gazetteers) {
    windows_.push_back({"gaz:" + g.name + ":", PhraseMatcher(g.phrases), g.window, g.weight});
  }
  auto add_triggers = [&](const LabelConfig& owner) {
    for (const auto& t : owner.triggers) {
      windows_.push_back({"ctx:" + owner.label + ":", PhraseMatcher(t.phrases), t.window, t.weight});
    }
  };
  add_triggers(config);
  for (const auto& imp : config.imports) {
    auto it = std::find_if(all_configs.begin(), all_configs.end(),
                           [&](const LabelConfig& c) { return c.label == imp; });
    if (it == all_configs.end()) throw Error("labels." + config.label + ".imports: unknown label '" + imp + "'");
    if (it->label != config.label) add_triggers(*it);
  }
}

NamedVec LabelFeaturizer::extract(const Document& doc, std::span<const NerSpan> spans, const TfidfModel& tfidf,
                                  const std::optional<DocClfProbs>& doc_clf_probs) const {
  NamedVec out;
  if (config_.tfidf_weight != 0.0) {
    for (const auto& [id, w] : tfidf_vector(tfidf, doc)) {
      out["tfidf:" + tfidf.vocabulary[id]] = config_.tfidf_weight * w;
    }
  }
  // Tag counts belong to the keyword family and are switched off with it.
  if (config_.kw_weight != 0.0) out.merge(ner_keyword_features(doc, spans, config_.kw_weight));
  for (const auto& w : windows_) add_window_features(doc, w.matcher, w.window, w.weight, w.prefix, out);
  if (config_.use_doc_clf && doc_clf_probs) {
    out["dlc:met"] = doc_clf_probs->first;
    out["dlc:not_met"] = doc_clf_probs->second;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0.0; });
  return out;
}

NamedVec assemble(const Document& doc, std::span<const NerSpan> spans, const TfidfModel& tfidf,
                  const std::optional<DocClfProbs>& doc_clf_probs, const LabelConfig& config,
                  std::span<const LabelConfig> all_configs) {
  return LabelFeaturizer(config, all_configs).extract(doc, spans, tfidf, doc_clf_probs);
}

}  // namespace cohortsel
