// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cohortsel/doc_classifier.hpp"
#include "cohortsel/error.hpp"
#include "cohortsel/util.hpp"
#include "test_support.hpp"

using namespace cohortsel;

namespace {

struct Labeled {
  Corpus docs;
  std::vector<int> classes;
};

// Class index is the digit after the "c" in the document id.
Labeled three_class_fixture() {
  Labeled out;
  out.docs = load_corpus(testing::fixture("docclf_3class.jsonl"));
  for (const auto& d : out.docs) out.classes.push_back(d.id[1] - '0');
  return out;
}

std::size_t argmax(const std::vector<double>& p) {
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

// Small fixtures need more passes and a larger step than the corpus-scale
// defaults to move the zero-initialised output layer.
DocClfParams fixture_params(std::uint64_t seed) {
  DocClfParams p;
  p.epochs = 25;
  p.lr0 = 0.5;
  p.seed = seed;
  return p;
}

Document random_doc(Rng& rng, std::size_t i) {
  static const std::vector<std::string> words{"ginseng", "creatinine", "aspirin", "daily", "mg", "patient",
                                              "stable",  "insulin",    "dka",     "x",     "plan", "renal"};
  std::string text;
  const auto n = rng.below(25);
  for (std::size_t k = 0; k < n; ++k) text += words[rng.below(words.size())] + " ";
  return make_document("r" + std::to_string(i), text);
}

}  // namespace

TEST_CASE("ngram ids count unigrams and bigrams") {
  const std::vector<std::string> abc{"a", "b", "c"};
  const auto ids = ngram_ids(abc, 1u << 18);
  CHECK(ids.size() == 5);
  CHECK(ids == ngram_ids(abc, 1u << 18));
  CHECK(ngram_ids(std::vector<std::string>{"a"}, 1u << 18).size() == 1);
  CHECK(ngram_ids(std::vector<std::string>{}, 1u << 18).empty());
  // Direct FNV-1a of the surfaces, bigrams joined by one space.
  CHECK(ids[0] == fnv1a64("a") % (1u << 18));
  CHECK(std::find(ids.begin(), ids.end(), fnv1a64("a b") % (1u << 18)) != ids.end());
  CHECK(std::find(ids.begin(), ids.end(), fnv1a64("b c") % (1u << 18)) != ids.end());
  for (auto id : ngram_ids(abc, 7)) CHECK(id < 7);
}

TEST_CASE("untrained model predicts exactly uniform") {
  const DocClfModel m(16, 1u << 18, 2, 3);
  const auto p = doc_class_probs(m, make_document("d", "anything at all here"));
  CHECK(p.first == 0.5);
  CHECK(p.second == 0.5);
  const DocClfModel m3(8, 1024, 3, 3);
  for (double v : m3.predict_proba(make_document("d", "a b c"))) CHECK(v == 1.0 / 3.0);
}

TEST_CASE("embedding initialisation is bounded and seeded") {
  const DocClfModel a(16, 1u << 18, 2, 1), b(16, 1u << 18, 2, 1), c(16, 1u << 18, 2, 2);
  bool differs = false;
  for (std::uint32_t bucket = 0; bucket < 200; ++bucket) {
    for (std::size_t j = 0; j < 16; ++j) {
      const double v = a.initial_value(bucket, j);
      CHECK(std::abs(v) <= 1.0 / 16.0);
      CHECK(v == b.initial_value(bucket, j));
      differs |= v != c.initial_value(bucket, j);
    }
  }
  CHECK(differs);
}

TEST_CASE("empty document is uniform after training") {
  const std::vector<Document> docs{make_document("a", "ginseng ginseng"), make_document("b", "creatinine")};
  const std::vector<int> y{0, 1};
  const auto m = train_doc_classifier(docs, y, 2, DocClfParams{});
  const auto p = doc_class_probs(m, make_document("e", ""));
  CHECK(p.first == 0.5);
  CHECK(p.second == 0.5);
}

TEST_CASE("two disjoint documents are separated") {
  const std::vector<Document> docs{make_document("a", "fish oil ginseng daily"),
                                   make_document("b", "serum creatinine elevated")};
  const std::vector<int> y{0, 1};
  const auto m = train_doc_classifier(docs, y, 2, DocClfParams{});
  for (std::size_t i = 0; i < docs.size(); ++i) CHECK(argmax(m.predict_proba(docs[i])) == static_cast<std::size_t>(y[i]));
}

TEST_CASE("three-class fixture is learned") {
  const auto data = three_class_fixture();
  REQUIRE(data.docs.size() == 36);
  const auto params = fixture_params(42);
  std::vector<double> losses;
  const auto m = train_doc_classifier(data.docs, data.classes, 3, params, &losses);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.docs.size(); ++i) {
    const auto p = m.predict_proba(data.docs[i]);
    correct += argmax(p) == static_cast<std::size_t>(data.classes[i]);
    CHECK(p[static_cast<std::size_t>(data.classes[i])] > 0.9);
  }
  CHECK(static_cast<double>(correct) / static_cast<double>(data.docs.size()) >= 0.95);
  REQUIRE(losses.size() == params.epochs);
  CHECK(losses[1] < losses[0]);
  CHECK(losses[2] < losses[1]);
}

TEST_CASE("probabilities are positive and normalised") {
  const auto data = three_class_fixture();
  const auto m = train_doc_classifier(data.docs, data.classes, 3, fixture_params(1));
  Rng rng(99);
  for (std::size_t i = 0; i < 1000; ++i) {
    const auto p = m.predict_proba(random_doc(rng, i));
    double sum = 0;
    for (double v : p) {
      CHECK(v > 0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-6);
  }
}

TEST_CASE("training is deterministic and order-free in hashing") {
  const auto data = three_class_fixture();
  DocClfParams params;
  params.seed = 5;
  const auto a = train_doc_classifier(data.docs, data.classes, 3, params);
  const auto b = train_doc_classifier(data.docs, data.classes, 3, params);
  CHECK(a.trained_rows() == b.trained_rows());
  CHECK(a.output() == b.output());

  Corpus reversed(data.docs.rbegin(), data.docs.rend());
  for (std::size_t i = 0; i < data.docs.size(); ++i) {
    CHECK(ngram_ids(data.docs[i], params.bucket_count) == ngram_ids(reversed[data.docs.size() - 1 - i], params.bucket_count));
  }
}

TEST_CASE("single-class training data is rejected") {
  const std::vector<Document> docs{make_document("a", "x"), make_document("b", "y")};
  const std::vector<int> y{1, 1};
  CHECK_THROWS_WITH_AS(train_doc_classifier(docs, y, 2, DocClfParams{}), doctest::Contains("degenerate labels"), Error);
}

TEST_CASE("restore validates shapes") {
  CHECK_THROWS_AS(DocClfModel::restore(4, 16, 2, 1, {}, std::vector<double>(3)), Error);
  CHECK_THROWS_AS(DocClfModel::restore(4, 16, 2, 1, {{99, std::vector<double>(4)}}, std::vector<double>(8)), Error);
  const auto m = DocClfModel::restore(4, 16, 2, 1, {{3, {0.1, 0.2, 0.3, 0.4}}}, std::vector<double>(8, 0.0));
  CHECK(m.row(3) == std::vector<double>{0.1, 0.2, 0.3, 0.4});
}
