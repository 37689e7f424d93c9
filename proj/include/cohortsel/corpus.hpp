// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cohortsel {

struct Token {
  std::string surface;  // lowercased
  std::size_t start = 0;  // byte offset into Document::text
  std::size_t end = 0;    // exclusive

  bool operator==(const Token&) const = default;
};

struct Document {
  std::string id;
  std::string text;
  std::vector<Token> tokens;
};

using Corpus = std::vector<Document>;

enum class NerTag { problem, treatment, test };

std::string_view to_string(NerTag tag) noexcept;
std::optional<NerTag> parse_ner_tag(std::string_view s) noexcept;

struct NerSpan {
  std::string doc_id;
  std::size_t start = 0;
  std::size_t end = 0;
  NerTag tag = NerTag::problem;
  std::string surface;

  bool operator==(const NerSpan&) const = default;
};

using Annotations = std::map<std::string, std::vector<NerSpan>>;

enum class Decision { met, not_met };

/// "met" / "not met", the spelling used in gold and prediction files.
std::string_view to_string(Decision d) noexcept;
std::optional<Decision> parse_decision(std::string_view s) noexcept;

/// doc id -> label -> decision. Also the shape of prediction files.
using DecisionMap = std::map<std::string, std::map<std::string, Decision>>;

/// Ordered label names. Names are unique and match [A-Z0-9-]+.
class LabelSchema {
 public:
  LabelSchema() = default;
  explicit LabelSchema(std::vector<std::string> names);

  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }
  bool contains(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  static constexpr std::size_t kDefaultSize = 13;

 private:
  std::vector<std::string> names_;
};

// Tokens are maximal runs of Unicode letters/digits, lowercased, with byte
// offsets into the original text. Everything else separates tokens.
std::vector<Token> tokenize(std::string_view text);

Document make_document(std::string id, std::string text);

Corpus load_corpus(const std::filesystem::path& path);
Corpus parse_corpus(std::string_view jsonl, std::string_view source = "<memory>");
std::string serialize_corpus(std::span<const Document> docs);

Annotations load_ner_annotations(const std::filesystem::path& path, std::span<const Document> corpus);
Annotations parse_ner_annotations(std::string_view tsv, std::span<const Document> corpus,
                                  std::string_view source = "<memory>");
std::string serialize_ner_annotations(const Annotations& ann);

DecisionMap load_decisions(const std::filesystem::path& path);
DecisionMap parse_decisions(std::string_view json, std::string_view source = "<memory>");
std::string serialize_decisions(const DecisionMap& decisions);

// Checks that every corpus document has a decision for every schema label and
// no unknown labels. Extra documents in `gold` are allowed.
void validate_gold(const DecisionMap& gold, const LabelSchema& schema, std::span<const Document> corpus);

/// One lowercase phrase per line; blank lines and lines starting with '#' are skipped.
std::vector<std::string> load_phrase_list(const std::filesystem::path& path);
std::vector<std::string> parse_phrase_list(std::string_view text);

// Longest-match phrase lookup over token surfaces. Phrases are tokenized with
// the document tokenizer, so "Chest-Pain" and "chest pain" are the same entry.
class PhraseMatcher {
 public:
  struct Match {
    std::size_t begin = 0;  // token index
    std::size_t end = 0;    // exclusive token index
    std::size_t phrase = 0;  // index of the phrase as inserted

    bool operator==(const Match&) const = default;
  };

  PhraseMatcher() = default;
  explicit PhraseMatcher(std::span<const std::string> phrases);

  /// Returns the phrase index; re-adding an existing phrase returns the old index.
  std::size_t add(std::string_view phrase);
  bool empty() const noexcept { return phrases_.empty(); }
  std::size_t size() const noexcept { return phrases_.size(); }

  /// Left-to-right scan; at each position the longest phrase wins and the scan
  /// resumes after it, so matches never overlap.
  std::vector<Match> find_all(std::span<const Token> tokens) const;

 private:
  std::vector<std::vector<std::string>> phrases_;
  // first token -> indices of phrases starting with it, longest first
  std::unordered_map<std::string, std::vector<std::size_t>> by_first_;
};

/// Lowercase phrase -> tag.
using Lexicon = std::map<std::string, NerTag>;

std::vector<NerSpan> dictionary_ner(const Document& doc, const Lexicon& lexicon);

// Reusable form of dictionary_ner for tagging many documents.
class DictionaryTagger {
 public:
  explicit DictionaryTagger(const Lexicon& lexicon);
  std::vector<NerSpan> tag(const Document& doc) const;

 private:
  PhraseMatcher matcher_;
  std::vector<NerTag> tags_;
};

Lexicon load_lexicon(const std::filesystem::path& problem, const std::filesystem::path& treatment,
                     const std::filesystem::path& test);

}  // namespace cohortsel
