// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/corpus.hpp"

#include <clocale>
#include <cwctype>
#include <algorithm>
#include <charconv>
#include <set>
#include <locale.h>

#include <json.hpp>

#include "cohortsel/error.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

using json = nlohmann::json;

std::string_view to_string(NerTag tag) noexcept {
  switch (tag) {
    case NerTag::problem: return "problem";
    case NerTag::treatment: return "treatment";
    case NerTag::test: return "test";
  }
  return "problem";
}

std::optional<NerTag> parse_ner_tag(std::string_view s) noexcept {
  if (s == "problem") return NerTag::problem;
  if (s == "treatment") return NerTag::treatment;
  if (s == "test") return NerTag::test;
  return std::nullopt;
}

std::string_view to_string(Decision d) noexcept { return d == Decision::met ? "met" : "not met"; }

std::optional<Decision> parse_decision(std::string_view s) noexcept {
  if (s == "met") return Decision::met;
  if (s == "not met") return Decision::not_met;
  return std::nullopt;
}

LabelSchema::LabelSchema(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw Error("label schema is empty");
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty() || !std::all_of(n.begin(), n.end(), [](char c) {
          return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
        })) {
      throw Error("invalid label name '" + n + "' (expected [A-Z0-9-]+)");
    }
    if (!seen.insert(n).second) throw Error("duplicate label name '" + n + "'");
  }
}

bool LabelSchema::contains(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::size_t LabelSchema::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw Error("unknown label '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

// ---------------------------------------------------------------------------
// tokenizer

namespace {

class Utf8Ctype {
 public:
  Utf8Ctype() : loc_(newlocale(LC_CTYPE_MASK, "C.UTF-8", static_cast<locale_t>(0))) {}
  ~Utf8Ctype() {
    if (loc_ != static_cast<locale_t>(0)) freelocale(loc_);
  }
  Utf8Ctype(const Utf8Ctype&) = delete;
  Utf8Ctype& operator=(const Utf8Ctype&) = delete;

  // Without a UTF-8 locale every non-ASCII code point counts as a letter and
  // is left as is.
  bool is_alnum(char32_t cp) const {
    if (loc_ == static_cast<locale_t>(0)) return true;
    return iswalnum_l(static_cast<wint_t>(cp), loc_) != 0;
  }
  char32_t to_lower(char32_t cp) const {
    if (loc_ == static_cast<locale_t>(0)) return cp;
    return static_cast<char32_t>(towlower_l(static_cast<wint_t>(cp), loc_));
  }

 private:
  locale_t loc_;
};

const Utf8Ctype& ctype() {
  static const Utf8Ctype instance;
  return instance;
}

// Decodes one code point at text[i]; returns its byte length, or 0 for an
// invalid sequence.
std::size_t decode_utf8(std::string_view text, std::size_t i, char32_t& cp) {
  const auto b0 = static_cast<unsigned char>(text[i]);
  std::size_t len;
  if (b0 < 0x80) {
    cp = b0;
    return 1;
  } else if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    return 0;
  }
  if (i + len > text.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<unsigned char>(text[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
      cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    return 0;
  }
  return len;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_token_char(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
  }
  return ctype().is_alnum(cp);
}

char32_t lower(char32_t cp) {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
  return ctype().to_lower(cp);
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  Token current;
  bool open = false;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp = 0;
    std::size_t len = decode_utf8(text, i, cp);
    const bool word = len > 0 && is_token_char(cp);
    if (len == 0) len = 1;
    if (word) {
      if (!open) {
        current = Token{{}, i, i};
        open = true;
      }
      append_utf8(current.surface, lower(cp));
      current.end = i + len;
    } else if (open) {
      tokens.push_back(std::move(current));
      open = false;
    }
    i += len;
  }
  if (open) tokens.push_back(std::move(current));
  return tokens;
}

Document make_document(std::string id, std::string text) {
  Document d{std::move(id), std::move(text), {}};
  d.tokens = tokenize(d.text);
  return d;
}

// ---------------------------------------------------------------------------
// corpus JSON-Lines

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    pos = nl + 1;
  }
  return lines;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; });
}

std::string where(std::string_view source, std::size_t line) {
  return std::string(source) + ":" + std::to_string(line);
}

}  // namespace

Corpus parse_corpus(std::string_view jsonl, std::string_view source) {
  Corpus docs;
  std::set<std::string> ids;
  const auto lines = split_lines(jsonl);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (is_blank(lines[n])) continue;
    json obj;
    try {
      obj = json::parse(lines[n]);
    } catch (const json::parse_error& e) {
      throw Error(where(source, n + 1) + ": malformed JSON: " + e.what());
    }
    if (!obj.is_object() || !obj.contains("id") || !obj.contains("text") || !obj["id"].is_string() ||
        !obj["text"].is_string()) {
      throw Error(where(source, n + 1) + ": expected an object with string fields \"id\" and \"text\"");
    }
    auto id = obj["id"].get<std::string>();
    if (!ids.insert(id).second) throw Error(where(source, n + 1) + ": duplicate document id '" + id + "'");
    docs.push_back(make_document(std::move(id), obj["text"].get<std::string>()));
  }
  return docs;
}

Corpus load_corpus(const std::filesystem::path& path) { return parse_corpus(read_file(path), path.string()); }

std::string serialize_corpus(std::span<const Document> docs) {
  std::string out;
  for (const auto& d : docs) {
    out += json{{"id", d.id}, {"text", d.text}}.dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// NER annotations TSV

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(pos));
      break;
    }
    cols.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
  return cols;
}

std::optional<std::size_t> parse_size(std::string_view s) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

Annotations parse_ner_annotations(std::string_view tsv, std::span<const Document> corpus, std::string_view source) {
  std::map<std::string_view, const Document*> by_id;
  for (const auto& d : corpus) by_id.emplace(d.id, &d);

  Annotations out;
  const auto lines = split_lines(tsv);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (lines[n].empty()) continue;
    const auto cols = split_tabs(lines[n]);
    if (cols.size() != 5) {
      throw Error(where(source, n + 1) + ": expected 5 tab-separated columns, got " + std::to_string(cols.size()));
    }
    auto doc = by_id.find(cols[0]);
    if (doc == by_id.end()) throw Error(where(source, n + 1) + ": unknown doc_id '" + std::string(cols[0]) + "'");
    auto start = parse_size(cols[1]);
    auto end = parse_size(cols[2]);
    if (!start || !end) throw Error(where(source, n + 1) + ": start/end must be non-negative integers");
    auto tag = parse_ner_tag(cols[3]);
    if (!tag) throw Error(where(source, n + 1) + ": unknown tag '" + std::string(cols[3]) + "'");
    if (*start >= *end || *end > doc->second->text.size()) {
      throw Error(where(source, n + 1) + ": span [" + std::to_string(*start) + ", " + std::to_string(*end) +
                  ") out of bounds for document '" + std::string(cols[0]) + "' of length " +
                  std::to_string(doc->second->text.size()));
    }
    out[std::string(cols[0])].push_back(NerSpan{std::string(cols[0]), *start, *end, *tag, std::string(cols[4])});
  }
  for (auto& [id, spans] : out) {
    std::stable_sort(spans.begin(), spans.end(), [](const NerSpan& a, const NerSpan& b) {
      return a.start != b.start ? a.start < b.start : a.end < b.end;
    });
  }
  return out;
}

Annotations load_ner_annotations(const std::filesystem::path& path, std::span<const Document> corpus) {
  return parse_ner_annotations(read_file(path), corpus, path.string());
}

std::string serialize_ner_annotations(const Annotations& ann) {
  std::string out;
  for (const auto& [id, spans] : ann) {
    for (const auto& s : spans) {
      out += s.doc_id;
      out += '\t';
      out += std::to_string(s.start);
      out += '\t';
      out += std::to_string(s.end);
      out += '\t';
      out += to_string(s.tag);
      out += '\t';
      out += s.surface;
      out += '\n';
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// decisions (gold labels and predictions)

DecisionMap parse_decisions(std::string_view text, std::string_view source) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string(source) + ": malformed JSON: " + e.what());
  }
  if (!obj.is_object()) throw Error(std::string(source) + ": expected a JSON object keyed by document id");
  DecisionMap out;
  for (const auto& [doc_id, labels] : obj.items()) {
    if (!labels.is_object()) throw Error(std::string(source) + ": entry for '" + doc_id + "' is not an object");
    auto& row = out[doc_id];
    for (const auto& [label, value] : labels.items()) {
      std::optional<Decision> d;
      if (value.is_string()) d = parse_decision(value.get<std::string>());
      if (!d) {
        throw Error(std::string(source) + ": " + doc_id + "/" + label + ": expected \"met\" or \"not met\"");
      }
      row.emplace(label, *d);
    }
  }
  return out;
}

DecisionMap load_decisions(const std::filesystem::path& path) { return parse_decisions(read_file(path), path.string()); }

std::string serialize_decisions(const DecisionMap& decisions) {
  json obj = json::object();
  for (const auto& [doc_id, labels] : decisions) {
    json row = json::object();
    for (const auto& [label, d] : labels) row[label] = std::string(to_string(d));
    obj[doc_id] = std::move(row);
  }
  return obj.dump(2) + "\n";
}

void validate_gold(const DecisionMap& gold, const LabelSchema& schema, std::span<const Document> corpus) {
  for (const auto& doc : corpus) {
    auto it = gold.find(doc.id);
    if (it == gold.end()) throw Error("gold labels missing document '" + doc.id + "'");
    for (const auto& label : schema.names()) {
      if (!it->second.contains(label)) throw Error("gold labels for '" + doc.id + "' missing label " + label);
    }
    for (const auto& [label, d] : it->second) {
      if (!schema.contains(label)) throw Error("gold labels for '" + doc.id + "' use unknown label " + label);
    }
  }
}

// ---------------------------------------------------------------------------
// phrase lists, matching, dictionary NER

std::vector<std::string> parse_phrase_list(std::string_view text) {
  std::vector<std::string> phrases;
  for (auto line : split_lines(text)) {
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    phrases.emplace_back(line);
  }
  return phrases;
}

std::vector<std::string> load_phrase_list(const std::filesystem::path& path) {
  return parse_phrase_list(read_file(path));
}

PhraseMatcher::PhraseMatcher(std::span<const std::string> phrases) {
  for (const auto& p : phrases) add(p);
}

std::size_t PhraseMatcher::add(std::string_view phrase) {
  std::vector<std::string> words;
  for (auto& t : tokenize(phrase)) words.push_back(std::move(t.surface));
  for (std::size_t i = 0; i < phrases_.size(); ++i) {
    if (phrases_[i] == words) return i;
  }
  const std::size_t index = phrases_.size();
  phrases_.push_back(std::move(words));
  if (phrases_.back().empty()) return index;
  auto& bucket = by_first_[phrases_.back().front()];
  bucket.push_back(index);
  std::stable_sort(bucket.begin(), bucket.end(),
                   [&](std::size_t a, std::size_t b) { return phrases_[a].size() > phrases_[b].size(); });
  return index;
}

std::vector<PhraseMatcher::Match> PhraseMatcher::find_all(std::span<const Token> tokens) const {
  std::vector<Match> matches;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::optional<Match> found;
    if (auto it = by_first_.find(tokens[i].surface); it != by_first_.end()) {
      for (std::size_t p : it->second) {
        const auto& words = phrases_[p];
        if (i + words.size() > tokens.size()) continue;
        bool ok = true;
        for (std::size_t k = 1; k < words.size() && ok; ++k) ok = tokens[i + k].surface == words[k];
        if (ok) {
          found = Match{i, i + words.size(), p};
          break;
        }
      }
    }
    if (found) {
      matches.push_back(*found);
      i = found->end;
    } else {
      ++i;
    }
  }
  return matches;
}

DictionaryTagger::DictionaryTagger(const Lexicon& lexicon) {
  for (const auto& [phrase, tag] : lexicon) {
    const std::size_t index = matcher_.add(phrase);
    if (index == tags_.size()) tags_.push_back(tag);
  }
}

std::vector<NerSpan> DictionaryTagger::tag(const Document& doc) const {
  std::vector<NerSpan> spans;
  for (const auto& m : matcher_.find_all(doc.tokens)) {
    const std::size_t start = doc.tokens[m.begin].start;
    const std::size_t end = doc.tokens[m.end - 1].end;
    spans.push_back(NerSpan{doc.id, start, end, tags_[m.phrase], doc.text.substr(start, end - start)});
  }
  return spans;
}

std::vector<NerSpan> dictionary_ner(const Document& doc, const Lexicon& lexicon) {
  return DictionaryTagger(lexicon).tag(doc);
}

Lexicon load_lexicon(const std::filesystem::path& problem, const std::filesystem::path& treatment,
                     const std::filesystem::path& test) {
  Lexicon lex;
  for (const auto& [path, tag] : {std::pair{problem, NerTag::problem}, std::pair{treatment, NerTag::treatment},
                                  std::pair{test, NerTag::test}}) {
    for (auto& p : load_phrase_list(path)) lex.emplace(std::move(p), tag);
  }
  return lex;
}

}  // namespace cohortsel
