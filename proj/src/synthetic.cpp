// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/synthetic.hpp"

#include <array>
#include <string_view>

#include "cohortsel/error.hpp"
#include "cohortsel/resources.hpp"
#include "cohortsel/util.hpp"

namespace cohortsel {

namespace {

constexpr double kCueRatePositive = 0.9;
constexpr double kCueRateNegative = 0.1;

constexpr std::array<std::string_view, 8> kAffirmed{
    "History of {} noted.",
    "{} documented at last visit.",
    "Patient has {} per outside records.",
    "Continues {} as before.",
    "{} confirmed on chart review.",
    "Assessment: {}.",
    "Reports ongoing {} this year.",
    "Plan reviewed; {} remains active.",
};

constexpr std::array<std::string_view, 6> kNegated{
    "Denies {}.",
    "No evidence of {}.",
    "Negative for {} on screening.",
    "{} was ruled out.",
    "No prior {}.",
    "Family history of {}, patient without it.",
};

constexpr std::array<std::string_view, 3> kSupport{
    "{} mentioned in plan.",
    "Discussed {} with patient.",
    "Consider {} at follow up.",
};

constexpr std::array<std::string_view, 40> kFiller{
    "Patient seen in clinic today.",
    "Vital signs stable.",
    "Follow up in three months.",
    "Lungs clear to auscultation bilaterally.",
    "No acute distress.",
    "Alert and oriented times three.",
    "Heart regular rate and rhythm.",
    "Abdomen soft, nontender.",
    "Extremities without edema.",
    "Medications reconciled with pharmacy.",
    "Labs drawn this morning.",
    "Patient lives with spouse.",
    "Works as a teacher.",
    "Ambulates without assistance.",
    "Sleep has been adequate.",
    "Appetite is good.",
    "Reviewed recent imaging.",
    "Immunizations are up to date.",
    "Will obtain records from prior provider.",
    "Counseled on diet and exercise.",
    "Return precautions given.",
    "Blood pressure checked twice.",
    "Weight stable since last visit.",
    "Physical exam otherwise unremarkable.",
    "Skin warm and dry.",
    "Neurologic exam nonfocal.",
    "Pupils equal and reactive.",
    "Patient agrees with plan.",
    "Seen with attending physician.",
    "Complete blood count pending.",
    "Chest x ray reviewed.",
    "EKG shows sinus rhythm.",
    "Lipid panel ordered.",
    "Basic metabolic panel reviewed.",
    "Mood and affect appropriate.",
    "Denies fever or chills.",
    "No recent travel.",
    "Hearing grossly intact.",
    "Gait steady.",
    "Questions answered at bedside.",
};

std::string fill(std::string_view pattern, const std::string& phrase) {
  std::string out;
  const auto pos = pattern.find("{}");
  out.append(pattern.substr(0, pos));
  out.append(phrase);
  out.append(pattern.substr(pos + 2));
  if (pos == 0 && !out.empty() && out[0] >= 'a' && out[0] <= 'z') out[0] = static_cast<char>(out[0] - 32);
  return out;
}

template <std::size_t N>
std::string_view pick(Rng& rng, const std::array<std::string_view, N>& items) {
  return items[rng.below(N)];
}

const std::string& pick(Rng& rng, const std::vector<std::string>& items) { return items[rng.below(items.size())]; }

std::string doc_id(std::size_t i, std::size_t n) {
  std::string digits = std::to_string(i + 1);
  const std::size_t width = std::to_string(n).size();
  return "doc-" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

}  // namespace

SyntheticData generate_synthetic(std::uint64_t seed, std::size_t n_docs, const LabelSchema& schema) {
  if (n_docs < 10) throw Error("generate_synthetic: need at least 10 documents, got " + std::to_string(n_docs));
  std::vector<CueProfile> profiles;
  std::vector<double> base_rate;
  for (std::size_t l = 0; l < schema.size(); ++l) {
    profiles.push_back(cue_profile_for(schema.names()[l]));
    const double t = schema.size() > 1 ? static_cast<double>(l) / static_cast<double>(schema.size() - 1) : 0.5;
    base_rate.push_back(0.38 + 0.24 * t);
  }

  Rng rng(seed);
  SyntheticData out;
  const DictionaryTagger tagger(builtin_lexicon());
  for (std::size_t i = 0; i < n_docs; ++i) {
    const std::string id = doc_id(i, n_docs);
    std::vector<std::string> sentences;
    auto& gold_row = out.gold[id];
    for (std::size_t l = 0; l < schema.size(); ++l) {
      const auto& p = profiles[l];
      const bool positive = rng.bernoulli(base_rate[l]);
      gold_row[p.label] = positive ? Decision::met : Decision::not_met;
      if (positive) {
        if (rng.bernoulli(kCueRatePositive)) {
          sentences.push_back(fill(pick(rng, kAffirmed), pick(rng, p.cues)));
        } else {
          sentences.push_back(fill(pick(rng, kSupport), pick(rng, p.support)));
        }
      } else if (rng.bernoulli(kCueRateNegative)) {
        sentences.push_back(fill(pick(rng, kNegated), pick(rng, p.cues)));
      }
    }
    const std::size_t n_filler = 3 + rng.below(6);
    for (std::size_t f = 0; f < n_filler; ++f) sentences.emplace_back(pick(rng, kFiller));
    rng.shuffle(sentences);

    std::string text;
    for (const auto& s : sentences) {
      if (!text.empty()) text += ' ';
      text += s;
    }
    Document doc = make_document(id, std::move(text));
    if (auto spans = tagger.tag(doc); !spans.empty()) out.annotations.emplace(id, std::move(spans));
    out.corpus.push_back(std::move(doc));
  }
  return out;
}

}  // namespace cohortsel
