// Copyright 2026 The cohortsel Authors
// SPDX-License-Identifier: Apache-2.0

#include "cohortsel/resources.hpp"

#include <algorithm>

namespace cohortsel {

const std::vector<Gazetteer>& builtin_gazetteers() {
  static const std::vector<Gazetteer> gazetteers{
      {"diet-supplements",
       NerTag::treatment,
       {"multivitamin", "vitamin a", "vitamin b12", "vitamin c", "vitamin d", "vitamin d3", "vitamin e", "vitamin k",
        "folic acid", "biotin", "niacin", "thiamine", "riboflavin", "pyridoxine", "calcium carbonate",
        "calcium citrate", "magnesium oxide", "magnesium citrate", "zinc sulfate", "zinc gluconate", "iron sulfate",
        "ferrous gluconate", "potassium gluconate", "selenium", "chromium picolinate", "copper gluconate",
        "manganese", "iodine", "boron", "fish oil", "omega 3", "krill oil", "flaxseed oil", "cod liver oil",
        "evening primrose oil", "borage oil", "coenzyme q10", "alpha lipoic acid", "glucosamine", "chondroitin",
        "msm", "melatonin", "probiotic", "lactobacillus", "acidophilus", "psyllium", "fiber supplement",
        "whey protein", "creatine monohydrate", "l arginine", "l carnitine", "l glutamine", "l lysine", "taurine",
        "glycine", "collagen peptides", "hyaluronic acid", "lutein", "zeaxanthin", "lycopene", "resveratrol",
        "quercetin", "curcumin", "turmeric", "ginger root", "garlic extract", "ginseng", "ginkgo biloba",
        "echinacea", "elderberry", "st johns wort", "saw palmetto", "valerian root", "kava", "ashwagandha",
        "rhodiola", "milk thistle", "dandelion root", "black cohosh", "dong quai", "red yeast rice",
        "green tea extract", "grape seed extract", "bilberry", "cranberry extract", "hawthorn", "horny goat weed",
        "maca root", "tribulus", "fenugreek", "cinnamon extract", "bitter melon", "berberine", "spirulina",
        "chlorella", "wheatgrass", "kelp", "sea moss", "bee pollen", "royal jelly", "propolis", "dhea", "5 htp",
        "sam e", "nac", "inositol", "choline", "lecithin", "pantothenic acid", "vitamin b complex",
        "prenatal vitamin", "calcium with vitamin d", "magnesium glycinate", "potassium citrate",
        "digestive enzymes", "apple cider vinegar capsules", "garcinia cambogia", "olive leaf extract",
        "oregano oil", "astaxanthin"}},
      {"cardiac-disease",
       NerTag::problem,
       {"coronary artery disease", "cad", "angina", "unstable angina", "myocardial ischemia", "three vessel disease",
        "two vessel disease", "left main disease", "coronary stenosis", "coronary stent", "drug eluting stent",
        "cabg", "coronary bypass", "percutaneous coronary intervention", "pci", "angioplasty",
        "positive stress test", "reversible ischemia", "ischemic cardiomyopathy", "cardiac catheterization",
        "coronary artery calcification", "prior coronary event", "cardiac ischemia", "exertional chest pain",
        "chest pain", "troponin elevation", "st depression", "wall motion abnormality"}},
      {"antiplatelet-mi",
       NerTag::treatment,
       {"aspirin", "asa", "baby aspirin", "enteric coated aspirin", "ecotrin", "bayer aspirin", "aspirin 81 mg",
        "aspirin 325 mg", "clopidogrel", "plavix", "ticagrelor", "brilinta", "prasugrel", "effient",
        "dipyridamole", "aggrenox", "cilostazol", "antiplatelet therapy", "dual antiplatelet therapy",
        "daily aspirin", "myocardial infarction", "mi", "heart attack", "nstemi", "stemi",
        "acute coronary syndrome", "secondary prevention", "cardioprotective aspirin"}},
      {"ketoacidosis",
       NerTag::problem,
       {"diabetic ketoacidosis", "dka", "ketoacidosis", "ketosis", "ketonemia", "ketonuria", "beta hydroxybutyrate",
        "serum ketones", "urine ketones", "anion gap acidosis", "elevated anion gap", "metabolic acidosis",
        "kussmaul respirations", "fruity breath", "insulin drip", "insulin infusion", "hyperglycemic crisis",
        "hyperglycemic emergency", "euglycemic dka", "ketotic", "ketone bodies", "acetone breath",
        "low bicarbonate", "bicarbonate drip", "micu admission for dka", "dka protocol", "hhs",
        "hyperosmolar state"}},
  };
  return gazetteers;
}

namespace {

const std::vector<std::string>& gazetteer_phrases(const std::string& name) {
  const auto& all = builtin_gazetteers();
  return std::find_if(all.begin(), all.end(), [&](const Gazetteer& g) { return g.name == name; })->phrases;
}

}  // namespace

const std::vector<CueProfile>& builtin_cue_profiles() {
  static const std::vector<CueProfile> profiles{
      {"ADVANCED-CAD", NerTag::problem, gazetteer_phrases("cardiac-disease"),
       {"cardiology follow up", "lipid clinic", "statin therapy"}},
      {"ASP-FOR-MI",
       NerTag::treatment,
       {"aspirin 81 mg", "daily aspirin", "baby aspirin", "aspirin after myocardial infarction",
        "enteric coated aspirin"},
       {"clopidogrel", "antiplatelet therapy"}},
      {"CREATININE",
       NerTag::test,
       {"creatinine 2 4 mg dl", "elevated creatinine", "serum creatinine 1 9", "creatinine above normal",
        "rising creatinine"},
       {"renal insufficiency", "nephrology consult"}},
      {"DIETSUPP", NerTag::treatment, gazetteer_phrases("diet-supplements"),
       {"nutrition counseling", "health food store"}},
      {"HBA1C",
       NerTag::test,
       {"hba1c 8 9", "hemoglobin a1c 9 2", "a1c above goal", "elevated hba1c", "hba1c of 7 8"},
       {"poor glycemic control", "endocrine referral"}},
      {"KETO-1YR",
       NerTag::problem,
       {"diabetic ketoacidosis", "dka", "ketoacidosis", "euglycemic dka", "micu admission for dka"},
       {"anion gap acidosis", "serum ketones"}},
      {"LABEL-07",
       NerTag::problem,
       {"anemia", "iron deficiency anemia", "low hemoglobin"},
       {"ferrous sulfate", "blood transfusion"}},
      {"LABEL-08",
       NerTag::problem,
       {"hypertension", "high blood pressure", "essential hypertension"},
       {"lisinopril", "amlodipine"}},
      {"LABEL-09",
       NerTag::problem,
       {"tobacco use", "current smoker", "cigarette smoking"},
       {"nicotine patch", "smoking cessation"}},
      {"LABEL-10",
       NerTag::problem,
       {"alcohol abuse", "heavy drinking", "alcohol dependence"},
       {"cage questionnaire", "detox program"}},
      {"LABEL-11",
       NerTag::treatment,
       {"hemodialysis", "peritoneal dialysis", "dialysis dependence"},
       {"av fistula", "renal replacement therapy"}},
      {"LABEL-12",
       NerTag::problem,
       {"stroke", "cerebrovascular accident", "ischemic stroke"},
       {"tpa", "neurology consult"}},
      {"LABEL-13",
       NerTag::problem,
       {"obesity", "morbid obesity", "bmi over 40"},
       {"bariatric surgery", "weight loss program"}},
  };
  return profiles;
}

CueProfile cue_profile_for(const std::string& label) {
  const auto& all = builtin_cue_profiles();
  if (auto it = std::find_if(all.begin(), all.end(), [&](const CueProfile& p) { return p.label == label; });
      it != all.end()) {
    return *it;
  }
  std::string base;
  for (char c : label) base += c == '-' ? ' ' : static_cast<char>(c >= 'A' && c <= 'Z' ? c + 32 : c);
  return {label, NerTag::problem, {base + " finding", base + " criterion"}, {base + " workup"}};
}

LabelSchema default_schema() {
  std::vector<std::string> names;
  for (const auto& p : builtin_cue_profiles()) names.push_back(p.label);
  return LabelSchema(std::move(names));
}

std::vector<LabelConfig> default_label_configs() {
  auto gaz = [](const std::string& name) {
    return WindowSpec{name, gazetteer_phrases(name), 5, 2.0, ""};
  };
  auto trig = [](const std::string& owner, std::vector<std::string> words) {
    return WindowSpec{owner, std::move(words), 5, 2.0, ""};
  };
  std::vector<LabelConfig> configs;
  const auto schema = default_schema();
  for (const auto& name : schema.names()) {
    LabelConfig c;
    c.label = name;
    if (name == "ADVANCED-CAD") {
      c.gazetteers.push_back(gaz("cardiac-disease"));
    } else if (name == "ASP-FOR-MI") {
      c.gazetteers.push_back(gaz("antiplatelet-mi"));
      c.triggers.push_back(trig(name, {"aspirin", "asa", "myocardial infarction"}));
      c.imports = {"CREATININE"};
    } else if (name == "CREATININE") {
      c.triggers.push_back(trig(name, {"creatinine", "cr"}));
    } else if (name == "DIETSUPP") {
      c.gazetteers.push_back(gaz("diet-supplements"));
    } else if (name == "HBA1C") {
      c.triggers.push_back(trig(name, {"hba1c", "a1c", "hemoglobin a1c"}));
    } else if (name == "KETO-1YR") {
      c.gazetteers.push_back(gaz("ketoacidosis"));
      c.triggers.push_back(trig(name, {"ketoacidosis", "dka"}));
    }
    configs.push_back(std::move(c));
  }
  return configs;
}

Lexicon builtin_lexicon() {
  Lexicon lex;
  for (const auto& g : builtin_gazetteers()) {
    for (const auto& p : g.phrases) lex.emplace(p, g.tag);
  }
  for (const auto& p : builtin_cue_profiles()) {
    for (const auto& c : p.cues) lex.emplace(c, p.tag);
    for (const auto& s : p.support) lex.emplace(s, p.tag);
  }
  for (const char* t : {"blood pressure", "vital signs", "physical exam", "chest x ray", "ekg", "lipid panel",
                        "basic metabolic panel", "complete blood count"}) {
    lex.emplace(t, NerTag::test);
  }
  return lex;
}

}  // namespace cohortsel
