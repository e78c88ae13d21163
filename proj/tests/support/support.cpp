// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "cohortkg/vocabulary.hpp"

#ifndef COHORTKG_TEST_DATA_DIR
#error "COHORTKG_TEST_DATA_DIR must be defined"
#endif
#ifndef COHORTKG_TEST_GOLDEN_DIR
#error "COHORTKG_TEST_GOLDEN_DIR must be defined"
#endif

namespace cohortkg::testing {

using ingest::ArmKind;
using ingest::CharacteristicValue;
using ingest::Persistence;
using ingest::StatisticPattern;
using ingest::StudyArmRecord;
using ingest::StudyRecord;
using query::FeatureCriterion;

std::filesystem::path data_dir() { return COHORTKG_TEST_DATA_DIR; }
std::filesystem::path golden_dir() { return COHORTKG_TEST_GOLDEN_DIR; }
std::filesystem::path vocab_path() { return data_dir() / "vocab" / "sco-mini.ttl"; }
std::filesystem::path fixture_corpus_dir() { return data_dir() / "fixture_corpus"; }

const ingest::TermVocabulary& vocabulary() {
  static const ingest::TermVocabulary kVocab = ingest::TermVocabulary::load(vocab_path());
  return kVocab;
}

std::string sco(const std::string& local) { return std::string(kg::ns::kSco) + local; }
std::string sio(const std::string& local) { return std::string(kg::ns::kSio) + local; }

StudyRecord ramipril_study() {
  StudyRecord study;
  study.study_id = "TelmisartanRamipril";
  study.title = "Telmisartan, ramipril, or both in patients at high risk for vascular events";
  StudyArmRecord arm;
  arm.arm_id = "Ramipril";
  arm.iri = std::string(kg::ns::kScoI) + "RamiprilArm";
  arm.kind = ArmKind::kIntervention;
  arm.population_size = 8576;
  arm.characteristics.push_back(
      {sio("Age"), Persistence::kAttribute, sio("Year"), ingest::MeanSd{66.4, 7.2}});
  study.arms.push_back(std::move(arm));
  return study;
}

// --- random corpora -------------------------------------------------------

namespace {

struct PoolEntry {
  std::string iri;
  enum Kind { kContinuous, kPercent, kDrug, kCount } kind;
  std::string unit;
  double center = 0;
  double spread = 0;
};

const std::vector<PoolEntry>& pool() {
  static const std::vector<PoolEntry> kPool = {
      {sio("Age"), PoolEntry::kContinuous, sio("Year"), 60, 6},
      {sco("BodyMassIndex"), PoolEntry::kContinuous, sco("KilogramPerSquareMeter"), 30, 4},
      {sco("SystolicBloodPressure"), PoolEntry::kContinuous, sco("MillimeterOfMercury"), 135, 15},
      {sco("HbA1c"), PoolEntry::kContinuous, sco("Percent"), 8, 1},
      {sco("Male"), PoolEntry::kPercent, "", 50, 20},
      {sco("Female"), PoolEntry::kPercent, "", 50, 20},
      {sco("AfricanAmerican"), PoolEntry::kPercent, "", 12, 8},
      {sco("White"), PoolEntry::kPercent, "", 70, 15},
      {sco("CurrentSmoker"), PoolEntry::kPercent, "", 15, 8},
      {sco("Metformin"), PoolEntry::kDrug, "", 80, 20},
      {sco("Biguanide"), PoolEntry::kDrug, "", 80, 20},
      {sco("Glimepiride"), PoolEntry::kDrug, "", 60, 30},
      {sco("Empagliflozin"), PoolEntry::kDrug, "", 90, 10},
      {sco("Placebo"), PoolEntry::kDrug, "", 100, 0},
      {sco("Type2Diabetes"), PoolEntry::kDrug, "", 90, 10},
      {sco("Stroke"), PoolEntry::kCount, "", 40, 30},
  };
  return kPool;
}

struct SubsetPair {
  std::string characteristic;
  std::string value;
};

const std::vector<SubsetPair>& subset_pairs() {
  static const std::vector<SubsetPair> kPairs = {
      {sco("Sex"), sco("Male")},
      {sco("Sex"), sco("Female")},
      {sco("Race"), sco("AfricanAmerican")},
      {sco("Race"), sco("White")},
  };
  return kPairs;
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// One decimal, so equality thresholds get hit now and then.
double tenths(Rng& rng, double center, double spread) {
  const double x = std::normal_distribution<double>(center, spread)(rng);
  return std::round(x * 10.0) / 10.0;
}

double percent(Rng& rng, double center, double spread) {
  return std::clamp(tenths(rng, center, spread), 0.0, 100.0);
}

CharacteristicValue random_value(Rng& rng, const PoolEntry& e) {
  CharacteristicValue v;
  v.characteristic = e.iri;
  switch (e.kind) {
    case PoolEntry::kContinuous: {
      v.unit = e.unit;
      if (chance(rng, 0.7)) {
        v.statistic = ingest::MeanSd{tenths(rng, e.center, e.spread / 2),
                                     std::abs(tenths(rng, e.spread, e.spread / 3))};
      } else {
        double a = tenths(rng, e.center, e.spread);
        double b = tenths(rng, e.center, e.spread);
        double c = tenths(rng, e.center, e.spread);
        std::array<double, 3> q{a, b, c};
        std::sort(q.begin(), q.end());
        v.statistic = ingest::MedianIqr{q[1], q[0], q[2]};
      }
      break;
    }
    case PoolEntry::kPercent:
      v.statistic = ingest::Percentage{percent(rng, e.center, e.spread)};
      break;
    case PoolEntry::kDrug:
      v.persistence = Persistence::kProperty;
      v.statistic = ingest::Percentage{percent(rng, e.center, e.spread)};
      break;
    case PoolEntry::kCount:
      v.persistence = Persistence::kProperty;
      v.statistic = ingest::Count{uniform(rng, 0, 80)};
      break;
  }
  return v;
}

}  // namespace

std::vector<StudyRecord> random_corpus(Rng& rng, const CorpusShape& shape) {
  std::vector<StudyRecord> corpus;
  const int studies = uniform(rng, 0, shape.max_studies);
  for (int s = 0; s < studies; ++s) {
    StudyRecord study;
    study.study_id = "S" + std::to_string(s);
    study.title = "Random study " + std::to_string(s);
    if (chance(rng, 0.5)) {
      study.registry_link = "https://clinicaltrials.gov/ct2/show/NCT" + std::to_string(10000 + s);
    }
    // Arms of a study share most characteristics, with some drift.
    std::vector<const PoolEntry*> shared;
    for (const auto& e : pool()) {
      if (chance(rng, 0.5)) shared.push_back(&e);
    }
    const int arms = uniform(rng, 1, shape.max_arms);
    for (int a = 0; a < arms; ++a) {
      StudyArmRecord arm;
      arm.arm_id = "A" + std::to_string(a);
      arm.kind = chance(rng, 0.7) ? ArmKind::kIntervention : ArmKind::kControl;
      arm.population_size = uniform(rng, 0, 3000);
      for (const auto* e : shared) {
        if (chance(rng, 0.9)) arm.characteristics.push_back(random_value(rng, *e));
      }
      const int subsets = uniform(rng, 0, 3);
      for (int k = 0; k < subsets; ++k) {
        ingest::SubsetRecord subset;
        subset.subset_id = "G" + std::to_string(k);
        const auto& pairs = subset_pairs();
        const auto& first = pairs[static_cast<std::size_t>(uniform(rng, 0, 3))];
        subset.defined_by.push_back({first.characteristic, first.value});
        if (chance(rng, 0.6)) {
          // Second pair from the other characteristic.
          const int base = first.characteristic == sco("Sex") ? 2 : 0;
          const auto& second = pairs[static_cast<std::size_t>(base + uniform(rng, 0, 1))];
          subset.defined_by.push_back({second.characteristic, second.value});
        }
        subset.percentage = percent(rng, 10, 10);
        arm.subsets.push_back(std::move(subset));
      }
      study.arms.push_back(std::move(arm));
    }
    corpus.push_back(std::move(study));
  }
  return corpus;
}

FeatureCriterion random_match_criterion(Rng& rng) {
  FeatureCriterion c;
  const int kind = uniform(rng, 0, 2);
  if (kind == 0) {
    query::HasSubsetWith test;
    for (const auto& p : subset_pairs()) {
      if (chance(rng, 0.4)) test.values.push_back(p.value);
    }
    if (test.values.empty() || chance(rng, 0.05)) test.values.push_back(sco("Asian"));
    const double mins[] = {0, 0, 2.5, 5, 10, 20};
    test.min_percentage = mins[uniform(rng, 0, 5)];
    const int which = uniform(rng, 0, 3);
    if (which == 1) c.characteristic = sco("Sex");
    if (which == 2) c.characteristic = sco("Race");
    c.test = test;
    return c;
  }
  const auto& entries = pool();
  const auto& e = entries[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(entries.size()) - 1))];
  c.characteristic = chance(rng, 0.05) ? sco("HeartRate") : e.iri;
  if (kind == 1) {
    query::StatisticBound test;
    test.which = static_cast<query::Quantity>(uniform(rng, 0, 3));
    test.op = static_cast<query::Comparison>(uniform(rng, 0, 3));
    test.threshold = std::round(tenths(rng, e.center, e.spread * 1.5));
    c.test = test;
  } else {
    c.test = query::HasCharacteristic{};
  }
  return c;
}

FeatureCriterion random_subgroup(Rng& rng) { return random_match_criterion(rng); }

query::QualityParams random_quality(Rng& rng) {
  static const std::vector<std::string> kFamilies = {
      sco("Guanidines"), sco("Biguanide"), sco("Metformin"),  sco("Sulfonylurea"),
      sco("SGLT2Inhibitor"), sco("Intervention"), sco("Placebo"), sco("Insulin")};
  static const std::vector<double> kFractions = {0.05, 0.25, 1.0 / 3.0, 0.5, 0.75, 1.0};
  query::QualityParams p;
  const std::int64_t mins[] = {0, 100, 500, 1000, 2500, 6000};
  p.min_cohort = mins[uniform(rng, 0, 5)];
  p.drug_family = kFamilies[static_cast<std::size_t>(uniform(rng, 0, 7))];
  p.arm_fraction = kFractions[static_cast<std::size_t>(uniform(rng, 0, 5))];
  return p;
}

// --- oracles --------------------------------------------------------------

namespace {

const CharacteristicValue* find_value(const StudyArmRecord& arm, const std::string& iri) {
  for (const auto& v : arm.characteristics) {
    if (v.characteristic == iri) return &v;
  }
  return nullptr;
}

std::optional<double> read_quantity(const StatisticPattern& s, query::Quantity q,
                                    const query::BoundRule& rule) {
  using query::Quantity;
  if (const auto* m = std::get_if<ingest::MeanSd>(&s)) {
    if (q == Quantity::kMean) return m->mean;
    if (q == Quantity::kUpperBound) return m->mean + rule.sd_multiplier * m->sd;
    if (q == Quantity::kLowerBound) return m->mean - rule.sd_multiplier * m->sd;
    return std::nullopt;
  }
  if (const auto* m = std::get_if<ingest::MedianIqr>(&s)) {
    if (q == Quantity::kMedian) return m->median;
    if (q == Quantity::kUpperBound) return m->q3;
    if (q == Quantity::kLowerBound) return m->q1;
    return std::nullopt;
  }
  if (const auto* p = std::get_if<ingest::Percentage>(&s)) return p->value;
  return static_cast<double>(std::get<ingest::Count>(s).value);
}

bool holds(double lhs, query::Comparison op, double rhs) {
  switch (op) {
    case query::Comparison::kLess: return lhs < rhs;
    case query::Comparison::kLessEqual: return lhs <= rhs;
    case query::Comparison::kGreater: return lhs > rhs;
    case query::Comparison::kGreaterEqual: return lhs >= rhs;
  }
  return false;
}

std::optional<double> best_subset(const StudyArmRecord& arm, const FeatureCriterion& c,
                                  const query::HasSubsetWith& t) {
  std::optional<double> best;
  for (const auto& s : arm.subsets) {
    if (s.percentage < t.min_percentage) continue;
    bool all = true;
    for (const auto& v : t.values) {
      bool found = false;
      for (const auto& p : s.defined_by) found = found || p.value == v;
      all = all && found;
    }
    if (!all) continue;
    if (!c.characteristic.empty()) {
      bool found = false;
      for (const auto& p : s.defined_by) found = found || p.characteristic == c.characteristic;
      if (!found) continue;
    }
    if (!best || s.percentage > *best) best = s.percentage;
  }
  return best;
}

bool satisfies(const StudyArmRecord& arm, const FeatureCriterion& c,
               const query::BoundRule& rule) {
  if (const auto* t = std::get_if<query::HasSubsetWith>(&c.test)) {
    return best_subset(arm, c, *t).has_value();
  }
  const auto* v = find_value(arm, c.characteristic);
  if (!v) return false;
  if (const auto* t = std::get_if<query::StatisticBound>(&c.test)) {
    auto q = read_quantity(v->statistic, t->which, rule);
    return q && holds(*q, t->op, t->threshold);
  }
  return true;
}

}  // namespace

ArmSets oracle_match(const std::vector<StudyRecord>& corpus,
                     const std::vector<FeatureCriterion>& criteria, bool conjunctive,
                     const query::BoundRule& rule) {
  ArmSets out;
  for (const auto& study : corpus) {
    std::vector<std::string> arms;
    for (const auto& arm : study.arms) {
      std::size_t n = 0;
      for (const auto& c : criteria) n += satisfies(arm, c, rule) ? 1 : 0;
      if (conjunctive ? n == criteria.size() : n > 0) arms.push_back(arm.arm_id);
    }
    std::sort(arms.begin(), arms.end());
    if (!arms.empty()) out[study.study_id] = arms;
  }
  return out;
}

OracleLimitation oracle_limitation(const std::vector<StudyRecord>& corpus,
                                   const FeatureCriterion& subgroup,
                                   const query::LimitationOptions& options) {
  OracleLimitation out;
  const bool per_arm = std::holds_alternative<query::StatisticBound>(subgroup.test);
  for (const auto& study : corpus) {
    std::vector<std::string> arms;
    bool present = false;
    for (const auto& arm : study.arms) {
      bool represents = false;
      if (const auto* t = std::get_if<query::HasSubsetWith>(&subgroup.test)) {
        auto best = best_subset(arm, subgroup, *t);
        present = present || best.has_value();
        represents = best && *best >= options.underrepresentation_threshold;
      } else {
        present = present || find_value(arm, subgroup.characteristic) != nullptr;
        represents = satisfies(arm, subgroup, options.rule);
      }
      if (represents) arms.push_back(arm.arm_id);
      if (per_arm) {
        ++out.denominator;
        if (represents) ++out.numerator;
      }
    }
    std::sort(arms.begin(), arms.end());
    query::Representation status;
    if (!arms.empty()) {
      status = query::Representation::kRepresented;
      out.representing[study.study_id] = arms;
    } else if (!present) {
      status = query::Representation::kAbsent;
    } else {
      status = per_arm ? query::Representation::kUnmet : query::Representation::kUnderrepresented;
    }
    out.status[study.study_id] = status;
  }
  if (!per_arm) {
    out.numerator = static_cast<std::int64_t>(out.representing.size());
    out.denominator = static_cast<std::int64_t>(corpus.size());
  }
  return out;
}

std::set<std::string> naive_closure(const kg::Graph& graph, const std::string& root) {
  std::set<std::string> out{root};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& t : graph.triples()) {
      if (t.predicate.value() != kg::iri::kRdfsSubClassOf) continue;
      if (!t.subject.is_iri() || !t.object.is_iri()) continue;
      if (out.contains(t.object.value()) && out.insert(t.subject.value()).second) grew = true;
    }
  }
  return out;
}

ArmSets oracle_quality(const std::vector<StudyRecord>& corpus, const kg::Graph& vocabulary_graph,
                       const query::QualityParams& params) {
  const auto family = naive_closure(vocabulary_graph, params.drug_family);
  ArmSets out;
  for (const auto& study : corpus) {
    std::int64_t cohort = 0;
    for (const auto& arm : study.arms) cohort += arm.population_size;
    if (cohort < params.min_cohort) continue;
    std::vector<std::string> arms;
    for (const auto& arm : study.arms) {
      bool administered = false;
      for (const auto& v : arm.characteristics) {
        administered = administered || family.contains(v.characteristic);
      }
      if (administered && static_cast<double>(arm.population_size) >=
                              params.arm_fraction * static_cast<double>(cohort)) {
        arms.push_back(arm.arm_id);
      }
    }
    std::sort(arms.begin(), arms.end());
    if (!arms.empty()) out[study.study_id] = arms;
  }
  return out;
}

ArmSets arm_sets(const query::QueryReport& report) {
  ArmSets out;
  for (const auto& m : report.matches) {
    auto arms = m.arm_ids;
    std::sort(arms.begin(), arms.end());
    out[m.study_id] = arms;
  }
  return out;
}

// --- graph -> records -----------------------------------------------------

namespace {

using kg::Term;

std::vector<Term> objects(const kg::Graph& g, const Term& s, const std::string& p) {
  std::vector<Term> out;
  for (const auto& t : g.match({s, Term::iri(p), std::nullopt})) out.push_back(t.object);
  return out;
}

std::vector<Term> subjects(const kg::Graph& g, const std::string& p, const Term& o) {
  std::vector<Term> out;
  for (const auto& t : g.match({std::nullopt, Term::iri(p), o})) out.push_back(t.subject);
  return out;
}

std::optional<std::string> type_of(const kg::Graph& g, const Term& node) {
  auto types = objects(g, node, kg::iri::kRdfType);
  if (types.empty()) return std::nullopt;
  return types.front().value();
}

bool has_type(const kg::Graph& g, const Term& node, const std::string& type) {
  return g.contains({node, Term::iri(kg::iri::kRdfType), Term::iri(type)});
}

double number(const kg::Graph& g, const Term& node) {
  auto v = g.object_of(node, kg::iri::kSioHasValue);
  return v ? v->as_number().value_or(NAN) : NAN;
}

StatisticPattern read_statistic(const kg::Graph& g, const Term& node) {
  std::map<std::string, double> parts;
  for (const auto& child : objects(g, node, kg::iri::kSioHasAttribute)) {
    if (auto t = type_of(g, child)) parts[*t] = number(g, child);
  }
  auto get = [&](const std::string& k) { return parts.count(k) ? parts[k] : NAN; };
  if (parts.count(kg::iri::kSioMean)) {
    return ingest::MeanSd{get(kg::iri::kSioMean), get(kg::iri::kSioStandardDeviation)};
  }
  if (parts.count(kg::iri::kSioMedian)) {
    return ingest::MedianIqr{get(kg::iri::kSioMedian), get(kg::iri::kSioMinimalValue),
                             get(kg::iri::kSioMaximalValue)};
  }
  if (parts.count(kg::iri::kScoCount)) {
    return ingest::Count{static_cast<std::int64_t>(get(kg::iri::kScoCount))};
  }
  return ingest::Percentage{get(kg::iri::kScoPercentage)};
}

std::string strip(std::string text, const std::string& prefix, const std::string& suffix) {
  if (text.rfind(prefix, 0) == 0) text = text.substr(prefix.size());
  if (text.size() >= suffix.size() &&
      text.compare(text.size() - suffix.size(), suffix.size(), suffix) == 0) {
    text = text.substr(0, text.size() - suffix.size());
  }
  return text;
}

}  // namespace

std::vector<StudyRecord> records_from_graph(const kg::Graph& g) {
  std::vector<StudyRecord> out;
  for (const auto& s : subjects(g, kg::iri::kRdfType, Term::iri(kg::iri::kHascoResearchStudy))) {
    StudyRecord study;
    study.study_id = g.object_of(s, kg::iri::kDctIdentifier).value().value();
    if (auto t = g.object_of(s, kg::iri::kDctTitle)) study.title = t->value();
    if (auto r = g.object_of(s, kg::iri::kDctSource)) study.registry_link = r->value();
    for (const auto& a : subjects(g, kg::iri::kSioIsParticipantIn, s)) {
      StudyArmRecord arm;
      arm.arm_id = g.object_of(a, kg::iri::kDctIdentifier).value().value();
      arm.kind = has_type(g, a, kg::iri::kScoControlArm) ? ArmKind::kControl
                                                          : ArmKind::kIntervention;
      if (auto c = g.object_of(a, kg::iri::kRdfsComment)) arm.description = c->value();
      const std::string minted = ingest::arm_iri(study, arm);
      if (a.value() != minted) arm.iri = a.value();
      for (const auto& [pred, persistence] :
           {std::pair{kg::iri::kSioHasAttribute, Persistence::kAttribute},
            std::pair{kg::iri::kSioHasProperty, Persistence::kProperty}}) {
        for (const auto& node : objects(g, a, pred)) {
          const auto type = type_of(g, node).value_or("");
          if (type == kg::iri::kScoPopulationSize) {
            arm.population_size = static_cast<std::int64_t>(number(g, node));
            continue;
          }
          CharacteristicValue v;
          v.characteristic = type;
          v.persistence = persistence;
          if (auto u = g.object_of(node, kg::iri::kSioHasUnit)) v.unit = u->value();
          v.statistic = read_statistic(g, node);
          arm.characteristics.push_back(std::move(v));
        }
      }
      for (const auto& sub : subjects(g, kg::iri::kRdfsSubClassOf, a)) {
        if (!sub.is_iri()) continue;
        ingest::SubsetRecord subset;
        subset.subset_id = strip(sub.value(), a.value(), "Subset");
        for (const auto& parent : objects(g, sub, kg::iri::kRdfsSubClassOf)) {
          if (!parent.is_blank() || !has_type(g, parent, kg::iri::kOwlRestriction)) continue;
          const auto value = g.object_of(parent, kg::iri::kOwlSomeValuesFrom).value();
          std::string characteristic;
          if (auto c = g.object_of(value, kg::iri::kRdfsSubClassOf)) characteristic = c->value();
          subset.defined_by.push_back({characteristic, value.value()});
        }
        for (const auto& node : objects(g, sub, kg::iri::kSioHasAttribute)) {
          if (has_type(g, node, kg::iri::kScoPercentage)) subset.percentage = number(g, node);
        }
        arm.subsets.push_back(std::move(subset));
      }
      study.arms.push_back(std::move(arm));
    }
    out.push_back(std::move(study));
  }
  return normalized(std::move(out));
}

std::vector<StudyRecord> normalized(std::vector<StudyRecord> corpus) {
  for (auto& study : corpus) {
    for (auto& arm : study.arms) {
      std::sort(arm.characteristics.begin(), arm.characteristics.end(),
                [](const auto& a, const auto& b) { return a.characteristic < b.characteristic; });
      for (auto& s : arm.subsets) {
        std::sort(s.defined_by.begin(), s.defined_by.end(), [](const auto& a, const auto& b) {
          return std::tie(a.characteristic, a.value) < std::tie(b.characteristic, b.value);
        });
      }
      std::sort(arm.subsets.begin(), arm.subsets.end(),
                [](const auto& a, const auto& b) { return a.subset_id < b.subset_id; });
    }
    std::sort(study.arms.begin(), study.arms.end(),
              [](const auto& a, const auto& b) { return a.arm_id < b.arm_id; });
  }
  std::sort(corpus.begin(), corpus.end(),
            [](const auto& a, const auto& b) { return a.study_id < b.study_id; });
  return corpus;
}

// --- random graphs --------------------------------------------------------

kg::Graph random_graph(Rng& rng, int max_blanks) {
  static const std::string kEx = "http://example.org/g#";
  kg::Graph g;
  g.prefixes().set("ex", kEx);
  std::vector<Term> iris;
  for (int i = 0; i < 8; ++i) iris.push_back(Term::iri(kEx + "n" + std::to_string(i)));
  iris.push_back(Term::iri("http://other.example/path/with-dash_1"));
  iris.push_back(Term::iri(sco("Thing")));
  std::vector<Term> predicates = {Term::iri(kEx + "p"), Term::iri(kEx + "q"),
                                  Term::iri(kg::iri::kRdfType),
                                  Term::iri(kg::iri::kSioHasAttribute),
                                  Term::iri("http://other.example/rel")};
  static const std::vector<std::string> kStrings = {
      "plain", "with \"quotes\"", "back\\slash", "line\nbreak", "tab\there", "μg/dL é",
      "", "a;b,c.d [x] #hash"};
  auto literal = [&]() -> Term {
    switch (uniform(rng, 0, 5)) {
      case 0: return Term::integer(uniform(rng, -5000, 5000));
      case 1: return Term::decimal(std::uniform_real_distribution<double>(-1000, 1000)(rng));
      case 2: return Term::decimal(uniform(rng, -50, 50) / 10.0);
      case 3: return Term::string(kStrings[static_cast<std::size_t>(uniform(rng, 0, 7))], "en");
      case 4: return Term::literal("2020-01-0" + std::to_string(uniform(rng, 1, 9)),
                                   std::string(kg::ns::kXsd) + "date");
      default: return Term::string(kStrings[static_cast<std::size_t>(uniform(rng, 0, 7))]);
    }
  };
  const int blanks = uniform(rng, 0, max_blanks);
  std::vector<Term> nodes;
  for (int i = 0; i < blanks; ++i) nodes.push_back(Term::blank("r" + std::to_string(i)));
  auto pick = [&](const std::vector<Term>& v) { return v[rng() % v.size()]; };

  for (int i = 0; i < 4; ++i) g.insert(pick(iris), pick(predicates), literal());
  for (int i = 0; i < blanks; ++i) {
    const Term& b = nodes[static_cast<std::size_t>(i)];
    // In-references: none, one (inlinable), or several (shared).
    const int refs = chance(rng, 0.15) ? 0 : (chance(rng, 0.7) ? 1 : uniform(rng, 2, 3));
    for (int r = 0; r < refs; ++r) {
      Term subject = (i > 0 && chance(rng, 0.5)) ? nodes[rng() % static_cast<std::size_t>(i)]
                                                 : pick(iris);
      g.insert(subject, pick(predicates), b);
    }
    const int outs = uniform(rng, 0, 3);
    for (int o = 0; o < outs; ++o) {
      Term object = chance(rng, 0.5) ? literal() : pick(iris);
      g.insert(b, pick(predicates), object);
    }
    // Occasional back edge closes a cycle through blank nodes.
    if (i > 0 && chance(rng, 0.08)) {
      g.insert(b, pick(predicates), nodes[rng() % static_cast<std::size_t>(i)]);
    }
    if (refs == 0 && outs == 0) g.insert(b, pick(predicates), pick(iris));
  }
  return g;
}

// --- DAGs -----------------------------------------------------------------

Dag random_dag(Rng& rng, int max_classes) {
  Dag dag;
  const int n = uniform(rng, 1, max_classes);
  for (int i = 0; i < n; ++i) dag.classes.push_back("http://example.org/onto#C" + std::to_string(i));
  for (int i = 1; i < n; ++i) {
    const int parents = uniform(rng, 0, 3) == 0 ? 0 : uniform(rng, 1, 2);
    std::set<int> chosen;
    for (int k = 0; k < parents; ++k) chosen.insert(uniform(rng, 0, i - 1));
    for (int p : chosen) dag.edges.emplace_back(i, p);
  }
  return dag;
}

kg::Graph dag_graph(const Dag& dag) {
  kg::Graph g;
  g.prefixes().set("onto", "http://example.org/onto#");
  for (std::size_t i = 0; i < dag.classes.size(); ++i) {
    const Term c = Term::iri(dag.classes[i]);
    g.insert(c, Term::iri(kg::iri::kRdfType), Term::iri(kg::iri::kOwlClass));
    if (i % 3 == 0) g.insert(c, Term::iri(kg::iri::kRdfsLabel), Term::string("class " + std::to_string(i)));
  }
  for (auto [child, parent] : dag.edges) {
    g.insert(Term::iri(dag.classes[static_cast<std::size_t>(child)]),
             Term::iri(kg::iri::kRdfsSubClassOf),
             Term::iri(dag.classes[static_cast<std::size_t>(parent)]));
  }
  return g;
}

std::set<std::string> oracle_retained(const Dag& dag, const std::vector<int>& seeds) {
  const std::size_t n = dag.classes.size();
  std::vector<std::vector<int>> parents(n), children(n);
  for (auto [c, p] : dag.edges) {
    parents[static_cast<std::size_t>(c)].push_back(p);
    children[static_cast<std::size_t>(p)].push_back(c);
  }
  auto reach = [&](const std::vector<std::vector<int>>& adj) {
    std::vector<bool> in(n, false);
    for (int s : seeds) in[static_cast<std::size_t>(s)] = true;
    bool grew = true;
    while (grew) {
      grew = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (!in[i]) continue;
        for (int j : adj[i]) {
          if (!in[static_cast<std::size_t>(j)]) in[static_cast<std::size_t>(j)] = grew = true;
        }
      }
    }
    return in;
  };
  const auto up = reach(parents);
  const auto down = reach(children);
  std::set<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (up[i] || down[i]) out.insert(dag.classes[i]);
  }
  return out;
}

// --- API goldens ----------------------------------------------------------

const service::Api& fixture_api() {
  static const service::Api kApi = [] {
    service::ServerConfig config;
    config.corpus_dir = fixture_corpus_dir();
    config.patients_file = data_dir() / "patients" / "nhanes_sample.csv";
    config.vocab_file = vocab_path();
    return service::Api::load(config);
  }();
  return kApi;
}

std::vector<std::string> check_api_goldens(const service::Api& api, bool update) {
  using nlohmann::ordered_json;
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(golden_dir() / "api")) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<std::string> problems;
  if (files.empty()) problems.push_back("no golden files under " + (golden_dir() / "api").string());
  for (const auto& file : files) {
    std::ifstream in(file);
    ordered_json golden = ordered_json::parse(in);
    const auto& request = golden.at("request");
    const std::string body = request.contains("body") ? request["body"].dump() : std::string();
    const auto response = api.handle(request.at("method").get<std::string>(),
                                     request.at("path").get<std::string>(), body);
    if (update) {
      golden["status"] = response.status;
      golden["response"] = response.body;
      std::ofstream(file) << golden.dump(2) << "\n";
      continue;
    }
    const std::string name = file.filename().string();
    if (golden.at("status").get<int>() != response.status) {
      problems.push_back(name + ": status " + std::to_string(response.status) + ", expected " +
                         golden["status"].dump());
    }
    if (golden.at("response") != response.body) {
      problems.push_back(name + ": body differs: " + response.body.dump());
    }
  }
  return problems;
}

}  // namespace cohortkg::testing
