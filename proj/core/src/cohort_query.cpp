// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/cohort_query.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include <fmt/format.h>

#include "cohortkg/vocabulary.hpp"

namespace cohortkg::query {
namespace {

using ingest::StatisticPattern;

struct ArmResult {
  bool satisfied = false;
  std::vector<BoundValue> values;
};

const std::string& intervention_root() {
  static const std::string kRoot = std::string(kg::ns::kSco) + "Intervention";
  return kRoot;
}

std::string criterion_text(const FeatureCriterion& c, const CorpusView& corpus) {
  return std::visit(
      [&](const auto& test) -> std::string {
        using T = std::decay_t<decltype(test)>;
        if constexpr (std::is_same_v<T, HasSubsetWith>) {
          std::vector<std::string> names;
          for (const auto& v : test.values) names.push_back(corpus.compact(v));
          std::string out = fmt::format("subset with {}", fmt::join(names, " and "));
          if (!c.characteristic.empty()) {
            out += fmt::format(" on {}", corpus.compact(c.characteristic));
          }
          return out + fmt::format(" (>= {}%)", test.min_percentage);
        } else if constexpr (std::is_same_v<T, StatisticBound>) {
          return fmt::format("{}({}) {} {}", to_string(test.which),
                             corpus.compact(c.characteristic), to_string(test.op),
                             test.threshold);
        } else {
          return fmt::format("reports {}", corpus.compact(c.characteristic));
        }
      },
      c.test);
}

bool subset_matches(const ArmSubset& subset, const FeatureCriterion& c,
                    const HasSubsetWith& test) {
  if (!subset.percentage || *subset.percentage < test.min_percentage) return false;
  for (const auto& value : test.values) {
    const bool found = std::any_of(subset.defined_by.begin(), subset.defined_by.end(),
                                   [&](const ingest::DefiningPair& p) { return p.value == value; });
    if (!found) return false;
  }
  if (!c.characteristic.empty()) {
    return std::any_of(subset.defined_by.begin(), subset.defined_by.end(),
                       [&](const ingest::DefiningPair& p) {
                         return p.characteristic == c.characteristic;
                       });
  }
  return true;
}

// Largest matching subset percentage of the arm, if any subset matches.
std::optional<double> best_subset(const ArmView& arm, const FeatureCriterion& c,
                                  const HasSubsetWith& test) {
  std::optional<double> best;
  for (const auto& subset : arm.subsets) {
    if (subset_matches(subset, c, test)) best = std::max(best.value_or(-1.0), *subset.percentage);
  }
  return best;
}

ArmResult evaluate(const ArmView& arm, const FeatureCriterion& c, const BoundRule& rule) {
  ArmResult result;
  std::visit(
      [&](const auto& test) {
        using T = std::decay_t<decltype(test)>;
        if constexpr (std::is_same_v<T, HasSubsetWith>) {
          if (auto pct = best_subset(arm, c, test)) {
            result.satisfied = true;
            result.values.push_back({arm.arm_id, c.characteristic, "subset_percentage", *pct});
          }
        } else if constexpr (std::is_same_v<T, StatisticBound>) {
          const ArmCharacteristic* found = arm.find(c.characteristic);
          if (!found || !found->statistic) return;
          auto q = quantity_of(*found->statistic, test.which, rule);
          if (q && compare(*q, test.op, test.threshold)) {
            result.satisfied = true;
            result.values.push_back(
                {arm.arm_id, c.characteristic, std::string(to_string(test.which)), *q});
          }
        } else {
          result.satisfied = arm.find(c.characteristic) != nullptr;
        }
      },
      c.test);
  return result;
}

StudyMatch match_header(const StudyView& study) {
  StudyMatch m;
  m.study_id = study.study_id;
  m.title = study.title;
  m.registry_link = study.registry_link;
  return m;
}

void warn_unknown(const CorpusView& corpus, const FeatureCriterion& c,
                  std::vector<std::string>& warnings) {
  auto check = [&](const std::string& iri) {
    if (!iri.empty() && !corpus.mentions(iri)) {
      warnings.push_back(fmt::format("{} is not reported by any study", corpus.compact(iri)));
    }
  };
  check(c.characteristic);
  if (const auto* s = std::get_if<HasSubsetWith>(&c.test)) {
    for (const auto& v : s->values) check(v);
  }
}

void finish(QueryReport& report) {
  if (report.granularity == Granularity::kStudy) {
    report.numerator = static_cast<std::int64_t>(report.matches.size());
    report.denominator = report.corpus_size;
  }
  report.percentage = percentage_of(report.numerator, report.denominator);
}

// Ancestor directly below the intervention root; the class itself when it
// has no such ancestor.
std::string intervention_family(const ingest::TermVocabulary& vocabulary,
                                const std::string& iri) {
  std::deque<std::string> queue{iri};
  std::set<std::string> seen{iri};
  while (!queue.empty()) {
    std::string current = queue.front();
    queue.pop_front();
    for (const auto& parent : vocabulary.parents_of(current)) {
      if (parent == intervention_root()) return current;
      if (seen.insert(parent).second) queue.push_back(parent);
    }
  }
  return iri;
}

}  // namespace

std::string_view to_string(Quantity quantity) {
  switch (quantity) {
    case Quantity::kMean: return "mean";
    case Quantity::kMedian: return "median";
    case Quantity::kUpperBound: return "upper_bound";
    case Quantity::kLowerBound: return "lower_bound";
  }
  return "mean";
}

std::string_view to_string(Comparison op) {
  switch (op) {
    case Comparison::kLess: return "<";
    case Comparison::kLessEqual: return "<=";
    case Comparison::kGreater: return ">";
    case Comparison::kGreaterEqual: return ">=";
  }
  return "<";
}

std::optional<Quantity> parse_quantity(std::string_view text) {
  for (auto q : {Quantity::kMean, Quantity::kMedian, Quantity::kUpperBound,
                 Quantity::kLowerBound}) {
    if (text == to_string(q)) return q;
  }
  return std::nullopt;
}

std::optional<Comparison> parse_comparison(std::string_view text) {
  for (auto op : {Comparison::kLess, Comparison::kLessEqual, Comparison::kGreater,
                  Comparison::kGreaterEqual}) {
    if (text == to_string(op)) return op;
  }
  return std::nullopt;
}

bool compare(double lhs, Comparison op, double rhs) {
  switch (op) {
    case Comparison::kLess: return lhs < rhs;
    case Comparison::kLessEqual: return lhs <= rhs;
    case Comparison::kGreater: return lhs > rhs;
    case Comparison::kGreaterEqual: return lhs >= rhs;
  }
  return false;
}

std::string_view to_string(Granularity granularity) {
  return granularity == Granularity::kArm ? "arm" : "study";
}

std::string_view to_string(Representation representation) {
  switch (representation) {
    case Representation::kRepresented: return "represented";
    case Representation::kUnderrepresented: return "underrepresented";
    case Representation::kUnmet: return "unmet";
    case Representation::kAbsent: return "absent";
  }
  return "absent";
}

void validate(const FeatureCriterion& criterion) {
  std::visit(
      [&](const auto& test) {
        using T = std::decay_t<decltype(test)>;
        if constexpr (std::is_same_v<T, HasSubsetWith>) {
          if (!std::isfinite(test.min_percentage) || test.min_percentage < 0 ||
              test.min_percentage > 100) {
            throw QueryError("min_percentage must be within [0, 100]");
          }
          if (test.values.empty()) throw QueryError("has_subset_with needs at least one value");
        } else {
          if (criterion.characteristic.empty()) {
            throw QueryError("criterion needs a characteristic");
          }
          if constexpr (std::is_same_v<T, StatisticBound>) {
            if (!std::isfinite(test.threshold)) throw QueryError("threshold must be finite");
          }
        }
      },
      criterion.test);
}

std::optional<double> quantity_of(const StatisticPattern& statistic, Quantity which,
                                  const BoundRule& rule) {
  if (const auto* s = std::get_if<ingest::MeanSd>(&statistic)) {
    switch (which) {
      case Quantity::kMean: return s->mean;
      case Quantity::kMedian: return std::nullopt;
      case Quantity::kUpperBound: return s->mean + rule.sd_multiplier * s->sd;
      case Quantity::kLowerBound: return s->mean - rule.sd_multiplier * s->sd;
    }
  } else if (const auto* s = std::get_if<ingest::MedianIqr>(&statistic)) {
    switch (which) {
      case Quantity::kMean: return std::nullopt;
      case Quantity::kMedian: return s->median;
      case Quantity::kUpperBound: return s->q3;
      case Quantity::kLowerBound: return s->q1;
    }
  } else if (const auto* s = std::get_if<ingest::Percentage>(&statistic)) {
    return s->value;
  } else if (const auto* s = std::get_if<ingest::Count>(&statistic)) {
    return static_cast<double>(s->value);
  }
  return std::nullopt;
}

double percentage_of(std::int64_t numerator, std::int64_t denominator) {
  if (denominator <= 0) return 0.0;
  return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

QueryReport study_match(const CorpusView& corpus, const std::vector<FeatureCriterion>& criteria,
                        bool conjunctive, const BoundRule& rule) {
  if (criteria.empty()) throw QueryError("study_match needs at least one criterion");
  for (const auto& c : criteria) validate(c);
  QueryReport report;
  report.kind = "match";
  std::vector<std::string> parts;
  for (const auto& c : criteria) parts.push_back(criterion_text(c, corpus));
  report.question = fmt::format("{}", fmt::join(parts, conjunctive ? " AND " : " OR "));
  report.corpus_size = static_cast<std::int64_t>(corpus.size());
  for (const auto& c : criteria) warn_unknown(corpus, c, report.warnings);

  for (const auto& study : corpus.studies()) {
    StudyMatch m = match_header(study);
    for (const auto& arm : study.arms) {
      std::vector<BoundValue> values;
      std::size_t satisfied = 0;
      for (const auto& c : criteria) {
        ArmResult r = evaluate(arm, c, rule);
        if (r.satisfied) {
          ++satisfied;
          values.insert(values.end(), r.values.begin(), r.values.end());
        }
      }
      const bool ok = conjunctive ? satisfied == criteria.size() : satisfied > 0;
      if (ok) {
        m.arm_ids.push_back(arm.arm_id);
        m.values.insert(m.values.end(), values.begin(), values.end());
      }
    }
    if (!m.arm_ids.empty()) report.matches.push_back(std::move(m));
  }
  finish(report);
  return report;
}

QueryReport study_match(const kg::Graph& corpus, const std::vector<FeatureCriterion>& criteria,
                        bool conjunctive, const BoundRule& rule) {
  return study_match(CorpusView(corpus), criteria, conjunctive, rule);
}

QueryReport study_limitation(const CorpusView& corpus, const FeatureCriterion& subgroup,
                             const LimitationOptions& options) {
  validate(subgroup);
  if (!std::isfinite(options.underrepresentation_threshold) ||
      options.underrepresentation_threshold < 0 || options.underrepresentation_threshold > 100) {
    throw QueryError("underrepresentation_threshold must be within [0, 100]");
  }
  QueryReport report;
  report.kind = "limitation";
  report.question = criterion_text(subgroup, corpus);
  report.corpus_size = static_cast<std::int64_t>(corpus.size());
  warn_unknown(corpus, subgroup, report.warnings);
  const bool per_arm = std::holds_alternative<StatisticBound>(subgroup.test);
  report.granularity = per_arm ? Granularity::kArm : Granularity::kStudy;

  for (const auto& study : corpus.studies()) {
    StudyRepresentation row;
    row.study_id = study.study_id;
    StudyMatch m = match_header(study);
    bool present = false;
    for (const auto& arm : study.arms) {
      ArmResult r = evaluate(arm, subgroup, options.rule);
      bool represents = r.satisfied;
      if (const auto* test = std::get_if<HasSubsetWith>(&subgroup.test); test && r.satisfied) {
        present = true;
        represents = r.values.front().value >= options.underrepresentation_threshold;
      } else if (per_arm || std::holds_alternative<HasCharacteristic>(subgroup.test)) {
        present = present || arm.find(subgroup.characteristic) != nullptr;
      }
      if (per_arm) ++report.denominator;
      if (represents) {
        row.representing_arms.push_back(arm.arm_id);
        m.arm_ids.push_back(arm.arm_id);
        m.values.insert(m.values.end(), r.values.begin(), r.values.end());
        if (per_arm) ++report.numerator;
      } else {
        row.other_arms.push_back(arm.arm_id);
      }
    }
    if (!row.representing_arms.empty()) {
      row.status = Representation::kRepresented;
    } else if (!present) {
      row.status = Representation::kAbsent;
    } else {
      row.status = per_arm ? Representation::kUnmet : Representation::kUnderrepresented;
    }
    report.representation.push_back(std::move(row));
    if (!m.arm_ids.empty()) report.matches.push_back(std::move(m));
  }
  finish(report);
  return report;
}

QueryReport study_limitation(const kg::Graph& corpus, const FeatureCriterion& subgroup,
                             const LimitationOptions& options) {
  return study_limitation(CorpusView(corpus), subgroup, options);
}

QueryReport study_quality(const CorpusView& corpus, const ingest::TermVocabulary& vocabulary,
                          const QualityParams& params) {
  if (params.min_cohort < 0) throw QueryError("min_cohort must be >= 0");
  if (!std::isfinite(params.arm_fraction) || params.arm_fraction <= 0 ||
      params.arm_fraction > 1) {
    throw QueryError("arm_fraction must satisfy 0 < f <= 1");
  }
  if (params.drug_family.empty() || !vocabulary.contains_class(params.drug_family)) {
    throw QueryError(fmt::format("drug family <{}> is not in the vocabulary",
                                 params.drug_family));
  }
  Closure closure = drug_family_closure(vocabulary.graph(), params.drug_family);

  QueryReport report;
  report.kind = "quality";
  report.question = fmt::format("cohort >= {} and an arm of {} with size >= {} of the cohort",
                                params.min_cohort, corpus.compact(params.drug_family),
                                params.arm_fraction);
  report.corpus_size = static_cast<std::int64_t>(corpus.size());
  report.warnings = closure.warnings;

  for (const auto& study : corpus.studies()) {
    const std::int64_t cohort = study.cohort_size();
    if (cohort < params.min_cohort) continue;
    StudyMatch m = match_header(study);
    std::set<std::string> families;
    for (const auto& arm : study.arms) {
      bool administered = false;
      for (const auto& c : arm.characteristics) {
        if (vocabulary.family_of(c.characteristic) == ingest::Family::kIntervention) {
          families.insert(intervention_family(vocabulary, c.characteristic));
        }
        if (closure.members.contains(c.characteristic)) administered = true;
      }
      const bool large = static_cast<double>(arm.population_size) >=
                         params.arm_fraction * static_cast<double>(cohort);
      if (administered && large) {
        m.arm_ids.push_back(arm.arm_id);
        m.values.push_back({arm.arm_id, "", "population_size",
                            static_cast<double>(arm.population_size)});
      }
    }
    if (m.arm_ids.empty()) continue;
    m.values.insert(m.values.begin(), BoundValue{"", "", "cohort_size", static_cast<double>(cohort)});
    m.cohort_size = cohort;
    m.intervention_families = static_cast<std::int64_t>(families.size());
    report.matches.push_back(std::move(m));
  }
  finish(report);
  return report;
}

QueryReport study_quality(const kg::Graph& corpus, const ingest::TermVocabulary& vocabulary,
                          const QualityParams& params) {
  return study_quality(CorpusView(corpus), vocabulary, params);
}

Closure drug_family_closure(const kg::Graph& vocabulary, const std::string& family) {
  std::map<std::string, std::vector<std::string>> children;
  bool known = false;
  for (const auto& t : vocabulary.triples()) {
    if (t.subject.is_iri() && t.subject.value() == family) known = true;
    if (t.predicate.value() != kg::iri::kRdfsSubClassOf || !t.object.is_iri() ||
        !t.subject.is_iri()) {
      continue;
    }
    if (t.object.value() == family) known = true;
    children[t.object.value()].push_back(t.subject.value());
  }
  Closure closure;
  closure.members.insert(family);
  if (!known) {
    closure.warnings.push_back(
        fmt::format("class <{}> not found in the vocabulary; closure is the class itself", family));
    return closure;
  }
  std::deque<std::string> queue{family};
  while (!queue.empty()) {
    std::string current = queue.front();
    queue.pop_front();
    auto it = children.find(current);
    if (it == children.end()) continue;
    for (const auto& child : it->second) {
      if (closure.members.insert(child).second) queue.push_back(child);
    }
  }
  return closure;
}

}  // namespace cohortkg::query
