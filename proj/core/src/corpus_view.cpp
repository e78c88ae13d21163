// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/corpus_view.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cohortkg/vocabulary.hpp"

namespace cohortkg::query {
namespace {

using kg::Graph;
using kg::Term;
namespace iri = kg::iri;

Term T(const std::string& value) { return Term::iri(value); }

bool ends_with(std::string_view text, std::string_view suffix) {
  return text.size() >= suffix.size() &&
         text.substr(text.size() - suffix.size()) == suffix;
}

std::vector<std::string> types_of(const Graph& g, const Term& node) {
  std::vector<std::string> out;
  for (const auto& t : g.match({node, T(iri::kRdfType), std::nullopt})) {
    if (t.object.is_iri()) out.push_back(t.object.value());
  }
  return out;
}

bool has_type(const Graph& g, const Term& node, const std::string& type) {
  return g.contains({node, T(iri::kRdfType), T(type)});
}

std::optional<double> value_of(const Graph& g, const Term& node) {
  if (auto v = g.object_of(node, iri::kSioHasValue)) return v->as_number();
  return std::nullopt;
}

std::optional<std::string> literal_of(const Graph& g, const Term& node,
                                      const std::string& predicate) {
  auto v = g.object_of(node, predicate);
  if (v && v->is_literal()) return v->value();
  return std::nullopt;
}

// Statistic children (via sio:hasAttribute) keyed by their type.
std::map<std::string, double> statistics_of(const Graph& g, const Term& node) {
  std::map<std::string, double> out;
  for (const auto& t : g.match({node, T(iri::kSioHasAttribute), std::nullopt})) {
    auto value = value_of(g, t.object);
    if (!value) continue;
    for (const auto& type : types_of(g, t.object)) out.emplace(type, *value);
  }
  return out;
}

std::optional<ingest::StatisticPattern> pattern_of(const std::map<std::string, double>& s) {
  auto get = [&](const std::string& k) -> std::optional<double> {
    auto it = s.find(k);
    if (it == s.end()) return std::nullopt;
    return it->second;
  };
  if (auto mean = get(iri::kSioMean), sd = get(iri::kSioStandardDeviation);
      mean && sd) {
    return ingest::MeanSd{*mean, *sd};
  }
  if (auto median = get(iri::kSioMedian), q1 = get(iri::kSioMinimalValue),
      q3 = get(iri::kSioMaximalValue);
      median && q1 && q3) {
    return ingest::MedianIqr{*median, *q1, *q3};
  }
  if (auto pct = get(iri::kScoPercentage)) return ingest::Percentage{*pct};
  if (auto count = get(iri::kScoCount)) {
    return ingest::Count{static_cast<std::int64_t>(std::llround(*count))};
  }
  return std::nullopt;
}

std::string study_id_from(const Graph& g, const Term& study) {
  if (auto id = literal_of(g, study, iri::kDctIdentifier)) return *id;
  std::string_view local = study.value();
  if (local.starts_with(kg::ns::kScoI)) local.remove_prefix(kg::ns::kScoI.size());
  if (ends_with(local, "Study")) local.remove_suffix(5);
  return std::string(local);
}

std::string arm_id_from(const Graph& g, const Term& arm, const std::string& study_id) {
  if (auto id = literal_of(g, arm, iri::kDctIdentifier)) return *id;
  std::string_view local = arm.value();
  if (local.starts_with(kg::ns::kScoI)) local.remove_prefix(kg::ns::kScoI.size());
  if (local.starts_with(study_id) && local.size() > study_id.size()) {
    local.remove_prefix(study_id.size());
  }
  if (ends_with(local, "Arm")) local.remove_suffix(3);
  return std::string(local);
}

ArmView read_arm(const Graph& g, const Term& arm, const std::string& study_id) {
  ArmView view;
  view.iri = arm.value();
  view.arm_id = arm_id_from(g, arm, study_id);
  view.kind = has_type(g, arm, iri::kScoControlArm) ? ingest::ArmKind::kControl
                                                    : ingest::ArmKind::kIntervention;
  for (const auto& t : g.match({arm, T(iri::kSioHasAttribute), std::nullopt},
                               {.expand_subproperties = true})) {
    const Term& node = t.object;
    if (node.is_literal()) continue;
    if (has_type(g, node, iri::kScoPopulationSize)) {
      if (auto v = value_of(g, node)) {
        view.population_size = static_cast<std::int64_t>(std::llround(*v));
      }
      continue;
    }
    const auto types = types_of(g, node);
    if (types.empty()) continue;
    ArmCharacteristic c;
    c.characteristic = types.front();
    c.persistence = t.predicate.value() == iri::kSioHasProperty
                        ? ingest::Persistence::kProperty
                        : ingest::Persistence::kAttribute;
    if (auto unit = g.object_of(node, iri::kSioHasUnit); unit && unit->is_iri()) {
      c.unit = unit->value();
    }
    c.statistic = pattern_of(statistics_of(g, node));
    view.characteristics.push_back(std::move(c));
  }
  for (const auto& t : g.match({std::nullopt, T(iri::kRdfsSubClassOf), arm})) {
    const Term& subset = t.subject;
    ArmSubset s;
    s.iri = subset.value();
    for (const auto& edge : g.match({subset, T(iri::kRdfsSubClassOf), std::nullopt})) {
      const Term& restriction = edge.object;
      if (!has_type(g, restriction, iri::kOwlRestriction)) continue;
      auto value = g.object_of(restriction, iri::kOwlSomeValuesFrom);
      if (!value || !value->is_iri()) continue;
      auto parent = g.object_of(*value, iri::kRdfsSubClassOf);
      s.defined_by.push_back(
          {parent && parent->is_iri() ? parent->value() : std::string(), value->value()});
    }
    const auto stats = statistics_of(g, subset);
    if (auto it = stats.find(iri::kScoPercentage); it != stats.end()) {
      s.percentage = it->second;
    }
    view.subsets.push_back(std::move(s));
  }
  std::sort(view.subsets.begin(), view.subsets.end(),
            [](const ArmSubset& a, const ArmSubset& b) { return a.iri < b.iri; });
  return view;
}

}  // namespace

const ArmCharacteristic* ArmView::find(const std::string& characteristic) const {
  for (const auto& c : characteristics) {
    if (c.characteristic == characteristic) return &c;
  }
  return nullptr;
}

std::int64_t StudyView::cohort_size() const {
  std::int64_t total = 0;
  for (const auto& arm : arms) total += arm.population_size;
  return total;
}

const ArmView* StudyView::find_arm(const std::string& arm_id) const {
  for (const auto& arm : arms) {
    if (arm.arm_id == arm_id) return &arm;
  }
  return nullptr;
}

CorpusView::CorpusView(const kg::Graph& graph) : prefixes_(graph.prefixes()) {
  std::vector<Term> study_terms;
  std::set<Term> seen;
  for (const auto& t :
       graph.match({std::nullopt, T(iri::kRdfType), T(iri::kHascoResearchStudy)})) {
    if (seen.insert(t.subject).second) study_terms.push_back(t.subject);
  }
  for (const auto& t : graph.match({std::nullopt, T(iri::kSioIsParticipantIn), std::nullopt})) {
    if (!t.object.is_literal() && seen.insert(t.object).second) {
      study_terms.push_back(t.object);
    }
  }
  for (const auto& study : study_terms) {
    StudyView view;
    view.iri = study.value();
    view.study_id = study_id_from(graph, study);
    view.title = literal_of(graph, study, iri::kDctTitle).value_or("");
    if (auto link = graph.object_of(study, iri::kDctSource)) view.registry_link = link->value();
    for (const auto& t : graph.match({std::nullopt, T(iri::kSioIsParticipantIn), study})) {
      view.arms.push_back(read_arm(graph, t.subject, view.study_id));
    }
    std::sort(view.arms.begin(), view.arms.end(),
              [](const ArmView& a, const ArmView& b) { return a.arm_id < b.arm_id; });
    studies_.push_back(std::move(view));
  }
  std::sort(studies_.begin(), studies_.end(),
            [](const StudyView& a, const StudyView& b) { return a.study_id < b.study_id; });
}

std::size_t CorpusView::arm_count() const {
  std::size_t n = 0;
  for (const auto& s : studies_) n += s.arms.size();
  return n;
}

const StudyView* CorpusView::find(const std::string& study_id) const {
  auto it = std::lower_bound(
      studies_.begin(), studies_.end(), study_id,
      [](const StudyView& s, const std::string& id) { return s.study_id < id; });
  if (it == studies_.end() || it->study_id != study_id) return nullptr;
  return &*it;
}

bool CorpusView::mentions(const std::string& iri) const {
  for (const auto& study : studies_) {
    for (const auto& arm : study.arms) {
      if (arm.find(iri)) return true;
      for (const auto& subset : arm.subsets) {
        for (const auto& pair : subset.defined_by) {
          if (pair.characteristic == iri || pair.value == iri) return true;
        }
      }
    }
  }
  return false;
}

std::string CorpusView::compact(const std::string& iri) const {
  return prefixes_.compact(iri).value_or("<" + iri + ">");
}

}  // namespace cohortkg::query
