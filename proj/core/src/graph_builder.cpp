// SPDX-License-Identifier: Apache-2.0

#include <map>
#include <set>

#include <fmt/format.h>

#include "cohortkg/ingest.hpp"
#include "cohortkg/vocabulary.hpp"

namespace cohortkg::ingest {
namespace {

using kg::Graph;
using kg::Term;
namespace iri = kg::iri;

Term T(const std::string& value) { return Term::iri(value); }

const std::string& linking_property(Persistence persistence) {
  return persistence == Persistence::kProperty ? iri::kSioHasProperty
                                               : iri::kSioHasAttribute;
}

void add_statistic(Graph& g, const Term& owner, const std::string& type, Term value) {
  Term node = g.new_blank();
  g.insert(owner, T(iri::kSioHasAttribute), node);
  g.insert(node, T(iri::kRdfType), T(type));
  g.insert(node, T(iri::kSioHasValue), std::move(value));
}

void add_characteristic(Graph& g, const Term& arm, const CharacteristicValue& value) {
  Term node = g.new_blank();
  g.insert(arm, T(linking_property(value.persistence)), node);
  g.insert(node, T(iri::kRdfType), T(value.characteristic));
  if (value.unit) g.insert(node, T(iri::kSioHasUnit), T(*value.unit));
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, MeanSd>) {
          add_statistic(g, node, iri::kSioMean, Term::decimal(s.mean));
          add_statistic(g, node, iri::kSioStandardDeviation, Term::decimal(s.sd));
        } else if constexpr (std::is_same_v<S, MedianIqr>) {
          add_statistic(g, node, iri::kSioMedian, Term::decimal(s.median));
          add_statistic(g, node, iri::kSioMinimalValue, Term::decimal(s.q1));
          add_statistic(g, node, iri::kSioMaximalValue, Term::decimal(s.q3));
        } else if constexpr (std::is_same_v<S, Percentage>) {
          add_statistic(g, node, iri::kScoPercentage, Term::decimal(s.value));
        } else {
          add_statistic(g, node, iri::kScoCount, Term::integer(s.value));
        }
      },
      value.statistic);
}

// Subset class: subclass of the arm and of one existential restriction per
// defining pair; the defining value is itself a subclass of its
// characteristic (sex_male ⊑ sex).
void add_subset(Graph& g, const StudyRecord& study, const StudyArmRecord& arm,
                const Term& arm_term, const SubsetRecord& subset,
                const std::map<std::string, Persistence>& persistence) {
  Term node = T(subset_iri(study, arm, subset));
  g.insert(node, T(iri::kRdfType), T(iri::kOwlClass));
  g.insert(node, T(iri::kRdfsSubClassOf), arm_term);
  for (const auto& pair : subset.defined_by) {
    auto it = persistence.find(pair.characteristic);
    const Persistence p = it == persistence.end() ? Persistence::kAttribute : it->second;
    Term restriction = g.new_blank();
    g.insert(node, T(iri::kRdfsSubClassOf), restriction);
    g.insert(restriction, T(iri::kRdfType), T(iri::kOwlRestriction));
    g.insert(restriction, T(iri::kOwlOnProperty), T(linking_property(p)));
    g.insert(restriction, T(iri::kOwlSomeValuesFrom), T(pair.value));
    g.insert(T(pair.value), T(iri::kRdfsSubClassOf), T(pair.characteristic));
  }
  add_statistic(g, node, iri::kScoPercentage, Term::decimal(subset.percentage));
}

void add_arm(Graph& g, const StudyRecord& study, const StudyArmRecord& arm) {
  Term node = T(arm_iri(study, arm));
  g.insert(node, T(iri::kRdfType), T(iri::kOwlClass));
  g.insert(node, T(iri::kRdfType),
           T(arm.kind == ArmKind::kIntervention ? iri::kScoInterventionArm
                                                : iri::kScoControlArm));
  g.insert(node, T(iri::kRdfsSubClassOf), T(iri::kSioStudySubject));
  g.insert(node, T(iri::kSioIsParticipantIn), T(study_iri(study)));
  add_statistic(g, node, iri::kScoPopulationSize, Term::integer(arm.population_size));
  std::map<std::string, Persistence> persistence;
  for (const auto& value : arm.characteristics) {
    add_characteristic(g, node, value);
    persistence.emplace(value.characteristic, value.persistence);
  }
  for (const auto& subset : arm.subsets) {
    add_subset(g, study, arm, node, subset, persistence);
  }
  if (!arm.description.empty()) {
    g.insert(node, T(iri::kRdfsComment), Term::string(arm.description));
  }
}

}  // namespace

kg::Graph build_graph(const StudyRecord& study) {
  if (auto violations = validate(study); !violations.empty()) {
    throw kg::ValidationError(fmt::format("study '{}': {}: {}", study.study_id,
                                          violations.front().path,
                                          violations.front().constraint));
  }
  Graph g;
  for (const auto& arm : study.arms) add_arm(g, study, arm);
  return g;
}

kg::Graph build_corpus_graph(const std::vector<StudyRecord>& studies) {
  Graph corpus;
  corpus.prefixes().set("dct", std::string(kg::ns::kDct));
  corpus.prefixes().set("hasco", std::string(kg::ns::kHasco));
  std::map<std::string, std::string> minted;  // IRI -> study_id
  std::set<std::string> ids;
  for (const auto& study : studies) {
    if (!ids.insert(study.study_id).second) {
      throw CorpusError(fmt::format("duplicate study_id '{}'", study.study_id));
    }
    std::vector<std::string> own{study_iri(study)};
    for (const auto& arm : study.arms) {
      own.push_back(arm_iri(study, arm));
      for (const auto& subset : arm.subsets) {
        own.push_back(subset_iri(study, arm, subset));
      }
    }
    for (const auto& iri : own) {
      auto [it, inserted] = minted.emplace(iri, study.study_id);
      if (!inserted && it->second != study.study_id) {
        throw CorpusError(fmt::format("IRI <{}> minted by studies '{}' and '{}'", iri,
                                      it->second, study.study_id));
      }
    }

    Graph g = build_graph(study);
    // Blank labels are per-study; rename into a corpus-wide space.
    std::map<std::string, Term> renamed;
    auto rename = [&](const Term& t) {
      if (!t.is_blank()) return t;
      auto it = renamed.find(t.value());
      if (it == renamed.end()) it = renamed.emplace(t.value(), corpus.new_blank()).first;
      return it->second;
    };
    for (const auto& t : g.triples()) {
      corpus.insert(rename(t.subject), t.predicate, rename(t.object));
    }

    Term study_node = T(study_iri(study));
    corpus.insert(study_node, T(iri::kRdfType), T(iri::kHascoResearchStudy));
    corpus.insert(study_node, T(iri::kDctIdentifier), Term::string(study.study_id));
    corpus.insert(study_node, T(iri::kDctTitle), Term::string(study.title));
    if (study.registry_link) {
      corpus.insert(study_node, T(iri::kDctSource), T(*study.registry_link));
    }
    for (const auto& arm : study.arms) {
      corpus.insert(T(arm_iri(study, arm)), T(iri::kDctIdentifier),
                    Term::string(arm.arm_id));
    }
  }
  return corpus;
}

}  // namespace cohortkg::ingest
