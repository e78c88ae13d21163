// SPDX-License-Identifier: Apache-2.0
//
// Read-side projection of a corpus graph: studies, arms, characteristic
// nodes with their statistics, and subsets, all recovered from triples.

#ifndef COHORTKG_CORPUS_VIEW_HPP_
#define COHORTKG_CORPUS_VIEW_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohortkg/graph.hpp"
#include "cohortkg/study.hpp"

namespace cohortkg::query {

struct ArmCharacteristic {
  std::string characteristic;  // class IRI
  ingest::Persistence persistence = ingest::Persistence::kAttribute;
  std::optional<std::string> unit;
  // Empty when the node carries no recognizable statistic pattern.
  std::optional<ingest::StatisticPattern> statistic;
};

struct ArmSubset {
  std::string iri;
  // characteristic may be empty when the value class has no asserted
  // superclass in the corpus graph.
  std::vector<ingest::DefiningPair> defined_by;
  std::optional<double> percentage;
};

struct ArmView {
  std::string iri;
  std::string arm_id;
  ingest::ArmKind kind = ingest::ArmKind::kIntervention;
  std::int64_t population_size = 0;
  std::vector<ArmCharacteristic> characteristics;
  std::vector<ArmSubset> subsets;

  const ArmCharacteristic* find(const std::string& characteristic) const;
};

struct StudyView {
  std::string iri;
  std::string study_id;
  std::string title;
  std::optional<std::string> registry_link;
  std::vector<ArmView> arms;  // ordered by arm_id

  // SUM of arm population sizes.
  std::int64_t cohort_size() const;
  const ArmView* find_arm(const std::string& arm_id) const;
};

class CorpusView {
 public:
  CorpusView() = default;
  explicit CorpusView(const kg::Graph& graph);

  const std::vector<StudyView>& studies() const { return studies_; }
  std::size_t size() const { return studies_.size(); }
  std::size_t arm_count() const;
  const StudyView* find(const std::string& study_id) const;
  const kg::PrefixMap& prefixes() const { return prefixes_; }

  // True when some arm reports the class as a characteristic, a subset
  // defining characteristic, or a subset defining value.
  bool mentions(const std::string& iri) const;

  // IRI -> CURIE when a prefix fits.
  std::string compact(const std::string& iri) const;

 private:
  std::vector<StudyView> studies_;
  kg::PrefixMap prefixes_;
};

}  // namespace cohortkg::query

#endif  // COHORTKG_CORPUS_VIEW_HPP_
