// SPDX-License-Identifier: Apache-2.0
//
// Ingestion-side records for one study's Table 1: columns are arms, rows are
// characteristics, cells are descriptive statistics.

#ifndef COHORTKG_STUDY_HPP_
#define COHORTKG_STUDY_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cohortkg::ingest {

enum class ArmKind { kIntervention, kControl };
// Property is for states that persist over time (diseases, interventions).
enum class Persistence { kAttribute, kProperty };

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;
  friend bool operator==(const MeanSd&, const MeanSd&) = default;
};

struct MedianIqr {
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  friend bool operator==(const MedianIqr&, const MedianIqr&) = default;
};

struct Percentage {
  double value = 0.0;
  friend bool operator==(const Percentage&, const Percentage&) = default;
};

struct Count {
  std::int64_t value = 0;
  friend bool operator==(const Count&, const Count&) = default;
};

using StatisticPattern = std::variant<MeanSd, MedianIqr, Percentage, Count>;

struct CharacteristicValue {
  std::string characteristic;  // class IRI
  Persistence persistence = Persistence::kAttribute;
  std::optional<std::string> unit;  // unit IRI
  StatisticPattern statistic;
  friend bool operator==(const CharacteristicValue&,
                         const CharacteristicValue&) = default;
};

struct DefiningPair {
  std::string characteristic;  // e.g. sex
  std::string value;           // e.g. male
  friend bool operator==(const DefiningPair&, const DefiningPair&) = default;
};

struct SubsetRecord {
  std::string subset_id;
  std::vector<DefiningPair> defined_by;
  double percentage = 0.0;
  friend bool operator==(const SubsetRecord&, const SubsetRecord&) = default;
};

struct StudyArmRecord {
  std::string arm_id;
  ArmKind kind = ArmKind::kIntervention;
  std::int64_t population_size = 0;
  std::vector<CharacteristicValue> characteristics;
  std::vector<SubsetRecord> subsets;
  // Explicit arm IRI; empty means the minted default.
  std::string iri;
  // Free-text arm descriptors (dosage, titration targets, follow-up).
  std::string description;
  friend bool operator==(const StudyArmRecord&, const StudyArmRecord&) = default;
};

struct StudyRecord {
  std::string study_id;
  std::string title;
  std::optional<std::string> registry_link;
  std::vector<StudyArmRecord> arms;
  friend bool operator==(const StudyRecord&, const StudyRecord&) = default;
};

std::string_view to_string(ArmKind kind);
std::string_view to_string(Persistence persistence);

// One violated constraint, located by a JSON-pointer-like field path such as
// "arms[0].characteristics[2].statistic.sd".
struct Violation {
  std::string path;
  std::string constraint;
};

// Checks every record-level invariant. An empty result means valid.
std::vector<Violation> validate(const StudyRecord& study);

// Identifiers become IRI fragments, so they are restricted to
// [A-Za-z0-9_-] and must be non-empty.
bool valid_identifier(std::string_view id);

// IRI minting: study `sco-i:<StudyId>Study`, arm `sco-i:<StudyId><ArmId>Arm`
// unless the arm carries an explicit IRI, subset `<arm IRI><SubsetId>Subset`.
std::string study_iri(const StudyRecord& study);
std::string arm_iri(const StudyRecord& study, const StudyArmRecord& arm);
std::string subset_iri(const StudyRecord& study, const StudyArmRecord& arm,
                       const SubsetRecord& subset);

}  // namespace cohortkg::ingest

#endif  // COHORTKG_STUDY_HPP_
