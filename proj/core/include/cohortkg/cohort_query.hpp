// SPDX-License-Identifier: Apache-2.0
//
// Competency queries over a corpus: study match, study limitation
// (subgroup representation), and study quality (cohort size, drug family).

#ifndef COHORTKG_COHORT_QUERY_HPP_
#define COHORTKG_COHORT_QUERY_HPP_

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cohortkg/corpus_view.hpp"
#include "cohortkg/graph.hpp"
#include "cohortkg/term_vocabulary.hpp"

namespace cohortkg::query {

// Bad query parameters (non-finite thresholds, fraction out of range,
// unresolvable drug family).
class QueryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Quantity { kMean, kMedian, kUpperBound, kLowerBound };
enum class Comparison { kLess, kLessEqual, kGreater, kGreaterEqual };

std::string_view to_string(Quantity quantity);
std::string_view to_string(Comparison op);  // "<", "<=", ...
std::optional<Quantity> parse_quantity(std::string_view text);
std::optional<Comparison> parse_comparison(std::string_view text);
bool compare(double lhs, Comparison op, double rhs);

// A subset whose defining values include every listed value and whose
// percentage is >= min_percentage.
struct HasSubsetWith {
  std::vector<std::string> values;
  double min_percentage = 0.0;
  friend bool operator==(const HasSubsetWith&, const HasSubsetWith&) = default;
};

struct StatisticBound {
  Quantity which = Quantity::kUpperBound;
  Comparison op = Comparison::kLess;
  double threshold = 0.0;
  friend bool operator==(const StatisticBound&, const StatisticBound&) = default;
};

struct HasCharacteristic {
  friend bool operator==(const HasCharacteristic&, const HasCharacteristic&) = default;
};

using CriterionTest = std::variant<HasSubsetWith, StatisticBound, HasCharacteristic>;

struct FeatureCriterion {
  // Required for StatisticBound and HasCharacteristic. For HasSubsetWith an
  // empty characteristic matches any defining characteristic; a non-empty
  // one must appear among the subset's defining characteristics.
  std::string characteristic;
  CriterionTest test;
  friend bool operator==(const FeatureCriterion&, const FeatureCriterion&) = default;
};

// Throws QueryError when thresholds are not finite or min_percentage is
// outside [0, 100].
void validate(const FeatureCriterion& criterion);

// Operationalization of "upper/lower bound" of an arm statistic:
// MeanSd -> mean +/- sd_multiplier * sd, MedianIqr -> q3 / q1.
struct BoundRule {
  double sd_multiplier = 2.0;
};

// The number a StatisticBound reads from a statistic, or nullopt when the
// pattern does not provide that quantity. Percentage and Count expose their
// single value under every quantity.
std::optional<double> quantity_of(const ingest::StatisticPattern& statistic,
                                  Quantity which, const BoundRule& rule = {});

enum class Granularity { kStudy, kArm };
std::string_view to_string(Granularity granularity);

enum class Representation { kRepresented, kUnderrepresented, kUnmet, kAbsent };
std::string_view to_string(Representation representation);

struct BoundValue {
  std::string arm_id;
  std::string characteristic;
  std::string quantity;  // e.g. "upper_bound", "subset_percentage", "cohort_size"
  double value = 0.0;
  friend bool operator==(const BoundValue&, const BoundValue&) = default;
};

struct StudyMatch {
  std::string study_id;
  std::string title;
  std::optional<std::string> registry_link;
  std::vector<std::string> arm_ids;  // sorted
  std::vector<BoundValue> values;
  std::optional<std::int64_t> cohort_size;
  std::optional<std::int64_t> intervention_families;
  friend bool operator==(const StudyMatch&, const StudyMatch&) = default;
};

struct StudyRepresentation {
  std::string study_id;
  Representation status = Representation::kAbsent;
  std::vector<std::string> representing_arms;
  std::vector<std::string> other_arms;
  friend bool operator==(const StudyRepresentation&, const StudyRepresentation&) = default;
};

struct QueryReport {
  std::string kind;      // match | limitation | quality
  std::string question;  // textual rendering of the criteria
  Granularity granularity = Granularity::kStudy;
  std::int64_t corpus_size = 0;  // studies in the corpus
  // Headline ratio. At study granularity numerator == matches.size() and
  // denominator == corpus_size; at arm granularity both count arms.
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;
  double percentage = 0.0;
  std::vector<StudyMatch> matches;  // ordered by study_id
  std::vector<StudyRepresentation> representation;
  std::vector<std::string> warnings;
  friend bool operator==(const QueryReport&, const QueryReport&) = default;
};

// Field order is fixed, hence ordered_json.
void to_json(nlohmann::ordered_json& out, const QueryReport& report);
void from_json(const nlohmann::ordered_json& in, QueryReport& report);

// 100 * numerator / denominator, or 0 for an empty denominator.
double percentage_of(std::int64_t numerator, std::int64_t denominator);

QueryReport study_match(const CorpusView& corpus,
                        const std::vector<FeatureCriterion>& criteria,
                        bool conjunctive = true, const BoundRule& rule = {});
QueryReport study_match(const kg::Graph& corpus,
                        const std::vector<FeatureCriterion>& criteria,
                        bool conjunctive = true, const BoundRule& rule = {});

struct LimitationOptions {
  // Percent below which a present subgroup is underrepresented.
  double underrepresentation_threshold = 10.0;
  BoundRule rule;
};

QueryReport study_limitation(const CorpusView& corpus, const FeatureCriterion& subgroup,
                             const LimitationOptions& options = {});
QueryReport study_limitation(const kg::Graph& corpus, const FeatureCriterion& subgroup,
                             const LimitationOptions& options = {});

struct QualityParams {
  std::int64_t min_cohort = 0;
  std::string drug_family;  // class IRI
  double arm_fraction = 1.0 / 3.0;
};

QueryReport study_quality(const CorpusView& corpus, const ingest::TermVocabulary& vocabulary,
                          const QualityParams& params);
QueryReport study_quality(const kg::Graph& corpus, const ingest::TermVocabulary& vocabulary,
                          const QualityParams& params);

struct Closure {
  std::set<std::string> members;
  std::vector<std::string> warnings;
};

// Reflexive-transitive rdfs:subClassOf closure below `family`.
Closure drug_family_closure(const kg::Graph& vocabulary, const std::string& family);

// --- JSON request bodies (CLI files and HTTP bodies share these) ---

// IRIs in requests may be absolute, CURIEs of the vocabulary prefixes, or
// vocabulary labels. Throws QueryError.
std::string resolve_term(const nlohmann::json& value, const ingest::TermVocabulary& vocabulary,
                         const std::string& field);

// {"conjunctive": bool?, "criteria": [criterion...]}
struct MatchRequest {
  std::vector<FeatureCriterion> criteria;
  bool conjunctive = true;
  BoundRule rule;
};
MatchRequest parse_match_request(const nlohmann::json& body,
                                 const ingest::TermVocabulary& vocabulary);

// {"subgroup": criterion, "underrepresentation_threshold"?, "bound_sd_multiplier"?}
struct LimitationRequest {
  FeatureCriterion subgroup;
  LimitationOptions options;
};
LimitationRequest parse_limitation_request(const nlohmann::json& body,
                                           const ingest::TermVocabulary& vocabulary);

// {"min_cohort", "drug_family", "arm_fraction"}
QualityParams parse_quality_request(const nlohmann::json& body,
                                    const ingest::TermVocabulary& vocabulary);

FeatureCriterion parse_criterion(const nlohmann::json& body,
                                 const ingest::TermVocabulary& vocabulary);

}  // namespace cohortkg::query

#endif  // COHORTKG_COHORT_QUERY_HPP_
