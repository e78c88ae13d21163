// SPDX-License-Identifier: Apache-2.0
//
// The bundled mini-vocabulary: human row labels ("Age", "BMI", drug names,
// unit symbols) mapped to class IRIs, plus the class hierarchy used for
// characteristic families and drug-family closures.

#ifndef COHORTKG_TERM_VOCABULARY_HPP_
#define COHORTKG_TERM_VOCABULARY_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cohortkg/graph.hpp"

namespace cohortkg::ingest {

enum class Family {
  kDemographic,
  kAnthropometry,
  kLabResult,
  kClinicalMeasurement,
  kLifestyle,
  kDisease,
  kIntervention,
  kUnit,
  kUnknown,
};

std::string_view to_string(Family family);

struct LabelResolution {
  std::string iri;
  bool minted = false;  // true when the label was unknown
};

class TermVocabulary {
 public:
  TermVocabulary() = default;
  explicit TermVocabulary(kg::Graph graph);

  static TermVocabulary load(const std::filesystem::path& path);

  // Case-insensitive lookup over rdfs:label and skos:altLabel. Also accepts
  // a CURIE or absolute IRI naming a class of the vocabulary.
  std::optional<std::string> find(std::string_view label) const;
  // Like find(), but unknown labels mint an IRI in the sco-x: namespace.
  // CURIEs and absolute IRIs pass through even when not in the vocabulary.
  LabelResolution resolve(std::string_view label) const;

  bool contains_class(const std::string& iri) const;
  Family family_of(const std::string& iri) const;
  // Diseases and interventions persist over time.
  bool persists(const std::string& iri) const;
  std::optional<std::string> label_of(const std::string& iri) const;
  // Direct asserted superclasses.
  std::vector<std::string> parents_of(const std::string& iri) const;

  const kg::Graph& graph() const { return graph_; }

 private:
  kg::Graph graph_;
  std::unordered_map<std::string, std::string> by_label_;  // lowercase label
  std::unordered_map<std::string, std::string> labels_;    // iri -> rdfs:label
  std::unordered_map<std::string, std::vector<std::string>> parents_;
};

// "Systolic BP" -> "SystolicBP"; used for sco-x: minting.
std::string camel_case(std::string_view label);

}  // namespace cohortkg::ingest

#endif  // COHORTKG_TERM_VOCABULARY_HPP_
