// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/term_vocabulary.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>

#include "cohortkg/turtle.hpp"
#include "cohortkg/vocabulary.hpp"

namespace cohortkg::ingest {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

const std::vector<std::pair<std::string, Family>>& family_roots() {
  static const std::vector<std::pair<std::string, Family>> kRoots{
      {std::string(kg::ns::kSco) + "Demographic", Family::kDemographic},
      {std::string(kg::ns::kSco) + "Anthropometry", Family::kAnthropometry},
      {std::string(kg::ns::kSco) + "LabResult", Family::kLabResult},
      {std::string(kg::ns::kSco) + "ClinicalMeasurement",
       Family::kClinicalMeasurement},
      {std::string(kg::ns::kSco) + "Lifestyle", Family::kLifestyle},
      {std::string(kg::ns::kSco) + "Disease", Family::kDisease},
      {std::string(kg::ns::kSco) + "Intervention", Family::kIntervention},
      {std::string(kg::ns::kSco) + "UnitOfMeasurement", Family::kUnit},
  };
  return kRoots;
}

}  // namespace

std::string_view to_string(Family family) {
  switch (family) {
    case Family::kDemographic: return "demographic";
    case Family::kAnthropometry: return "anthropometry";
    case Family::kLabResult: return "lab_result";
    case Family::kClinicalMeasurement: return "clinical_measurement";
    case Family::kLifestyle: return "lifestyle";
    case Family::kDisease: return "disease";
    case Family::kIntervention: return "intervention";
    case Family::kUnit: return "unit";
    case Family::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string camel_case(std::string_view label) {
  std::string out;
  bool upper = true;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out.push_back(upper ? static_cast<char>(std::toupper(c)) : c);
      upper = false;
    } else {
      upper = true;
    }
  }
  if (out.empty()) out = "Unnamed";
  return out;
}

TermVocabulary::TermVocabulary(kg::Graph graph) : graph_(std::move(graph)) {
  for (const auto& t : graph_.triples()) {
    if (!t.subject.is_iri()) continue;
    const auto& p = t.predicate.value();
    if ((p == kg::iri::kRdfsLabel || p == kg::iri::kSkosAltLabel) &&
        t.object.is_literal()) {
      by_label_.emplace(lower(t.object.value()), t.subject.value());
      if (p == kg::iri::kRdfsLabel) labels_.emplace(t.subject.value(), t.object.value());
    } else if (p == kg::iri::kRdfsSubClassOf && t.object.is_iri()) {
      parents_[t.subject.value()].push_back(t.object.value());
    }
  }
}

TermVocabulary TermVocabulary::load(const std::filesystem::path& path) {
  return TermVocabulary(kg::read_turtle_file(path));
}

std::optional<std::string> TermVocabulary::find(std::string_view label) const {
  if (auto it = by_label_.find(lower(label)); it != by_label_.end()) {
    return it->second;
  }
  if (label.find(':') != std::string_view::npos) {
    try {
      std::string iri = graph_.prefixes().resolve(label);
      if (contains_class(iri)) return iri;
    } catch (const kg::PrefixResolutionError&) {
    }
  }
  return std::nullopt;
}

LabelResolution TermVocabulary::resolve(std::string_view label) const {
  if (auto iri = find(label)) return {*iri, false};
  if (label.find(':') != std::string_view::npos) {
    try {
      std::string iri = graph_.prefixes().resolve(label);
      if (kg::is_absolute_iri(iri)) return {iri, false};
    } catch (const kg::PrefixResolutionError&) {
    }
  }
  return {std::string(kg::ns::kScoX) + camel_case(label), true};
}

bool TermVocabulary::contains_class(const std::string& iri) const {
  if (labels_.contains(iri) || parents_.contains(iri)) return true;
  return !graph_.match({kg::Term::iri(iri), std::nullopt, std::nullopt}).empty() ||
         !graph_.match({std::nullopt, kg::Term::iri(kg::iri::kRdfsSubClassOf),
                        kg::Term::iri(iri)})
              .empty();
}

Family TermVocabulary::family_of(const std::string& iri) const {
  std::deque<std::string> queue{iri};
  std::set<std::string> seen{iri};
  while (!queue.empty()) {
    std::string current = std::move(queue.front());
    queue.pop_front();
    for (const auto& [root, family] : family_roots()) {
      if (current == root) return family;
    }
    if (auto it = parents_.find(current); it != parents_.end()) {
      for (const auto& parent : it->second) {
        if (seen.insert(parent).second) queue.push_back(parent);
      }
    }
  }
  return Family::kUnknown;
}

bool TermVocabulary::persists(const std::string& iri) const {
  const Family family = family_of(iri);
  return family == Family::kDisease || family == Family::kIntervention;
}

std::optional<std::string> TermVocabulary::label_of(const std::string& iri) const {
  if (auto it = labels_.find(iri); it != labels_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::string> TermVocabulary::parents_of(const std::string& iri) const {
  if (auto it = parents_.find(iri); it != parents_.end()) return it->second;
  return {};
}

}  // namespace cohortkg::ingest
