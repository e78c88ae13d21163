// SPDX-License-Identifier: Apache-2.0
//
// MIREOT-style module extraction: seeds plus their superclass paths and
// subclass trees, nothing else (siblings are not retained).

#ifndef COHORTKG_ONTO_SUBSET_HPP_
#define COHORTKG_ONTO_SUBSET_HPP_

#include <cstddef>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cohortkg/graph.hpp"

namespace cohortkg::subset {

// No seed resolved to a class of the source.
class SubsetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SubsetRequest {
  std::filesystem::path source;
  std::vector<std::string> seeds;  // absolute IRIs or CURIEs of the source
  bool include_annotations = false;
};

struct SubsetSummary {
  std::size_t source_classes = 0;
  std::size_t retained_classes = 0;
  std::size_t subclass_edges = 0;
  std::size_t annotations = 0;
  std::size_t copied_axioms = 0;
  // Axioms on retained classes that reference a class outside the module.
  std::size_t dropped_axioms = 0;
  std::vector<std::string> warnings;
};

struct SubsetModule {
  kg::Graph graph;
  std::set<std::string> retained;
  SubsetSummary summary;
};

// Classes of an ontology graph: IRIs typed owl:Class or rdfs:Class, and
// IRI endpoints of rdfs:subClassOf edges.
std::set<std::string> classes_of(const kg::Graph& ontology);

// Seeds ∪ ancestors(seeds) ∪ descendants(seeds) over asserted
// rdfs:subClassOf between IRIs. Cycles terminate.
std::set<std::string> retained_classes(const kg::Graph& ontology,
                                       const std::vector<std::string>& seeds);

SubsetModule extract(const kg::Graph& ontology, const std::vector<std::string>& seeds,
                     bool include_annotations = false);
// Reads the source file first; Turtle errors propagate.
SubsetModule extract(const SubsetRequest& request);

}  // namespace cohortkg::subset

#endif  // COHORTKG_ONTO_SUBSET_HPP_
