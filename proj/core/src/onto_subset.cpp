// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/onto_subset.hpp"

#include <deque>
#include <map>

#include <fmt/format.h>

#include "cohortkg/turtle.hpp"
#include "cohortkg/vocabulary.hpp"

namespace cohortkg::subset {
namespace {

using kg::Term;
namespace iri = kg::iri;

const std::string& rdfs_class() {
  static const std::string kClass = std::string(kg::ns::kRdfs) + "Class";
  return kClass;
}

bool is_edge(const kg::Triple& t) {
  return t.predicate.value() == iri::kRdfsSubClassOf && t.subject.is_iri() &&
         t.object.is_iri();
}

using Adjacency = std::map<std::string, std::vector<std::string>>;

void walk(const Adjacency& next, const std::string& start, std::set<std::string>& out) {
  std::deque<std::string> queue{start};
  std::set<std::string> seen{start};
  while (!queue.empty()) {
    std::string current = queue.front();
    queue.pop_front();
    out.insert(current);
    auto it = next.find(current);
    if (it == next.end()) continue;
    for (const auto& n : it->second) {
      if (seen.insert(n).second) queue.push_back(n);
    }
  }
}

// Triples reachable from a blank node through blank objects.
void blank_closure(const kg::Graph& g, const Term& node, std::set<Term>& visited,
                   std::vector<kg::Triple>& out) {
  if (!node.is_blank() || !visited.insert(node).second) return;
  for (const auto& t : g.match({node, std::nullopt, std::nullopt})) {
    out.push_back(t);
    blank_closure(g, t.object, visited, out);
  }
}

}  // namespace

std::set<std::string> classes_of(const kg::Graph& ontology) {
  std::set<std::string> out;
  for (const auto& t : ontology.triples()) {
    if (is_edge(t)) {
      out.insert(t.subject.value());
      out.insert(t.object.value());
    } else if (t.subject.is_iri() && t.predicate.value() == iri::kRdfType &&
               (t.object.value() == iri::kOwlClass || t.object.value() == rdfs_class())) {
      out.insert(t.subject.value());
    }
  }
  return out;
}

std::set<std::string> retained_classes(const kg::Graph& ontology,
                                       const std::vector<std::string>& seeds) {
  Adjacency parents;
  Adjacency children;
  for (const auto& t : ontology.triples()) {
    if (!is_edge(t)) continue;
    parents[t.subject.value()].push_back(t.object.value());
    children[t.object.value()].push_back(t.subject.value());
  }
  std::set<std::string> out;
  for (const auto& seed : seeds) {
    walk(parents, seed, out);
    walk(children, seed, out);
  }
  return out;
}

SubsetModule extract(const kg::Graph& ontology, const std::vector<std::string>& seeds,
                     bool include_annotations) {
  SubsetModule module;
  const std::set<std::string> classes = classes_of(ontology);
  module.summary.source_classes = classes.size();

  std::vector<std::string> resolved;
  for (const auto& seed : seeds) {
    std::string full;
    try {
      full = ontology.prefixes().resolve(seed);
    } catch (const kg::PrefixResolutionError& e) {
      module.summary.warnings.push_back(fmt::format("seed '{}' skipped: {}", seed, e.what()));
      continue;
    }
    if (!classes.contains(full)) {
      module.summary.warnings.push_back(
          fmt::format("seed <{}> is not a class of the source; skipped", full));
      continue;
    }
    resolved.push_back(full);
  }
  if (resolved.empty()) throw SubsetError("no seed resolved to a class of the source ontology");

  module.retained = retained_classes(ontology, resolved);
  kg::Graph& out = module.graph;
  for (const auto& [label, ns] : ontology.prefixes().ordered()) out.prefixes().set(label, ns);

  for (const auto& c : module.retained) {
    out.insert(Term::iri(c), Term::iri(iri::kRdfType), Term::iri(iri::kOwlClass));
  }
  for (const auto& t : ontology.triples()) {
    if (is_edge(t) && module.retained.contains(t.subject.value()) &&
        module.retained.contains(t.object.value())) {
      if (out.insert(t)) ++module.summary.subclass_edges;
    }
  }
  for (const auto& c : module.retained) {
    for (const auto& t : ontology.match({Term::iri(c), std::nullopt, std::nullopt})) {
      if (is_edge(t)) continue;
      if (t.predicate.value() == iri::kRdfType && t.object.value() == iri::kOwlClass) continue;
      if (t.object.is_literal()) {
        if (include_annotations && out.insert(t)) ++module.summary.annotations;
        continue;
      }
      std::vector<kg::Triple> axiom{t};
      std::set<Term> visited;
      blank_closure(ontology, t.object, visited, axiom);
      bool closed = true;
      for (const auto& part : axiom) {
        for (const Term* term : {&part.subject, &part.object}) {
          if (term->is_iri() && classes.contains(term->value()) &&
              !module.retained.contains(term->value())) {
            closed = false;
          }
        }
      }
      if (!closed) {
        ++module.summary.dropped_axioms;
        continue;
      }
      bool added = false;
      for (const auto& part : axiom) added = out.insert(part) || added;
      if (added) ++module.summary.copied_axioms;
    }
  }
  module.summary.retained_classes = module.retained.size();
  return module;
}

SubsetModule extract(const SubsetRequest& request) {
  return extract(kg::read_turtle_file(request.source), request.seeds,
                 request.include_annotations);
}

}  // namespace cohortkg::subset
