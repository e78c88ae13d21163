// SPDX-License-Identifier: Apache-2.0
//
// In-memory triple store with SPO/POS/OSP indexes.

#ifndef COHORTKG_GRAPH_HPP_
#define COHORTKG_GRAPH_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cohortkg/term.hpp"

namespace cohortkg::kg {

// Raised when a prefixed name uses an undeclared prefix.
class PrefixResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Prefix label -> namespace IRI. Always holds the core prefixes (rdf, rdfs,
// owl, xsd, sio, sco, sco-i); iteration via `ordered()` follows the fixed
// serialization order, extras alphabetically after the core block.
class PrefixMap {
 public:
  PrefixMap();

  void set(std::string label, std::string namespace_iri);
  std::optional<std::string> find(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label).has_value(); }

  // "sio:Age" -> full IRI. Throws PrefixResolutionError.
  std::string expand(std::string_view curie) const;
  // Accepts a full IRI, "<full>", or a CURIE.
  std::string resolve(std::string_view text) const;
  // Full IRI -> "prefix:local" using the longest matching namespace, when
  // the local part is a safe prefixed-name local.
  std::optional<std::string> compact(std::string_view iri) const;

  std::vector<std::pair<std::string, std::string>> ordered() const;
  std::size_t size() const { return entries_.size(); }

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;

 private:
  std::map<std::string, std::string, std::less<>> entries_;
};

struct Pattern {
  std::optional<Term> subject;
  std::optional<Term> predicate;
  std::optional<Term> object;
};

struct MatchOptions {
  // When the pattern binds a predicate, also return triples whose predicate
  // is a registered sub-property of it (hasProperty under hasAttribute).
  bool expand_subproperties = false;
};

class Graph {
 public:
  Graph() = default;

  // Returns false when the triple was already present. Throws
  // ValidationError for malformed triples and std::logic_error once frozen.
  bool insert(Triple triple);
  bool insert(Term subject, Term predicate, Term object) {
    return insert(Triple{std::move(subject), std::move(predicate),
                         std::move(object)});
  }
  // Inserts every triple of `other` and merges its prefixes.
  void merge(const Graph& other);

  bool contains(const Triple& triple) const;
  // Triples agreeing with every bound position, in insertion order.
  std::vector<Triple> match(const Pattern& pattern,
                            MatchOptions options = {}) const;
  // First object of (subject, predicate, _), if any.
  std::optional<Term> object_of(const Term& subject,
                                const std::string& predicate) const;

  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }

  PrefixMap& prefixes() { return prefixes_; }
  const PrefixMap& prefixes() const { return prefixes_; }

  // Fresh `_:b<n>` label not yet used in this graph.
  Term new_blank();

  // After freezing the graph is read-only and safe to share between threads.
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  using TermId = std::uint32_t;
  using Postings = std::vector<std::uint32_t>;
  using Index = std::unordered_map<TermId, std::unordered_map<TermId, Postings>>;

  std::optional<TermId> lookup(const Term& term) const;
  TermId intern(const Term& term);
  void collect(const Index& index, TermId first, std::optional<TermId> second,
               std::vector<std::uint32_t>& out) const;
  std::vector<std::uint32_t> match_rows(const Pattern& pattern) const;

  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> present_;
  std::vector<Term> terms_;
  std::unordered_map<Term, TermId, TermHash> ids_;
  std::vector<std::array<TermId, 3>> rows_;
  Index spo_;
  Index pos_;
  Index osp_;
  PrefixMap prefixes_;
  std::uint64_t blank_counter_ = 0;
  bool frozen_ = false;
};

}  // namespace cohortkg::kg

#endif  // COHORTKG_GRAPH_HPP_
