// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/graph.hpp"

#include <algorithm>
#include <array>

#include <fmt/format.h>

#include "cohortkg/vocabulary.hpp"

namespace cohortkg::kg {
namespace {

constexpr std::array<std::string_view, 7> kCorePrefixOrder{
    "rdf", "rdfs", "owl", "xsd", "sio", "sco", "sco-i"};

bool safe_local_name(std::string_view local) {
  if (local.empty()) return false;
  for (char c : local) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return local.front() != '-';
}

}  // namespace

PrefixMap::PrefixMap() {
  entries_.emplace("rdf", ns::kRdf);
  entries_.emplace("rdfs", ns::kRdfs);
  entries_.emplace("owl", ns::kOwl);
  entries_.emplace("xsd", ns::kXsd);
  entries_.emplace("sio", ns::kSio);
  entries_.emplace("sco", ns::kSco);
  entries_.emplace("sco-i", ns::kScoI);
}

void PrefixMap::set(std::string label, std::string namespace_iri) {
  entries_.insert_or_assign(std::move(label), std::move(namespace_iri));
}

std::optional<std::string> PrefixMap::find(std::string_view label) const {
  if (auto it = entries_.find(label); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::string PrefixMap::expand(std::string_view curie) const {
  const auto colon = curie.find(':');
  if (colon == std::string_view::npos) {
    throw PrefixResolutionError(
        fmt::format("not a prefixed name: '{}'", curie));
  }
  const auto label = curie.substr(0, colon);
  auto base = find(label);
  if (!base) {
    throw PrefixResolutionError(
        fmt::format("undeclared prefix '{}' in '{}'", label, curie));
  }
  return *base + std::string(curie.substr(colon + 1));
}

std::string PrefixMap::resolve(std::string_view text) const {
  if (text.size() >= 2 && text.front() == '<' && text.back() == '>') {
    return std::string(text.substr(1, text.size() - 2));
  }
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    if (contains(text.substr(0, colon))) return expand(text);
    if (text.substr(colon).starts_with("://") || text.starts_with("urn:")) {
      return std::string(text);
    }
  }
  return expand(text);
}

std::optional<std::string> PrefixMap::compact(std::string_view iri) const {
  const std::string* best_label = nullptr;
  std::size_t best_length = 0;
  for (const auto& [label, base] : entries_) {
    if (base.size() > best_length && iri.size() > base.size() &&
        iri.starts_with(base) && safe_local_name(iri.substr(base.size()))) {
      best_label = &label;
      best_length = base.size();
    }
  }
  if (best_label == nullptr) return std::nullopt;
  return fmt::format("{}:{}", *best_label, iri.substr(best_length));
}

std::vector<std::pair<std::string, std::string>> PrefixMap::ordered() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(entries_.size());
  for (auto label : kCorePrefixOrder) {
    if (auto it = entries_.find(label); it != entries_.end()) {
      out.emplace_back(it->first, it->second);
    }
  }
  for (const auto& [label, base] : entries_) {
    if (std::find(kCorePrefixOrder.begin(), kCorePrefixOrder.end(), label) ==
        kCorePrefixOrder.end()) {
      out.emplace_back(label, base);
    }
  }
  return out;
}

std::optional<Graph::TermId> Graph::lookup(const Term& term) const {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  return std::nullopt;
}

Graph::TermId Graph::intern(const Term& term) {
  if (auto it = ids_.find(term); it != ids_.end()) return it->second;
  const auto id = static_cast<TermId>(terms_.size());
  terms_.push_back(term);
  ids_.emplace(term, id);
  return id;
}

bool Graph::insert(Triple triple) {
  if (frozen_) throw std::logic_error("graph is frozen");
  validate_triple(triple);
  if (present_.contains(triple)) return false;
  const auto s = intern(triple.subject);
  const auto p = intern(triple.predicate);
  const auto o = intern(triple.object);
  const auto row = static_cast<std::uint32_t>(rows_.size());
  rows_.push_back({s, p, o});
  spo_[s][p].push_back(row);
  pos_[p][o].push_back(row);
  osp_[o][s].push_back(row);
  present_.insert(triple);
  triples_.push_back(std::move(triple));
  return true;
}

void Graph::merge(const Graph& other) {
  if (frozen_) throw std::logic_error("graph is frozen");
  for (const auto& [label, base] : other.prefixes_.ordered()) {
    prefixes_.set(label, base);
  }
  for (const auto& triple : other.triples_) insert(triple);
}

bool Graph::contains(const Triple& triple) const {
  return present_.contains(triple);
}

void Graph::collect(const Index& index, TermId first,
                    std::optional<TermId> second,
                    std::vector<std::uint32_t>& out) const {
  auto outer = index.find(first);
  if (outer == index.end()) return;
  if (second) {
    if (auto inner = outer->second.find(*second); inner != outer->second.end()) {
      out.insert(out.end(), inner->second.begin(), inner->second.end());
    }
    return;
  }
  for (const auto& [key, postings] : outer->second) {
    out.insert(out.end(), postings.begin(), postings.end());
  }
}

std::vector<std::uint32_t> Graph::match_rows(const Pattern& pattern) const {
  std::optional<TermId> s, p, o;
  if (pattern.subject && !(s = lookup(*pattern.subject))) return {};
  if (pattern.predicate && !(p = lookup(*pattern.predicate))) return {};
  if (pattern.object && !(o = lookup(*pattern.object))) return {};

  std::vector<std::uint32_t> rows;
  if (s) {
    collect(spo_, *s, p, rows);
    if (o) {
      std::erase_if(rows, [&](std::uint32_t r) { return rows_[r][2] != *o; });
    }
  } else if (p) {
    collect(pos_, *p, o, rows);
  } else if (o) {
    collect(osp_, *o, std::nullopt, rows);
  } else {
    rows.resize(rows_.size());
    for (std::uint32_t r = 0; r < rows.size(); ++r) rows[r] = r;
    return rows;
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::vector<Triple> Graph::match(const Pattern& pattern,
                                 MatchOptions options) const {
  std::vector<std::uint32_t> rows = match_rows(pattern);
  if (options.expand_subproperties && pattern.predicate) {
    const auto& subs = sub_properties_of(pattern.predicate->value());
    if (!subs.empty()) {
      for (const auto& sub : subs) {
        Pattern narrowed = pattern;
        narrowed.predicate = Term::iri(sub);
        auto more = match_rows(narrowed);
        rows.insert(rows.end(), more.begin(), more.end());
      }
      std::sort(rows.begin(), rows.end());
      rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    }
  }
  std::vector<Triple> out;
  out.reserve(rows.size());
  for (auto r : rows) out.push_back(triples_[r]);
  return out;
}

std::optional<Term> Graph::object_of(const Term& subject,
                                     const std::string& predicate) const {
  auto s = lookup(subject);
  auto p = lookup(Term::iri(predicate));
  if (!s || !p) return std::nullopt;
  std::vector<std::uint32_t> rows;
  collect(spo_, *s, p, rows);
  if (rows.empty()) return std::nullopt;
  return triples_[*std::min_element(rows.begin(), rows.end())].object;
}

Term Graph::new_blank() {
  for (;;) {
    Term candidate = Term::blank(fmt::format("b{}", blank_counter_++));
    if (!lookup(candidate)) return candidate;
  }
}

}  // namespace cohortkg::kg
