// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/isomorphism.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace cohortkg::kg {
namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t value) {
  value *= 0x9e3779b97f4a7c15ULL;
  value ^= value >> 29;
  return (seed ^ value) * 0xbf58476d1ce4e5b9ULL + 0x94d049bb133111ebULL;
}

// Blank nodes of one graph plus their incident triples, with colours refined
// from the ground part of each neighbourhood.
struct Side {
  explicit Side(const Graph& graph) {
    for (const auto& t : graph.triples()) {
      const bool sb = t.subject.is_blank();
      const bool ob = t.object.is_blank();
      if (!sb && !ob) {
        ground.push_back(&t);
        continue;
      }
      if (sb) touch(t.subject.value()).push_back(&t);
      if (ob && !(sb && t.object == t.subject)) touch(t.object.value()).push_back(&t);
    }
  }

  std::vector<const Triple*>& touch(const std::string& label) {
    auto [it, inserted] = index.try_emplace(label, nodes.size());
    if (inserted) {
      nodes.push_back(label);
      incident.emplace_back();
    }
    return incident[it->second];
  }

  std::uint64_t term_hash(const Term& term) const {
    return TermHash{}(term);
  }

  void refine() {
    color.assign(nodes.size(), 0);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      std::vector<std::uint64_t> parts;
      for (const Triple* t : incident[i]) {
        const bool is_subject = t->subject.is_blank() && t->subject.value() == nodes[i];
        const bool is_object = t->object.is_blank() && t->object.value() == nodes[i];
        std::uint64_t h = mix(is_subject ? 1 : 2, TermHash{}(t->predicate));
        if (is_subject && is_object) h = mix(h, 3);
        const Term& other = is_subject ? t->object : t->subject;
        h = mix(h, other.is_blank() ? 7 : term_hash(other));
        parts.push_back(h);
      }
      std::sort(parts.begin(), parts.end());
      std::uint64_t c = parts.size();
      for (auto p : parts) c = mix(c, p);
      color[i] = c;
    }
    for (std::size_t round = 0; round < nodes.size(); ++round) {
      std::vector<std::uint64_t> next(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        std::vector<std::uint64_t> parts;
        for (const Triple* t : incident[i]) {
          const bool is_subject = t->subject.is_blank() && t->subject.value() == nodes[i];
          const Term& other = is_subject ? t->object : t->subject;
          if (!other.is_blank() || other.value() == nodes[i]) continue;
          parts.push_back(mix(mix(is_subject ? 11 : 13, TermHash{}(t->predicate)),
                              color[index.at(other.value())]));
        }
        std::sort(parts.begin(), parts.end());
        std::uint64_t c = color[i];
        for (auto p : parts) c = mix(c, p);
        next[i] = c;
      }
      const auto classes = [](const std::vector<std::uint64_t>& v) {
        return std::unordered_set<std::uint64_t>(v.begin(), v.end()).size();
      };
      const bool stable = classes(next) == classes(color);
      color = std::move(next);
      if (stable) break;
    }
  }

  std::vector<std::string> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<const Triple*>> incident;
  std::vector<const Triple*> ground;
  std::vector<std::uint64_t> color;
};

class Matcher {
 public:
  Matcher(const Graph& a, const Graph& b, Side& sa, Side& sb)
      : b_(b), sa_(sa), sb_(sb), forward_(sa.nodes.size(), kUnmapped),
        backward_(sb.nodes.size(), kUnmapped) {
    for (std::size_t j = 0; j < sb.nodes.size(); ++j) {
      by_color_[sb.color[j]].push_back(j);
    }
    order_.resize(sa.nodes.size());
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = i;
    // Smallest colour classes first.
    std::sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) {
      const auto cx = class_size(sa.color[x]);
      const auto cy = class_size(sa.color[y]);
      return cx != cy ? cx < cy : x < y;
    });
    (void)a;
  }

  bool solve(std::size_t depth = 0) {
    if (depth == order_.size()) return true;
    const std::size_t node = order_[depth];
    auto it = by_color_.find(sa_.color[node]);
    if (it == by_color_.end()) return false;
    for (std::size_t candidate : it->second) {
      if (backward_[candidate] != kUnmapped) continue;
      forward_[node] = candidate;
      backward_[candidate] = node;
      if (consistent(node) && solve(depth + 1)) return true;
      forward_[node] = kUnmapped;
      backward_[candidate] = kUnmapped;
    }
    return false;
  }

  BlankMapping mapping() const {
    BlankMapping out;
    for (std::size_t i = 0; i < forward_.size(); ++i) {
      out.emplace(sa_.nodes[i], sb_.nodes[forward_[i]]);
    }
    return out;
  }

 private:
  static constexpr std::size_t kUnmapped = static_cast<std::size_t>(-1);

  std::size_t class_size(std::uint64_t color) const {
    auto it = by_color_.find(color);
    return it == by_color_.end() ? 0 : it->second.size();
  }

  std::optional<Term> image(const Term& term) const {
    if (!term.is_blank()) return term;
    const auto target = forward_[sa_.index.at(term.value())];
    if (target == kUnmapped) return std::nullopt;
    return Term::blank(sb_.nodes[target]);
  }

  // Every triple of `node` whose blank nodes are all mapped must exist in b.
  bool consistent(std::size_t node) const {
    if (sa_.incident[node].size() != sb_.incident[forward_[node]].size()) {
      return false;
    }
    for (const Triple* t : sa_.incident[node]) {
      auto s = image(t->subject);
      auto o = image(t->object);
      if (!s || !o) continue;
      if (!b_.contains(Triple{*s, t->predicate, *o})) return false;
    }
    return true;
  }

  const Graph& b_;
  Side& sa_;
  Side& sb_;
  std::vector<std::size_t> forward_;
  std::vector<std::size_t> backward_;
  std::vector<std::size_t> order_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_color_;
};

}  // namespace

std::optional<BlankMapping> find_blank_bijection(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return std::nullopt;
  Side sa(a);
  Side sb(b);
  if (sa.nodes.size() != sb.nodes.size() || sa.ground.size() != sb.ground.size()) {
    return std::nullopt;
  }
  for (const Triple* t : sa.ground) {
    if (!b.contains(*t)) return std::nullopt;
  }
  sa.refine();
  sb.refine();
  auto histogram = [](const std::vector<std::uint64_t>& colors) {
    std::vector<std::uint64_t> sorted = colors;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  };
  if (histogram(sa.color) != histogram(sb.color)) return std::nullopt;
  Matcher matcher(a, b, sa, sb);
  if (!matcher.solve()) return std::nullopt;
  return matcher.mapping();
}

}  // namespace cohortkg::kg
