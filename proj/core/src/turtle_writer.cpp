// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "cohortkg/turtle.hpp"
#include "cohortkg/vocabulary.hpp"

namespace cohortkg::kg {
namespace {

// Lower rank prints first; everything else follows in IRI order.
int predicate_rank(const std::string& predicate) {
  static const std::unordered_map<std::string, int> kRanks{
      {iri::kRdfType, 0},
      {iri::kRdfsSubClassOf, 1},
      {iri::kOwlOnProperty, 2},
      {iri::kOwlSomeValuesFrom, 3},
      {iri::kSioIsParticipantIn, 4},
      {iri::kSioHasUnit, 5},
      {iri::kSioHasValue, 6},
      {iri::kSioHasAttribute, 7},
      {iri::kSioHasProperty, 8},
  };
  if (auto it = kRanks.find(predicate); it != kRanks.end()) return it->second;
  return 100;
}

std::string escape_string(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  out.push_back('"');
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          out += fmt::format("\\u{:04X}", static_cast<unsigned>(c));
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
  return out;
}

// Orders "b2" before "b10": text prefix, then the trailing number by value.
bool natural_less(const std::string& a, const std::string& b) {
  auto split = [](const std::string& s) {
    std::size_t i = s.size();
    while (i > 0 && s[i - 1] >= '0' && s[i - 1] <= '9') --i;
    std::size_t z = i;
    while (z + 1 < s.size() && s[z] == '0') ++z;
    return std::tuple{std::string_view(s).substr(0, i), s.size() - z,
                      std::string_view(s).substr(z), s.size() - i};
  };
  return split(a) < split(b);
}

struct NaturalLess {
  bool operator()(const std::string& a, const std::string& b) const { return natural_less(a, b); }
};

class Writer {
 public:
  explicit Writer(const Graph& graph) : graph_(graph) { plan(); }

  std::string run() {
    std::string out;
    for (const auto& [label, base] : graph_.prefixes().ordered()) {
      out += fmt::format("@prefix {}: <{}> .\n", label, base);
    }
    for (const Term& subject : top_level_) {
      out.push_back('\n');
      out += render_subject(subject);
    }
    return out;
  }

 private:
  using Group = std::pair<std::string, std::vector<Term>>;

  void plan() {
    std::unordered_map<Term, std::size_t, TermHash> refs;
    std::unordered_map<Term, Term, TermHash> referrer;
    for (const auto& t : graph_.triples()) {
      out_[t.subject].push_back(&t);
      if (t.object.is_blank()) {
        ++refs[t.object];
        referrer.insert_or_assign(t.object, t.subject);
      }
    }
    std::unordered_set<Term, TermHash> candidates;
    for (const auto& [node, count] : refs) {
      if (count == 1 && referrer.at(node) != node) candidates.insert(node);
    }
    std::vector<Term> roots;
    for (const auto& [subject, _] : out_) {
      if (!candidates.contains(subject)) roots.push_back(subject);
    }
    // Candidates are inlined only when an inline chain reaches them from a
    // root; isolated single-reference cycles keep their labels.
    std::vector<Term> stack = roots;
    while (!stack.empty()) {
      Term node = std::move(stack.back());
      stack.pop_back();
      auto it = out_.find(node);
      if (it == out_.end()) continue;
      for (const Triple* t : it->second) {
        if (candidates.contains(t->object) && inline_.insert(t->object).second) {
          stack.push_back(t->object);
        }
      }
    }
    for (const auto& [subject, _] : out_) {
      if (!inline_.contains(subject)) top_level_.push_back(subject);
    }
    std::sort(top_level_.begin(), top_level_.end(),
              [](const Term& a, const Term& b) {
                if (a.kind() != b.kind()) return a.is_iri();
                if (a.is_blank()) return natural_less(a.value(), b.value());
                return a.value() < b.value();
              });
    // Labelled blanks are renumbered _:b0, _:b1, ... in source-label order.
    std::set<std::string, NaturalLess> labelled;
    for (const auto& t : graph_.triples()) {
      for (const Term* x : {&t.subject, &t.object}) {
        if (x->is_blank() && !inline_.contains(*x)) labelled.insert(x->value());
      }
    }
    for (const auto& label : labelled) {
      labels_.emplace(label, fmt::format("_:b{}", labels_.size()));
    }
  }

  const std::string& blank_label(const Term& term) const { return labels_.at(term.value()); }

  std::string render_iri(const std::string& iri) const {
    if (auto curie = graph_.prefixes().compact(iri)) return *curie;
    return fmt::format("<{}>", iri);
  }

  std::string render_predicate(const std::string& iri) const {
    if (iri == iri::kRdfType) return "a";
    return render_iri(iri);
  }

  std::string render_literal(const Term& term) const {
    const auto& dt = term.datatype();
    if (dt == iri::kXsdInteger || dt == iri::kXsdDecimal) return term.value();
    std::string out = escape_string(term.value());
    if (!term.language().empty()) {
      out += "@" + term.language();
    } else if (dt != iri::kXsdString) {
      out += "^^" + render_iri(dt);
    }
    return out;
  }

  // Groups a node's triples by predicate, ordered for output; objects within
  // a group are ordered by their single-line rendering.
  const std::vector<Group>& groups_of(const Term& node) {
    if (auto it = groups_.find(node); it != groups_.end()) return it->second;
    std::map<std::pair<int, std::string>, std::vector<Term>> by_predicate;
    if (auto it = out_.find(node); it != out_.end()) {
      for (const Triple* t : it->second) {
        const auto& p = t->predicate.value();
        by_predicate[{predicate_rank(p), p}].push_back(t->object);
      }
    }
    std::vector<Group> groups;
    for (auto& [key, objects] : by_predicate) {
      std::sort(objects.begin(), objects.end(),
                [this](const Term& a, const Term& b) {
                  return flat(a) < flat(b);
                });
      groups.emplace_back(key.second, std::move(objects));
    }
    return groups_.emplace(node, std::move(groups)).first->second;
  }

  bool inlined(const Term& term) const {
    return term.is_blank() && inline_.contains(term);
  }

  // Single-line rendering; also the ordering key for objects.
  const std::string& flat(const Term& term) {
    if (auto it = flat_.find(term); it != flat_.end()) return it->second;
    std::string text;
    if (term.is_iri()) {
      text = render_iri(term.value());
    } else if (term.is_literal()) {
      text = render_literal(term);
    } else if (!inlined(term)) {
      text = blank_label(term);
    } else {
      const auto& groups = groups_of(term);
      if (groups.empty()) {
        text = "[]";
      } else {
        std::vector<std::string> parts;
        for (const auto& [predicate, objects] : groups) {
          std::vector<std::string> rendered;
          for (const auto& o : objects) rendered.push_back(flat(o));
          parts.push_back(fmt::format("{} {}", render_predicate(predicate),
                                      fmt::join(rendered, ", ")));
        }
        text = fmt::format("[ {} ]", fmt::join(parts, " ; "));
      }
    }
    return flat_.emplace(term, std::move(text)).first->second;
  }

  bool nests(const Term& node) {
    for (const auto& [_, objects] : groups_of(node)) {
      for (const auto& o : objects) {
        if (inlined(o) && !groups_of(o).empty()) return true;
      }
    }
    return false;
  }

  std::string render_object(const Term& term, std::size_t column) {
    if (!inlined(term) || !nests(term)) return flat(term);
    const std::string pad(column + 2, ' ');
    std::vector<std::string> parts;
    for (const auto& [predicate, objects] : groups_of(term)) {
      parts.push_back(render_group(predicate, objects, column + 2));
    }
    return fmt::format("[ {} ]", fmt::join(parts, " ;\n" + pad));
  }

  std::string render_group(const std::string& predicate,
                           const std::vector<Term>& objects,
                           std::size_t column) {
    const std::string head = render_predicate(predicate);
    bool multiline = false;
    std::size_t width = column + head.size();
    for (const auto& o : objects) {
      if (inlined(o) && !groups_of(o).empty()) multiline |= objects.size() > 1;
      multiline |= inlined(o) && nests(o);
      width += flat(o).size() + 2;
    }
    multiline |= width > 100 && objects.size() > 1;
    std::vector<std::string> rendered;
    if (!multiline) {
      for (const auto& o : objects) rendered.push_back(flat(o));
      return fmt::format("{} {}", head, fmt::join(rendered, ", "));
    }
    const std::string pad(column + 4, ' ');
    for (const auto& o : objects) rendered.push_back(render_object(o, column + 4));
    return fmt::format("{}\n{}{}", head, pad, fmt::join(rendered, ",\n" + pad));
  }

  std::string render_subject(const Term& subject) {
    std::string head =
        subject.is_iri() ? render_iri(subject.value()) : blank_label(subject);
    std::vector<std::string> parts;
    for (const auto& [predicate, objects] : groups_of(subject)) {
      parts.push_back(render_group(predicate, objects, 4));
    }
    return fmt::format("{}\n    {} .\n", head, fmt::join(parts, " ;\n    "));
  }

  const Graph& graph_;
  std::unordered_map<Term, std::vector<const Triple*>, TermHash> out_;
  std::unordered_set<Term, TermHash> inline_;
  std::vector<Term> top_level_;
  std::map<std::string, std::string> labels_;
  std::unordered_map<Term, std::vector<Group>, TermHash> groups_;
  std::unordered_map<Term, std::string, TermHash> flat_;
};

}  // namespace

std::string serialize_turtle(const Graph& graph) { return Writer(graph).run(); }

void write_turtle_file(const Graph& graph, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << serialize_turtle(graph);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace cohortkg::kg
