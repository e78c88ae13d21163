// SPDX-License-Identifier: Apache-2.0

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cohortkg/turtle.hpp"
#include "cohortkg/vocabulary.hpp"

namespace cohortkg::kg {

TurtleSyntaxError::TurtleSyntaxError(std::size_t line, std::size_t column,
                                     const std::string& message)
    : std::runtime_error(fmt::format("{}:{}: {}", line, column, message)),
      line_(line),
      column_(column) {}

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '-';
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Graph run() {
    skip_space();
    while (!at_end()) {
      statement();
      skip_space();
    }
    return finish();
  }

 private:
  // --- cursor -------------------------------------------------------------

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw TurtleSyntaxError(line_, column_, message);
  }

  void skip_space() {
    while (!at_end()) {
      const char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void expect(char c, std::string_view what) {
    skip_space();
    if (peek() != c) {
      fail(fmt::format("expected '{}' {}", c, what));
    }
    advance();
  }

  bool starts_with_keyword(std::string_view keyword, bool case_insensitive) const {
    if (text_.size() - pos_ < keyword.size()) return false;
    for (std::size_t i = 0; i < keyword.size(); ++i) {
      char c = text_[pos_ + i];
      if (case_insensitive) c = static_cast<char>(std::toupper(c));
      if (c != keyword[i]) return false;
    }
    return !is_name_char(peek(keyword.size()));
  }

  // --- directives ---------------------------------------------------------

  void statement() {
    if (peek() == '@') {
      if (starts_with_keyword("@prefix", false)) {
        skip(7);
        prefix_directive();
        expect('.', "after @prefix directive");
        return;
      }
      if (starts_with_keyword("@base", false)) {
        fail("@base is not supported; use absolute IRIs");
      }
      fail("unknown directive");
    }
    if (starts_with_keyword("PREFIX", true)) {
      skip(6);
      prefix_directive();
      return;
    }
    if (starts_with_keyword("BASE", true)) {
      fail("BASE is not supported; use absolute IRIs");
    }
    triples();
    expect('.', "at end of statement");
  }

  void skip(std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) advance();
  }

  void prefix_directive() {
    skip_space();
    std::string label;
    while (!at_end() && peek() != ':') {
      const char c = peek();
      if (!(is_name_char(c) || c == '.')) fail("invalid prefix label");
      label.push_back(advance());
    }
    if (at_end()) fail("expected ':' in prefix declaration");
    advance();
    skip_space();
    if (peek() != '<') fail("expected IRI in prefix declaration");
    std::string base = iri_ref();
    prefixes_.set(std::move(label), std::move(base));
  }

  // --- triples ------------------------------------------------------------

  void triples() {
    skip_space();
    if (peek() == '[') {
      Term node = blank_property_list();
      skip_space();
      if (peek() != '.') predicate_object_list(node);
      return;
    }
    if (peek() == '(') fail("collections are not supported");
    Term subject = subject_term();
    predicate_object_list(subject);
  }

  Term subject_term() {
    skip_space();
    const char c = peek();
    if (c == '<') return Term::iri(iri_ref());
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '"' || c == '\'' || std::isdigit(static_cast<unsigned char>(c)) ||
        c == '+' || c == '-') {
      fail("literal in subject position");
    }
    return Term::iri(prefixed_name());
  }

  void predicate_object_list(const Term& subject) {
    verb_and_objects(subject);
    for (;;) {
      skip_space();
      if (peek() != ';') return;
      while (peek() == ';') {
        advance();
        skip_space();
      }
      const char c = peek();
      if (c == '.' || c == ']' || at_end()) return;
      verb_and_objects(subject);
    }
  }

  void verb_and_objects(const Term& subject) {
    skip_space();
    Term predicate;
    if (peek() == 'a' && !is_name_char(peek(1)) && peek(1) != ':') {
      advance();
      predicate = Term::iri(iri::kRdfType);
    } else if (peek() == '<') {
      predicate = Term::iri(iri_ref());
    } else if (peek() == '_' && peek(1) == ':') {
      fail("blank node in predicate position");
    } else if (peek() == '"' || peek() == '[') {
      fail("predicate must be an IRI");
    } else {
      predicate = Term::iri(prefixed_name());
    }
    for (;;) {
      Term object = object_term();
      emit(subject, predicate, std::move(object));
      skip_space();
      if (peek() != ',') return;
      advance();
    }
  }

  Term object_term() {
    skip_space();
    const char c = peek();
    if (at_end()) fail("unexpected end of input, expected object");
    if (c == '<') return Term::iri(iri_ref());
    if (c == '_' && peek(1) == ':') return blank_label();
    if (c == '[') return blank_property_list();
    if (c == '(') fail("collections are not supported");
    if (c == '"' || c == '\'') return string_literal();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return numeric_literal();
    }
    if (starts_with_keyword("true", false) || starts_with_keyword("false", false)) {
      std::string word = peek() == 't' ? "true" : "false";
      skip(word.size());
      return Term::literal(word, iri::kXsdBoolean);
    }
    return Term::iri(prefixed_name());
  }

  Term blank_property_list() {
    advance();  // '['
    Term node = fresh_anonymous();
    skip_space();
    if (peek() == ']') {
      advance();
      return node;
    }
    predicate_object_list(node);
    expect(']', "to close blank node");
    return node;
  }

  // --- terms --------------------------------------------------------------

  std::string iri_ref() {
    const std::size_t line = line_, column = column_;
    advance();  // '<'
    std::string out;
    while (!at_end() && peek() != '>') {
      const char c = advance();
      if (c == '\n' || c == ' ' || c == '<' || c == '"') {
        throw TurtleSyntaxError(line, column, "malformed IRI reference");
      }
      out.push_back(c);
    }
    if (at_end()) throw TurtleSyntaxError(line, column, "unterminated IRI");
    advance();  // '>'
    if (!is_absolute_iri(out)) {
      throw TurtleSyntaxError(line, column,
                              fmt::format("relative IRI <{}> not supported", out));
    }
    return out;
  }

  std::string prefixed_name() {
    const std::size_t line = line_, column = column_;
    std::string prefix;
    while (!at_end() && peek() != ':') {
      const char c = peek();
      if (!(is_name_char(c) || c == '.')) {
        if (prefix.empty()) fail(fmt::format("unexpected character '{}'", c));
        break;
      }
      prefix.push_back(advance());
    }
    if (peek() != ':') {
      throw TurtleSyntaxError(line, column,
                              fmt::format("expected prefixed name, got '{}'", prefix));
    }
    advance();
    std::string local;
    while (!at_end()) {
      const char c = peek();
      if (c == '\\' && pos_ + 1 < text_.size()) {
        advance();
        local.push_back(advance());
        continue;
      }
      if (is_name_char(c) || std::isdigit(static_cast<unsigned char>(c)) ||
          c == ':' || c == '%') {
        local.push_back(advance());
        continue;
      }
      // A '.' belongs to the name only when more name characters follow.
      if (c == '.' && is_name_char(peek(1))) {
        local.push_back(advance());
        continue;
      }
      break;
    }
    auto base = prefixes_.find(prefix);
    if (!base) {
      throw PrefixResolutionError(fmt::format(
          "{}:{}: undeclared prefix '{}' in '{}:{}'", line, column, prefix,
          prefix, local));
    }
    return *base + local;
  }

  Term blank_label() {
    skip(2);  // "_:"
    std::string label;
    while (!at_end()) {
      const char c = peek();
      if (is_name_char(c) || std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '.' && is_name_char(peek(1)))) {
        label.push_back(advance());
      } else {
        break;
      }
    }
    if (label.empty()) fail("empty blank node label");
    explicit_labels_.insert(label);
    return Term::blank(std::move(label));
  }

  Term string_literal() {
    const char quote = peek();
    const bool long_form = peek(1) == quote && peek(2) == quote;
    skip(long_form ? 3 : 1);
    std::string value;
    for (;;) {
      if (at_end()) fail("unterminated string literal");
      const char c = peek();
      if (long_form && c == quote && peek(1) == quote && peek(2) == quote) {
        skip(3);
        break;
      }
      if (!long_form && c == quote) {
        advance();
        break;
      }
      if (!long_form && (c == '\n' || c == '\r')) fail("newline in string literal");
      if (c == '\\') {
        advance();
        value += escape();
        continue;
      }
      value.push_back(advance());
    }
    if (peek() == '@') {
      advance();
      std::string lang;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') {
        lang.push_back(advance());
      }
      if (lang.empty()) fail("empty language tag");
      return Term::literal(std::move(value), {}, std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      skip(2);
      std::string datatype =
          peek() == '<' ? iri_ref() : prefixed_name();
      return Term::literal(std::move(value), std::move(datatype));
    }
    return Term::string(std::move(value));
  }

  std::string escape() {
    if (at_end()) fail("dangling escape");
    const char c = advance();
    switch (c) {
      case 't': return "\t";
      case 'n': return "\n";
      case 'r': return "\r";
      case 'b': return "\b";
      case 'f': return "\f";
      case '"': return "\"";
      case '\'': return "'";
      case '\\': return "\\";
      case 'u':
      case 'U': {
        const int digits = c == 'u' ? 4 : 8;
        std::string hex;
        for (int i = 0; i < digits; ++i) {
          if (!std::isxdigit(static_cast<unsigned char>(peek()))) {
            fail("malformed unicode escape");
          }
          hex.push_back(advance());
        }
        return utf8(static_cast<std::uint32_t>(std::stoul(hex, nullptr, 16)));
      }
      default:
        fail(fmt::format("unknown escape '\\{}'", c));
    }
  }

  static std::string utf8(std::uint32_t cp) {
    std::string out;
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
  }

  Term numeric_literal() {
    std::string text;
    if (peek() == '+' || peek() == '-') text.push_back(advance());
    bool dot = false, exponent = false, digits = false;
    while (!at_end()) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = true;
        text.push_back(advance());
      } else if (c == '.' && !dot && !exponent &&
                 std::isdigit(static_cast<unsigned char>(peek(1)))) {
        dot = true;
        text.push_back(advance());
      } else if ((c == 'e' || c == 'E') && digits && !exponent) {
        exponent = true;
        text.push_back(advance());
        if (peek() == '+' || peek() == '-') text.push_back(advance());
        if (!std::isdigit(static_cast<unsigned char>(peek()))) {
          fail("malformed exponent");
        }
      } else {
        break;
      }
    }
    if (!digits) fail("malformed number");
    if (exponent) return Term::literal(std::move(text), iri::kXsdDouble);
    if (dot) return Term::literal(std::move(text), iri::kXsdDecimal);
    return Term::literal(std::move(text), iri::kXsdInteger);
  }

  // --- output -------------------------------------------------------------

  Term fresh_anonymous() {
    return Term::blank(fmt::format("#{}", anonymous_++));
  }

  void emit(const Term& s, const Term& p, Term o) {
    parsed_.push_back({s, p, std::move(o), line_, column_});
  }

  // Anonymous nodes get `b<n>` labels that avoid every explicit label.
  Graph finish() {
    std::vector<std::string> fresh(anonymous_);
    std::size_t counter = 0;
    for (auto& label : fresh) {
      do {
        label = fmt::format("b{}", counter++);
      } while (explicit_labels_.contains(label));
    }
    auto relabel = [&](const Term& term, bool anonymous) {
      if (!term.is_blank() || !anonymous) return term;
      return Term::blank(fresh[std::stoul(term.value().substr(1))]);
    };
    Graph graph;
    for (const auto& [label, base] : prefixes_.ordered()) {
      graph.prefixes().set(label, base);
    }
    for (const auto& entry : parsed_) {
      Triple triple{relabel(entry.s, is_anonymous(entry.s)), entry.p,
                    relabel(entry.o, is_anonymous(entry.o))};
      try {
        graph.insert(std::move(triple));
      } catch (const ValidationError& e) {
        throw TurtleSyntaxError(entry.line, entry.column, e.what());
      }
    }
    return graph;
  }

  // Temporary anonymous labels start with '#', which explicit labels cannot.
  static bool is_anonymous(const Term& term) {
    return term.is_blank() && !term.value().empty() && term.value()[0] == '#';
  }

  struct Parsed {
    Term s, p, o;
    std::size_t line, column;
  };

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  PrefixMap prefixes_;
  std::vector<Parsed> parsed_;
  std::set<std::string> explicit_labels_;
  std::size_t anonymous_ = 0;
};

}  // namespace

Graph parse_turtle(std::string_view text) { return Reader(text).run(); }

Graph read_turtle_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_turtle(buffer.str());
}

}  // namespace cohortkg::kg
