// SPDX-License-Identifier: Apache-2.0
//
// RDF terms and triples.

#ifndef COHORTKG_TERM_HPP_
#define COHORTKG_TERM_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cohortkg::kg {

enum class TermKind : std::uint8_t { kIri, kBlank, kLiteral };

// Raised when a term or triple violates the data-model invariants. The
// message always names the offending term.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Term {
 public:
  Term() = default;

  static Term iri(std::string value);
  // `label` without the leading "_:".
  static Term blank(std::string label);
  // Numeric datatypes (xsd:integer, xsd:decimal) get their lexical form
  // canonicalized when it parses; otherwise the lexical form is kept and
  // validation rejects it later.
  static Term literal(std::string lexical, std::string datatype,
                      std::string language = {});
  static Term string(std::string text, std::string language = {});
  static Term integer(std::int64_t value);
  // Shortest decimal form that round-trips the double, always with a '.'.
  static Term decimal(double value);

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::kIri; }
  bool is_blank() const { return kind_ == TermKind::kBlank; }
  bool is_literal() const { return kind_ == TermKind::kLiteral; }

  // IRI string, blank-node label, or literal lexical form.
  const std::string& value() const { return value_; }
  const std::string& datatype() const { return datatype_; }
  const std::string& language() const { return language_; }

  bool is_numeric() const;
  // Numeric value of an integer/decimal/double literal.
  std::optional<double> as_number() const;

  // N-Triples-like rendering, used in diagnostics.
  std::string to_string() const;

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(TermKind kind, std::string value, std::string datatype,
       std::string language)
      : kind_(kind),
        value_(std::move(value)),
        datatype_(std::move(datatype)),
        language_(std::move(language)) {}

  TermKind kind_ = TermKind::kIri;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

struct TermHash {
  std::size_t operator()(const Term& term) const noexcept;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& triple) const noexcept;
};

// True when `iri` carries a scheme and no characters forbidden in IRIREF.
bool is_absolute_iri(std::string_view iri);

// Canonical lexical forms. Return nullopt when `lexical` is not valid for
// the datatype.
std::optional<std::string> canonical_integer(std::string_view lexical);
std::optional<std::string> canonical_decimal(std::string_view lexical);

void validate_term(const Term& term);
// Throws ValidationError when the triple breaks the subject/predicate rules
// or contains a malformed term.
void validate_triple(const Triple& triple);

}  // namespace cohortkg::kg

#endif  // COHORTKG_TERM_HPP_
