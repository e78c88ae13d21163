// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/term.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include <fmt/format.h>

#include "cohortkg/vocabulary.hpp"

namespace cohortkg::kg {
namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool valid_blank_label(std::string_view label) {
  if (label.empty()) return false;
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    is_digit(c) || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::string escape_for_display(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

bool is_numeric_datatype(const std::string& datatype) {
  return datatype == iri::kXsdInteger || datatype == iri::kXsdDecimal ||
         datatype == iri::kXsdDouble;
}

}  // namespace

Term Term::iri(std::string value) {
  return Term(TermKind::kIri, std::move(value), {}, {});
}

Term Term::blank(std::string label) {
  return Term(TermKind::kBlank, std::move(label), {}, {});
}

Term Term::literal(std::string lexical, std::string datatype,
                   std::string language) {
  if (!language.empty()) datatype = iri::kRdfLangString;
  if (datatype.empty()) datatype = iri::kXsdString;
  if (datatype == iri::kXsdInteger) {
    if (auto canonical = canonical_integer(lexical)) lexical = *canonical;
  } else if (datatype == iri::kXsdDecimal) {
    if (auto canonical = canonical_decimal(lexical)) lexical = *canonical;
  }
  return Term(TermKind::kLiteral, std::move(lexical), std::move(datatype),
              std::move(language));
}

Term Term::string(std::string text, std::string language) {
  return literal(std::move(text), {}, std::move(language));
}

Term Term::integer(std::int64_t value) {
  return Term(TermKind::kLiteral, std::to_string(value), iri::kXsdInteger, {});
}

Term Term::decimal(double value) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                 std::chars_format::fixed);
  std::string text =
      ec == std::errc() ? std::string(buffer, end) : std::string("nan");
  return literal(std::move(text), iri::kXsdDecimal);
}

bool Term::is_numeric() const {
  return is_literal() && is_numeric_datatype(datatype_);
}

std::optional<double> Term::as_number() const {
  if (!is_numeric()) return std::nullopt;
  double value = 0.0;
  const char* first = value_.data();
  const char* last = first + value_.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string Term::to_string() const {
  switch (kind_) {
    case TermKind::kIri:
      return fmt::format("<{}>", value_);
    case TermKind::kBlank:
      return fmt::format("_:{}", value_);
    case TermKind::kLiteral:
      if (!language_.empty()) {
        return fmt::format("\"{}\"@{}", escape_for_display(value_), language_);
      }
      return fmt::format("\"{}\"^^<{}>", escape_for_display(value_),
                         datatype_);
  }
  return {};
}

std::size_t TermHash::operator()(const Term& term) const noexcept {
  std::hash<std::string> h;
  std::size_t seed = static_cast<std::size_t>(term.kind());
  seed = mix(seed, h(term.value()));
  if (term.is_literal()) {
    seed = mix(seed, h(term.datatype()));
    seed = mix(seed, h(term.language()));
  }
  return seed;
}

std::size_t TripleHash::operator()(const Triple& triple) const noexcept {
  TermHash h;
  return mix(mix(h(triple.subject), h(triple.predicate)), h(triple.object));
}

bool is_absolute_iri(std::string_view iri) {
  const auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  const char first = iri.front();
  if (!((first >= 'a' && first <= 'z') || (first >= 'A' && first <= 'Z'))) {
    return false;
  }
  for (std::size_t i = 1; i < colon; ++i) {
    const char c = iri[i];
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    is_digit(c) || c == '+' || c == '-' || c == '.';
    if (!ok) return false;
  }
  for (char c : iri) {
    if (static_cast<unsigned char>(c) <= 0x20) return false;
    switch (c) {
      case '<': case '>': case '"': case '{': case '}':
      case '|': case '^': case '`': case '\\':
        return false;
      default:
        break;
    }
  }
  return true;
}

std::optional<std::string> canonical_integer(std::string_view lexical) {
  std::string_view body = lexical;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) return std::nullopt;
  for (char c : body) {
    if (!is_digit(c)) return std::nullopt;
  }
  const auto nz = body.find_first_not_of('0');
  if (nz == std::string_view::npos) return std::string("0");
  std::string out = negative ? "-" : "";
  out.append(body.substr(nz));
  return out;
}

std::optional<std::string> canonical_decimal(std::string_view lexical) {
  std::string_view body = lexical;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  const auto dot = body.find('.');
  std::string_view whole = body.substr(0, dot);
  std::string_view fraction =
      dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (whole.empty() && fraction.empty()) return std::nullopt;
  for (char c : whole) {
    if (!is_digit(c)) return std::nullopt;
  }
  for (char c : fraction) {
    if (!is_digit(c)) return std::nullopt;
  }
  const auto wnz = whole.find_first_not_of('0');
  whole = wnz == std::string_view::npos ? std::string_view{} : whole.substr(wnz);
  const auto fnz = fraction.find_last_not_of('0');
  fraction = fnz == std::string_view::npos ? std::string_view{}
                                           : fraction.substr(0, fnz + 1);
  std::string out;
  if (negative && !(whole.empty() && fraction.empty())) out.push_back('-');
  out.append(whole.empty() ? "0" : std::string(whole));
  out.push_back('.');
  out.append(fraction.empty() ? "0" : std::string(fraction));
  return out;
}

void validate_term(const Term& term) {
  switch (term.kind()) {
    case TermKind::kIri:
      if (!is_absolute_iri(term.value())) {
        throw ValidationError(
            fmt::format("IRI is not absolute: {}", term.to_string()));
      }
      break;
    case TermKind::kBlank:
      if (!valid_blank_label(term.value())) {
        throw ValidationError(
            fmt::format("invalid blank-node label: {}", term.to_string()));
      }
      break;
    case TermKind::kLiteral:
      if (!is_absolute_iri(term.datatype())) {
        throw ValidationError(
            fmt::format("literal datatype is not absolute: {}",
                        term.to_string()));
      }
      if (is_numeric_datatype(term.datatype()) && !term.as_number()) {
        throw ValidationError(fmt::format(
            "numeric literal is not a finite number: {}", term.to_string()));
      }
      if (term.datatype() == iri::kXsdInteger &&
          !canonical_integer(term.value())) {
        throw ValidationError(
            fmt::format("malformed integer literal: {}", term.to_string()));
      }
      if (term.datatype() == iri::kXsdDecimal &&
          !canonical_decimal(term.value())) {
        throw ValidationError(
            fmt::format("malformed decimal literal: {}", term.to_string()));
      }
      break;
  }
}

void validate_triple(const Triple& triple) {
  if (triple.subject.is_literal()) {
    throw ValidationError(fmt::format("subject must be an IRI or blank node: {}",
                                      triple.subject.to_string()));
  }
  if (!triple.predicate.is_iri()) {
    throw ValidationError(fmt::format("predicate must be an IRI: {}",
                                      triple.predicate.to_string()));
  }
  validate_term(triple.subject);
  validate_term(triple.predicate);
  validate_term(triple.object);
}

}  // namespace cohortkg::kg
