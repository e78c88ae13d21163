// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cohortkg/cohort_query.hpp"

namespace cohortkg::query {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

template <class E, class Parse>
E enum_from(const ordered_json& in, std::string_view field, Parse parse) {
  auto value = parse(in.at(std::string(field)).template get<std::string>());
  if (!value) throw QueryError(fmt::format("invalid value for '{}'", field));
  return *value;
}

std::optional<Granularity> parse_granularity(std::string_view text) {
  if (text == "arm") return Granularity::kArm;
  if (text == "study") return Granularity::kStudy;
  return std::nullopt;
}

std::optional<Representation> parse_representation(std::string_view text) {
  for (auto r : {Representation::kRepresented, Representation::kUnderrepresented,
                 Representation::kUnmet, Representation::kAbsent}) {
    if (text == to_string(r)) return r;
  }
  return std::nullopt;
}

const json& require(const json& body, const std::string& key) {
  if (!body.is_object()) throw QueryError("request body must be a JSON object");
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) {
    throw QueryError(fmt::format("missing field '{}'", key));
  }
  return *it;
}

double number(const json& value, const std::string& field) {
  if (!value.is_number()) throw QueryError(fmt::format("'{}' must be a number", field));
  const double d = value.get<double>();
  if (!std::isfinite(d)) throw QueryError(fmt::format("'{}' must be finite", field));
  return d;
}

double optional_number(const json& body, const std::string& key, double fallback) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return fallback;
  return number(*it, key);
}

}  // namespace

void to_json(ordered_json& out, const QueryReport& report) {
  out = ordered_json::object();
  out["kind"] = report.kind;
  out["question"] = report.question;
  out["granularity"] = to_string(report.granularity);
  out["corpus_size"] = report.corpus_size;
  out["numerator"] = report.numerator;
  out["denominator"] = report.denominator;
  out["percentage"] = report.percentage;
  ordered_json matches = ordered_json::array();
  for (const auto& m : report.matches) {
    ordered_json item;
    item["study_id"] = m.study_id;
    item["title"] = m.title;
    item["registry_link"] = m.registry_link ? ordered_json(*m.registry_link) : ordered_json();
    item["arm_ids"] = m.arm_ids;
    ordered_json values = ordered_json::array();
    for (const auto& v : m.values) {
      values.push_back({{"arm_id", v.arm_id},
                        {"characteristic", v.characteristic},
                        {"quantity", v.quantity},
                        {"value", v.value}});
    }
    item["values"] = std::move(values);
    if (m.cohort_size) item["cohort_size"] = *m.cohort_size;
    if (m.intervention_families) item["intervention_families"] = *m.intervention_families;
    matches.push_back(std::move(item));
  }
  out["matches"] = std::move(matches);
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.representation) {
    rows.push_back({{"study_id", r.study_id},
                    {"status", to_string(r.status)},
                    {"representing_arms", r.representing_arms},
                    {"other_arms", r.other_arms}});
  }
  out["representation"] = std::move(rows);
  out["warnings"] = report.warnings;
}

void from_json(const ordered_json& in, QueryReport& report) {
  report = QueryReport{};
  report.kind = in.at("kind").get<std::string>();
  report.question = in.at("question").get<std::string>();
  report.granularity = enum_from<Granularity>(in, "granularity", parse_granularity);
  report.corpus_size = in.at("corpus_size").get<std::int64_t>();
  report.numerator = in.at("numerator").get<std::int64_t>();
  report.denominator = in.at("denominator").get<std::int64_t>();
  report.percentage = in.at("percentage").get<double>();
  for (const auto& item : in.at("matches")) {
    StudyMatch m;
    m.study_id = item.at("study_id").get<std::string>();
    m.title = item.at("title").get<std::string>();
    if (!item.at("registry_link").is_null()) {
      m.registry_link = item.at("registry_link").get<std::string>();
    }
    m.arm_ids = item.at("arm_ids").get<std::vector<std::string>>();
    for (const auto& v : item.at("values")) {
      m.values.push_back({v.at("arm_id").get<std::string>(),
                          v.at("characteristic").get<std::string>(),
                          v.at("quantity").get<std::string>(), v.at("value").get<double>()});
    }
    if (item.contains("cohort_size")) m.cohort_size = item["cohort_size"].get<std::int64_t>();
    if (item.contains("intervention_families")) {
      m.intervention_families = item["intervention_families"].get<std::int64_t>();
    }
    report.matches.push_back(std::move(m));
  }
  for (const auto& row : in.at("representation")) {
    StudyRepresentation r;
    r.study_id = row.at("study_id").get<std::string>();
    r.status = enum_from<Representation>(row, "status", parse_representation);
    r.representing_arms = row.at("representing_arms").get<std::vector<std::string>>();
    r.other_arms = row.at("other_arms").get<std::vector<std::string>>();
    report.representation.push_back(std::move(r));
  }
  report.warnings = in.at("warnings").get<std::vector<std::string>>();
}

std::string resolve_term(const json& value, const ingest::TermVocabulary& vocabulary,
                         const std::string& field) {
  if (!value.is_string() || value.get<std::string>().empty()) {
    throw QueryError(fmt::format("'{}' must be a non-empty string", field));
  }
  return vocabulary.resolve(value.get<std::string>()).iri;
}

FeatureCriterion parse_criterion(const json& body, const ingest::TermVocabulary& vocabulary) {
  FeatureCriterion c;
  const json& test = require(body, "test");
  const std::string type = require(test, "type").is_string()
                               ? test["type"].get<std::string>()
                               : throw QueryError("'test.type' must be a string");
  if (auto it = body.find("characteristic"); it != body.end() && !it->is_null()) {
    c.characteristic = resolve_term(*it, vocabulary, "characteristic");
  }
  if (type == "has_subset_with") {
    HasSubsetWith s;
    const json& values = require(test, "values");
    if (!values.is_array()) throw QueryError("'test.values' must be an array");
    for (const auto& v : values) s.values.push_back(resolve_term(v, vocabulary, "test.values"));
    s.min_percentage = optional_number(test, "min_percentage", 0.0);
    c.test = std::move(s);
  } else if (type == "statistic_bound") {
    StatisticBound b;
    const json& which = require(test, "which");
    const json& op = require(test, "op");
    auto q = which.is_string() ? parse_quantity(which.get<std::string>()) : std::nullopt;
    if (!q) throw QueryError("'test.which' must be mean, median, upper_bound or lower_bound");
    auto o = op.is_string() ? parse_comparison(op.get<std::string>()) : std::nullopt;
    if (!o) throw QueryError("'test.op' must be <, <=, > or >=");
    b.which = *q;
    b.op = *o;
    b.threshold = number(require(test, "threshold"), "test.threshold");
    c.test = b;
  } else if (type == "has_characteristic") {
    c.test = HasCharacteristic{};
  } else {
    throw QueryError(fmt::format("unknown test type '{}'", type));
  }
  validate(c);
  return c;
}

MatchRequest parse_match_request(const json& body, const ingest::TermVocabulary& vocabulary) {
  MatchRequest request;
  const json& criteria = require(body, "criteria");
  if (!criteria.is_array() || criteria.empty()) {
    throw QueryError("'criteria' must be a non-empty array");
  }
  for (const auto& c : criteria) request.criteria.push_back(parse_criterion(c, vocabulary));
  if (auto it = body.find("conjunctive"); it != body.end() && !it->is_null()) {
    if (!it->is_boolean()) throw QueryError("'conjunctive' must be a boolean");
    request.conjunctive = it->get<bool>();
  }
  request.rule.sd_multiplier = optional_number(body, "bound_sd_multiplier", 2.0);
  return request;
}

LimitationRequest parse_limitation_request(const json& body,
                                           const ingest::TermVocabulary& vocabulary) {
  LimitationRequest request;
  request.subgroup = parse_criterion(require(body, "subgroup"), vocabulary);
  request.options.underrepresentation_threshold =
      optional_number(body, "underrepresentation_threshold", 10.0);
  request.options.rule.sd_multiplier = optional_number(body, "bound_sd_multiplier", 2.0);
  return request;
}

QualityParams parse_quality_request(const json& body, const ingest::TermVocabulary& vocabulary) {
  QualityParams params;
  const json& min_cohort = require(body, "min_cohort");
  if (!min_cohort.is_number_integer()) throw QueryError("'min_cohort' must be an integer");
  params.min_cohort = min_cohort.get<std::int64_t>();
  params.drug_family = resolve_term(require(body, "drug_family"), vocabulary, "drug_family");
  params.arm_fraction = number(require(body, "arm_fraction"), "arm_fraction");
  if (params.min_cohort < 0) throw QueryError("min_cohort must be >= 0");
  if (params.arm_fraction <= 0 || params.arm_fraction > 1) {
    throw QueryError("arm_fraction must satisfy 0 < f <= 1");
  }
  return params;
}

}  // namespace cohortkg::query
