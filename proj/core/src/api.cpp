// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/api.hpp"

#include <algorithm>
#include <charconv>

#include <fmt/format.h>

#include "cohortkg/cohort_query.hpp"
#include "cohortkg/ingest.hpp"

namespace cohortkg::service {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<std::string> segments(std::string_view path) {
  if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < path.size()) {
    std::size_t slash = path.find('/', start);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > start) out.emplace_back(path.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::string percent_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      const int hi = hex_value(text[i + 1]);
      const int lo = hex_value(text[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(text[i]);
  }
  return out;
}

const json& field(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || !it->is_string()) {
    throw std::invalid_argument(fmt::format("'{}' must be a string", key));
  }
  return *it;
}

}  // namespace

BindAddress parse_bind(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw std::invalid_argument(fmt::format("bind address '{}' must be host:port", text));
  }
  BindAddress out;
  out.host = std::string(text.substr(0, colon));
  std::string_view port = text.substr(colon + 1);
  auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), out.port);
  if (ec != std::errc() || end != port.data() + port.size() || out.port < 1 ||
      out.port > 65535) {
    throw std::invalid_argument(fmt::format("port in '{}' must be within [1, 65535]", text));
  }
  return out;
}

void validate(const ServerConfig& config) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(config.corpus_dir)) {
    throw std::invalid_argument("corpus directory not found: " + config.corpus_dir.string());
  }
  if (!fs::is_regular_file(config.patients_file)) {
    throw std::invalid_argument("patients file not found: " + config.patients_file.string());
  }
  if (!fs::is_regular_file(config.vocab_file)) {
    throw std::invalid_argument("vocabulary file not found: " + config.vocab_file.string());
  }
  if (config.static_dir && !fs::is_directory(*config.static_dir)) {
    throw std::invalid_argument("static directory not found: " + config.static_dir->string());
  }
  parse_bind(config.bind_address);
}

Response error_response(int status, std::string_view error, std::string_view detail) {
  Response r;
  r.status = status;
  r.body = ordered_json::object();
  r.body["error"] = std::string(error);
  r.body["detail"] = std::string(detail);
  return r;
}

Api::Api(kg::Graph corpus, ingest::TermVocabulary vocabulary,
         std::vector<similarity::PatientRecord> patients) {
  std::sort(patients.begin(), patients.end(),
            [](const auto& a, const auto& b) { return a.patient_id < b.patient_id; });
  corpus.freeze();
  auto graph = std::make_shared<kg::Graph>(std::move(corpus));
  view_ = std::make_shared<query::CorpusView>(*graph);
  graph_ = std::move(graph);
  vocabulary_ = std::make_shared<ingest::TermVocabulary>(std::move(vocabulary));
  patients_ = std::make_shared<std::vector<similarity::PatientRecord>>(std::move(patients));
}

Api Api::load(const ServerConfig& config) {
  validate(config);
  auto vocabulary = ingest::TermVocabulary::load(config.vocab_file);
  auto corpus = ingest::load_corpus(config.corpus_dir, vocabulary);
  if (corpus.has_errors()) {
    std::string message = "corpus has errors:";
    for (const auto& d : corpus.diagnostics) {
      if (d.severity == ingest::Severity::kError) message += "\n  " + d.to_string();
    }
    throw std::runtime_error(message);
  }
  auto patients = similarity::load_patients(config.patients_file);
  if (!patients.diagnostics.empty()) {
    throw std::runtime_error("patient file: " + patients.diagnostics.front().to_string());
  }
  return Api(ingest::build_corpus_graph(corpus.studies), std::move(vocabulary),
             std::move(patients.patients));
}

Response Api::handle(std::string_view method, std::string_view path,
                     std::string_view body) const {
  try {
    const auto parts = segments(path);
    if (parts.empty() || parts[0] != "api") {
      return error_response(404, "not_found", fmt::format("no route for {}", path));
    }
    const bool get = method == "GET";
    const bool post = method == "POST";
    auto parse_body = [&]() {
      json parsed = json::parse(body.begin(), body.end(), nullptr, false);
      if (parsed.is_discarded() || !parsed.is_object()) {
        throw std::invalid_argument("request body must be a JSON object");
      }
      return parsed;
    };
    auto wrong_method = [&]() {
      return error_response(405, "method_not_allowed",
                            fmt::format("{} is not supported on {}", method, path));
    };
    if (parts.size() == 2 && parts[1] == "studies") {
      return get ? studies() : wrong_method();
    }
    if (parts.size() == 4 && parts[1] == "studies" && parts[3] == "facets") {
      return get ? facets(percent_decode(parts[2])) : wrong_method();
    }
    if (parts.size() == 2 && parts[1] == "patients") {
      return get ? patients() : wrong_method();
    }
    if (parts.size() == 2 && parts[1] == "similarity") {
      return post ? compare(parse_body()) : wrong_method();
    }
    if (parts.size() == 3 && parts[1] == "query") {
      if (parts[2] != "match" && parts[2] != "limitation" && parts[2] != "quality") {
        return error_response(404, "not_found", fmt::format("unknown query '{}'", parts[2]));
      }
      return post ? query(parts[2], parse_body()) : wrong_method();
    }
    return error_response(404, "not_found", fmt::format("no route for {}", path));
  } catch (const std::invalid_argument& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const json::exception& e) {
    return error_response(400, "bad_request", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal", e.what());
  }
}

Response Api::studies() const {
  Response r;
  r.body = ordered_json::array();
  for (const auto& s : view_->studies()) {
    ordered_json item;
    item["study_id"] = s.study_id;
    item["title"] = s.title;
    item["registry_link"] = s.registry_link ? ordered_json(*s.registry_link) : ordered_json();
    item["arm_count"] = s.arms.size();
    item["cohort_size"] = s.cohort_size();
    r.body.push_back(std::move(item));
  }
  return r;
}

Response Api::facets(const std::string& study_id) const {
  const auto* study = view_->find(study_id);
  if (!study) return error_response(404, "not_found", fmt::format("unknown study '{}'", study_id));
  Response r;
  r.body["study_id"] = study->study_id;
  std::set<std::string> available;
  ordered_json arms = ordered_json::array();
  for (const auto& arm : study->arms) {
    const auto ids = similarity::arm_facets(arm);
    available.insert(ids.begin(), ids.end());
    ordered_json item;
    item["arm_id"] = arm.arm_id;
    item["kind"] = std::string(ingest::to_string(arm.kind));
    item["population_size"] = arm.population_size;
    item["available_facets"] = ids;
    arms.push_back(std::move(item));
  }
  r.body["arms"] = std::move(arms);
  ordered_json facets = ordered_json::array();
  for (const auto& f : similarity::canonical_facets()) {
    facets.push_back({{"id", f.id},
                      {"feature", f.characteristic},
                      {"label", f.label},
                      {"unit", f.unit_label},
                      {"available", available.contains(f.id)}});
  }
  r.body["facets"] = std::move(facets);
  return r;
}

Response Api::patients() const {
  Response r;
  r.body = ordered_json::array();
  for (const auto& p : *patients_) {
    ordered_json features = ordered_json::object();
    for (const auto& f : similarity::canonical_facets()) {
      auto it = p.features.find(f.characteristic);
      features[f.id] = it == p.features.end() ? ordered_json() : ordered_json(it->second.value);
    }
    r.body.push_back({{"patient_id", p.patient_id}, {"features", std::move(features)}});
  }
  return r;
}

Response Api::compare(const json& body) const {
  const std::string study_id = field(body, "study_id").get<std::string>();
  const std::string arm_id = field(body, "arm_id").get<std::string>();
  const std::string patient_id = field(body, "patient_id").get<std::string>();

  const auto* study = view_->find(study_id);
  if (!study) return error_response(404, "not_found", fmt::format("unknown study '{}'", study_id));
  const auto* arm = study->find_arm(arm_id);
  if (!arm) {
    return error_response(404, "not_found",
                          fmt::format("unknown arm '{}' in study '{}'", arm_id, study_id));
  }
  auto patient = std::find_if(patients_->begin(), patients_->end(),
                              [&](const auto& p) { return p.patient_id == patient_id; });
  if (patient == patients_->end()) {
    return error_response(404, "not_found", fmt::format("unknown patient '{}'", patient_id));
  }

  const auto available = similarity::arm_facets(*arm);
  std::vector<std::string> requested;
  if (auto it = body.find("features"); it != body.end() && !it->is_null()) {
    if (!it->is_array()) throw std::invalid_argument("'features' must be an array");
    for (const auto& f : *it) {
      if (!f.is_string()) throw std::invalid_argument("'features' must hold strings");
      const auto* facet = similarity::find_facet(f.get<std::string>());
      if (!facet) {
        throw std::invalid_argument(fmt::format("unknown feature '{}'", f.get<std::string>()));
      }
      if (std::find(requested.begin(), requested.end(), facet->id) == requested.end()) {
        requested.push_back(facet->id);
      }
    }
  } else {
    requested = available;
  }
  for (const auto& id : requested) {
    if (std::find(available.begin(), available.end(), id) == available.end()) {
      Response r = error_response(422, "unavailable_feature",
                                  fmt::format("arm '{}' does not report '{}'", arm_id, id));
      r.body["available"] = available;
      return r;
    }
    const auto* facet = similarity::find_facet(id);
    if (!patient->features.contains(facet->characteristic)) {
      return error_response(422, "missing_patient_value",
                            fmt::format("patient '{}' has no value for '{}'", patient_id, id));
    }
  }
  if (requested.size() < 3) {
    return error_response(422, "insufficient_axes",
                          fmt::format("a star plot needs at least 3 features, got {}",
                                      requested.size()));
  }
  try {
    auto report = similarity::compare(*arm, study_id, *patient, requested);
    auto series = similarity::star_plot_series(report);
    Response r;
    r.body["report"] = similarity::to_json(report);
    r.body["plot"] = similarity::to_json(series);
    return r;
  } catch (const similarity::UnitError& e) {
    return error_response(422, "unit_mismatch", e.what());
  } catch (const similarity::InsufficientAxesError& e) {
    return error_response(422, "insufficient_axes", e.what());
  }
}

Response Api::query(const std::string& kind, const json& body) const {
  query::QueryReport report;
  if (kind == "match") {
    auto request = query::parse_match_request(body, *vocabulary_);
    report = query::study_match(*view_, request.criteria, request.conjunctive, request.rule);
  } else if (kind == "limitation") {
    auto request = query::parse_limitation_request(body, *vocabulary_);
    report = query::study_limitation(*view_, request.subgroup, request.options);
  } else {
    auto params = query::parse_quality_request(body, *vocabulary_);
    report = query::study_quality(*view_, *vocabulary_, params);
  }
  Response r;
  r.body = report;
  return r;
}

}  // namespace cohortkg::service
