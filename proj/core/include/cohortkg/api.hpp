// SPDX-License-Identifier: Apache-2.0
//
// JSON API behind the faceted browser. `Api::handle` is transport-free so
// it can be tested without sockets; `serve` binds it to HTTP.

#ifndef COHORTKG_API_HPP_
#define COHORTKG_API_HPP_

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cohortkg/corpus_view.hpp"
#include "cohortkg/graph.hpp"
#include "cohortkg/similarity.hpp"
#include "cohortkg/term_vocabulary.hpp"

namespace cohortkg::service {

struct BindAddress {
  std::string host;
  int port = 0;
};

// "host:port" with port in [1, 65535]. Throws std::invalid_argument.
BindAddress parse_bind(std::string_view text);

struct ServerConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path patients_file;
  std::filesystem::path vocab_file;
  std::string bind_address = "127.0.0.1:8080";
  // Origins allowed by CORS; "*" allows any.
  std::vector<std::string> cors_allowlist{"*"};
  // Optional directory of static UI files served at "/".
  std::optional<std::filesystem::path> static_dir;
};

// Throws std::invalid_argument naming the first problem (missing path,
// bad bind address).
void validate(const ServerConfig& config);

struct Response {
  int status = 200;
  nlohmann::ordered_json body;
};

class Api {
 public:
  // `corpus` is frozen on construction.
  Api(kg::Graph corpus, ingest::TermVocabulary vocabulary,
      std::vector<similarity::PatientRecord> patients);

  // Loads vocabulary, corpus and patients per `config`. Ingestion errors
  // throw std::runtime_error carrying the diagnostics.
  static Api load(const ServerConfig& config);

  // Routes one request. Never throws; failures map to {error, detail}.
  Response handle(std::string_view method, std::string_view path,
                  std::string_view body = {}) const;

  const query::CorpusView& corpus() const { return *view_; }
  const kg::Graph& graph() const { return *graph_; }

 private:
  Response studies() const;
  Response facets(const std::string& study_id) const;
  Response patients() const;
  Response compare(const nlohmann::json& body) const;
  Response query(const std::string& kind, const nlohmann::json& body) const;

  std::shared_ptr<const kg::Graph> graph_;
  std::shared_ptr<const query::CorpusView> view_;
  std::shared_ptr<const ingest::TermVocabulary> vocabulary_;
  std::shared_ptr<const std::vector<similarity::PatientRecord>> patients_;
};

Response error_response(int status, std::string_view error, std::string_view detail);

// Blocks serving HTTP until stop_server() is called from another thread.
// `on_ready` receives the bound "host:port" once listening.
void serve(const Api& api, const ServerConfig& config,
           const std::function<void(const std::string&)>& on_ready = {});
void stop_server();

}  // namespace cohortkg::service

#endif  // COHORTKG_API_HPP_
