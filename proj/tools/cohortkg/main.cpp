// SPDX-License-Identifier: Apache-2.0
//
// cohortkg: ingest | serve | query | similarity | subset
// Exit codes: 0 ok, 1 validation, 2 I/O.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cohortkg/api.hpp"
#include "cohortkg/cohort_query.hpp"
#include "cohortkg/ingest.hpp"
#include "cohortkg/onto_subset.hpp"
#include "cohortkg/similarity.hpp"
#include "cohortkg/turtle.hpp"

#ifndef COHORTKG_DEFAULT_VOCAB
#define COHORTKG_DEFAULT_VOCAB "data/vocab/sco-mini.ttl"
#endif

namespace {

namespace fs = std::filesystem;
using namespace cohortkg;

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kIo = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void need_file(const fs::path& path, const char* what) {
  if (!fs::is_regular_file(path)) throw IoError(fmt::format("{} not found: {}", what, path.string()));
}
void need_dir(const fs::path& path, const char* what) {
  if (!fs::is_directory(path)) throw IoError(fmt::format("{} not found: {}", what, path.string()));
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  need_file(path, "JSON file");
  auto doc = nlohmann::json::parse(read_text(path), nullptr, false);
  if (doc.is_discarded()) throw ValidationFailure(path.string() + ": not valid JSON");
  return doc;
}

ingest::TermVocabulary load_vocab(const std::string& path) {
  need_file(path, "vocabulary");
  return ingest::TermVocabulary::load(path);
}

struct Loaded {
  ingest::CorpusLoad load;
  kg::Graph graph;
};

// Prints diagnostics to stderr; errors make the corpus unusable.
Loaded load_corpus(const std::string& dir, const ingest::TermVocabulary& vocab) {
  need_dir(dir, "corpus directory");
  Loaded out;
  out.load = ingest::load_corpus(dir, vocab);
  for (const auto& d : out.load.diagnostics) std::cerr << d.to_string() << "\n";
  if (out.load.has_errors()) throw ValidationFailure("corpus has schema violations");
  out.graph = ingest::build_corpus_graph(out.load.studies);
  out.graph.freeze();
  return out;
}

void emit(const nlohmann::ordered_json& doc, const std::string& out_path, bool json_stdout,
          const std::string& summary) {
  if (!out_path.empty()) write_text(out_path, doc.dump(2) + "\n");
  if (json_stdout) {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << summary << "\n";
  }
}

std::string headline(const query::QueryReport& r) {
  return fmt::format("{:.1f}% ({}/{} {})", r.percentage, r.numerator, r.denominator,
                     r.granularity == query::Granularity::kArm ? "arms" : "studies");
}

std::atomic<bool> g_stopping{false};
void on_signal(int) {
  g_stopping = true;
  service::stop_server();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Machine-readable study cohorts: ingest Table 1 descriptions and query them"};
  app.require_subcommand(1);
  std::string vocab = COHORTKG_DEFAULT_VOCAB;
  bool json_out = false;
  app.add_option("--vocab", vocab, "Vocabulary Turtle file")->capture_default_str();
  app.add_flag("--json", json_out, "Machine-readable JSON on stdout");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Build the corpus knowledge graph");
  std::string corpus_dir;
  std::string out_path;
  ingest_cmd->add_option("--corpus", corpus_dir, "Directory of study JSON files")->required();
  ingest_cmd->add_option("--out", out_path, "Turtle output file");

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API");
  service::ServerConfig config;
  std::string patients_path;
  std::string static_dir;
  serve_cmd->add_option("--corpus", corpus_dir, "Directory of study JSON files")->required();
  serve_cmd->add_option("--patients", patients_path, "Patient CSV file")->required();
  serve_cmd->add_option("--bind", config.bind_address, "host:port")->capture_default_str();
  serve_cmd->add_option("--cors-origin", config.cors_allowlist, "Allowed CORS origin (repeatable)");
  serve_cmd->add_option("--static", static_dir, "Directory of UI files served at /");

  // query
  auto* query_cmd = app.add_subcommand("query", "Competency queries");
  query_cmd->require_subcommand(1);
  std::string criteria_path;
  std::int64_t min_cohort = 0;
  std::string drug_family;
  double arm_fraction = 1.0 / 3.0;
  std::vector<CLI::App*> query_kinds;
  for (const char* kind : {"match", "limitation", "quality"}) {
    auto* sub = query_cmd->add_subcommand(kind, fmt::format("study {} query", kind));
    sub->add_option("--corpus", corpus_dir, "Directory of study JSON files")->required();
    sub->add_option("--out", out_path, "Report JSON file");
    if (std::string(kind) == "quality") {
      sub->add_option("--criteria", criteria_path, "Request JSON file (overrides flags)");
      sub->add_option("--min-cohort", min_cohort, "Minimum cohort size");
      sub->add_option("--drug-family", drug_family, "Drug family IRI, CURIE or label");
      sub->add_option("--arm-fraction", arm_fraction, "Minimum arm share of the cohort");
    } else {
      sub->add_option("--criteria", criteria_path, "Request JSON file")->required();
    }
    query_kinds.push_back(sub);
  }

  // similarity
  auto* sim_cmd = app.add_subcommand("similarity", "Compare a patient with a study arm");
  std::string study_id;
  std::string arm_id;
  std::string patient_id;
  std::vector<std::string> features;
  sim_cmd->add_option("--corpus", corpus_dir, "Directory of study JSON files")->required();
  sim_cmd->add_option("--patients", patients_path, "Patient CSV file")->required();
  sim_cmd->add_option("--study", study_id)->required();
  sim_cmd->add_option("--arm", arm_id)->required();
  sim_cmd->add_option("--patient", patient_id)->required();
  sim_cmd->add_option("--feature", features, "Facet id (repeatable; default all)");

  // subset
  auto* subset_cmd = app.add_subcommand("subset", "Extract an ontology module around seeds");
  std::string source;
  std::vector<std::string> seeds;
  bool annotations = false;
  subset_cmd->add_option("--source", source, "Ontology Turtle file")->required();
  subset_cmd->add_option("--seed", seeds, "Seed class IRI or CURIE (repeatable)")->required();
  subset_cmd->add_flag("--annotations", annotations, "Keep literal annotations");
  subset_cmd->add_option("--out", out_path, "Module Turtle file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest_cmd->parsed()) {
      auto v = load_vocab(vocab);
      auto loaded = load_corpus(corpus_dir, v);
      const auto counts = ingest::count_records(loaded.load.studies);
      if (!out_path.empty()) kg::write_turtle_file(loaded.graph, out_path);
      nlohmann::ordered_json doc{{"studies", counts.studies},
                                 {"arms", counts.arms},
                                 {"characteristics", counts.characteristics},
                                 {"characteristic_nodes", counts.characteristic_nodes},
                                 {"subsets", counts.subsets},
                                 {"triples", loaded.graph.size()},
                                 {"diagnostics", loaded.load.diagnostics.size()}};
      emit(doc, "", json_out,
           fmt::format("{} studies, {} arms, {} characteristics, {} characteristic nodes, "
                       "{} subsets, {} triples",
                       counts.studies, counts.arms, counts.characteristics,
                       counts.characteristic_nodes, counts.subsets, loaded.graph.size()));
      return kOk;
    }
    if (serve_cmd->parsed()) {
      config.corpus_dir = corpus_dir;
      config.patients_file = patients_path;
      config.vocab_file = vocab;
      if (!static_dir.empty()) config.static_dir = static_dir;
      need_dir(config.corpus_dir, "corpus directory");
      need_file(config.patients_file, "patients file");
      need_file(config.vocab_file, "vocabulary");
      service::parse_bind(config.bind_address);
      auto api = service::Api::load(config);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      service::serve(api, config, [&](const std::string& where) {
        std::cout << fmt::format("cohortkg ready: {} studies, listening on http://{}",
                                 api.corpus().size(), where)
                  << std::endl;
      });
      return kOk;
    }
    if (query_cmd->parsed()) {
      auto v = load_vocab(vocab);
      auto loaded = load_corpus(corpus_dir, v);
      const query::CorpusView view(loaded.graph);
      query::QueryReport report;
      if (query_kinds[0]->parsed()) {
        auto request = query::parse_match_request(read_json(criteria_path), v);
        report = query::study_match(view, request.criteria, request.conjunctive, request.rule);
      } else if (query_kinds[1]->parsed()) {
        auto request = query::parse_limitation_request(read_json(criteria_path), v);
        report = query::study_limitation(view, request.subgroup, request.options);
      } else {
        query::QualityParams params;
        if (!criteria_path.empty()) {
          params = query::parse_quality_request(read_json(criteria_path), v);
        } else {
          if (drug_family.empty()) throw ValidationFailure("--drug-family is required");
          params = query::parse_quality_request(
              {{"min_cohort", min_cohort}, {"drug_family", drug_family},
               {"arm_fraction", arm_fraction}},
              v);
        }
        report = query::study_quality(view, v, params);
      }
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      nlohmann::ordered_json doc = report;
      emit(doc, out_path, json_out, headline(report));
      return kOk;
    }
    if (sim_cmd->parsed()) {
      auto v = load_vocab(vocab);
      auto loaded = load_corpus(corpus_dir, v);
      need_file(patients_path, "patients file");
      auto patients = similarity::load_patients(patients_path);
      for (const auto& d : patients.diagnostics) std::cerr << d.to_string() << "\n";
      auto it = std::find_if(patients.patients.begin(), patients.patients.end(),
                             [&](const auto& p) { return p.patient_id == patient_id; });
      if (it == patients.patients.end()) {
        throw ValidationFailure(fmt::format("unknown patient '{}'", patient_id));
      }
      const query::CorpusView view(loaded.graph);
      auto report = similarity::compare(
          view, study_id, arm_id, *it,
          features.empty() ? std::nullopt : std::optional(features));
      nlohmann::ordered_json doc;
      doc["report"] = similarity::to_json(report);
      std::string summary = fmt::format("overall closeness {:.3f} over {} features",
                                        report.overall, report.comparisons.size());
      if (report.comparisons.size() >= 3) {
        doc["plot"] = similarity::to_json(similarity::star_plot_series(report));
      } else {
        doc["plot"] = nullptr;
        summary += " (too few for a star plot)";
      }
      for (const auto& c : report.comparisons) {
        summary += fmt::format("\n  {:8} patient {:.1f} vs {:.1f} +/- {:.1f}  z={:.2f}  closeness {:.3f}",
                               c.facet, c.patient_value, c.arm_center, c.arm_spread, c.z,
                               c.closeness);
      }
      emit(doc, "", json_out, summary);
      return kOk;
    }
    if (subset_cmd->parsed()) {
      need_file(source, "ontology source");
      auto module = subset::extract({source, seeds, annotations});
      for (const auto& w : module.summary.warnings) std::cerr << "warning: " << w << "\n";
      kg::write_turtle_file(module.graph, out_path);
      const auto& s = module.summary;
      nlohmann::ordered_json doc{{"source_classes", s.source_classes},
                                 {"retained_classes", s.retained_classes},
                                 {"subclass_edges", s.subclass_edges},
                                 {"annotations", s.annotations},
                                 {"copied_axioms", s.copied_axioms},
                                 {"dropped_axioms", s.dropped_axioms}};
      emit(doc, "", json_out,
           fmt::format("{} of {} classes retained, {} subclass edges, {} axioms copied, "
                       "{} dropped",
                       s.retained_classes, s.source_classes, s.subclass_edges,
                       s.copied_axioms, s.dropped_axioms));
      return kOk;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kOk;
}
