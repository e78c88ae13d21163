// SPDX-License-Identifier: Apache-2.0
//
// Shared test helpers: fixture paths, random generators, and brute-force
// oracles that work on StudyRecords or adjacency lists, never on the
// graph indexes the code under test uses.

#ifndef COHORTKG_TEST_SUPPORT_HPP_
#define COHORTKG_TEST_SUPPORT_HPP_

#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cohortkg/api.hpp"
#include "cohortkg/cohort_query.hpp"
#include "cohortkg/graph.hpp"
#include "cohortkg/study.hpp"
#include "cohortkg/term_vocabulary.hpp"

namespace cohortkg::testing {

std::filesystem::path data_dir();
std::filesystem::path golden_dir();
std::filesystem::path vocab_path();
std::filesystem::path fixture_corpus_dir();
const ingest::TermVocabulary& vocabulary();

std::string sco(const std::string& local);
std::string sio(const std::string& local);

// The Ramipril arm of the TelmisartanRamipril study, reduced to population
// size and age.
ingest::StudyRecord ramipril_study();

using Rng = std::mt19937_64;

// --- random corpora -------------------------------------------------------

struct CorpusShape {
  int max_studies = 10;
  int max_arms = 4;
};
std::vector<ingest::StudyRecord> random_corpus(Rng& rng, const CorpusShape& shape = {});

// Random criterion over the same characteristic pool random_corpus draws
// from, occasionally naming a class no study reports.
query::FeatureCriterion random_match_criterion(Rng& rng);
query::FeatureCriterion random_subgroup(Rng& rng);
query::QualityParams random_quality(Rng& rng);

// --- oracles --------------------------------------------------------------

// study_id -> sorted arm ids that satisfy; studies with none are omitted.
using ArmSets = std::map<std::string, std::vector<std::string>>;

ArmSets oracle_match(const std::vector<ingest::StudyRecord>& corpus,
                     const std::vector<query::FeatureCriterion>& criteria, bool conjunctive,
                     const query::BoundRule& rule = {});

struct OracleLimitation {
  ArmSets representing;
  std::map<std::string, query::Representation> status;
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;
};
OracleLimitation oracle_limitation(const std::vector<ingest::StudyRecord>& corpus,
                                   const query::FeatureCriterion& subgroup,
                                   const query::LimitationOptions& options = {});

ArmSets oracle_quality(const std::vector<ingest::StudyRecord>& corpus,
                       const kg::Graph& vocabulary_graph, const query::QualityParams& params);

// Reflexive-transitive closure below `root` by fixpoint over every
// rdfs:subClassOf triple.
std::set<std::string> naive_closure(const kg::Graph& graph, const std::string& root);

ArmSets arm_sets(const query::QueryReport& report);

// Reads StudyRecords back out of a corpus graph with plain match() calls.
// Characteristic and subset order is normalized (sorted), as in
// normalized().
std::vector<ingest::StudyRecord> records_from_graph(const kg::Graph& graph);
std::vector<ingest::StudyRecord> normalized(std::vector<ingest::StudyRecord> corpus);

// --- random graphs and DAGs -----------------------------------------------

// Small graph with up to `max_blanks` blank nodes, shared and nested
// blanks, literals of every supported kind.
kg::Graph random_graph(Rng& rng, int max_blanks = 50);

struct Dag {
  std::vector<std::string> classes;
  std::vector<std::pair<int, int>> edges;  // child, parent
};
Dag random_dag(Rng& rng, int max_classes = 200);
kg::Graph dag_graph(const Dag& dag);
std::set<std::string> oracle_retained(const Dag& dag, const std::vector<int>& seeds);

// --- API goldens ----------------------------------------------------------

// Api over the fixture corpus, sample patients and bundled vocabulary.
const service::Api& fixture_api();

// Each *.json under golden_dir()/api holds {"request": {method, path,
// body?}, "status", "response"}. Returns one message per mismatch. With
// `update` the expected parts are rewritten from the actual responses.
std::vector<std::string> check_api_goldens(const service::Api& api, bool update = false);

}  // namespace cohortkg::testing

#endif  // COHORTKG_TEST_SUPPORT_HPP_
