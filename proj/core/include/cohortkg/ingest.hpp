// SPDX-License-Identifier: Apache-2.0
//
// Study JSON -> StudyRecord -> Table 1 knowledge graph.

#ifndef COHORTKG_INGEST_HPP_
#define COHORTKG_INGEST_HPP_

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cohortkg/graph.hpp"
#include "cohortkg/study.hpp"
#include "cohortkg/term_vocabulary.hpp"

namespace cohortkg::ingest {

enum class Severity { kWarning, kError };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string file;
  std::string path;  // field path inside the file, e.g. arms[0].population_size
  std::string message;

  std::string to_string() const;
};

// Corpus-level failure (duplicate study ids, IRI collisions).
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StudyParse {
  std::optional<StudyRecord> study;  // empty when any error was found
  std::vector<Diagnostic> diagnostics;
};

// Parses one study document. `file` only labels diagnostics.
StudyParse parse_study(const nlohmann::json& document,
                       const TermVocabulary& vocabulary,
                       const std::string& file = {});

struct CorpusLoad {
  std::vector<StudyRecord> studies;  // ordered by study_id
  std::vector<Diagnostic> diagnostics;

  bool has_errors() const;
};

// Loads every *.json file of `directory`. Files with schema violations are
// skipped with diagnostics; a duplicate study_id throws CorpusError.
CorpusLoad load_corpus(const std::filesystem::path& directory,
                       const TermVocabulary& vocabulary);

// Arm-level knowledge graph for one study (typing, participation,
// population size, characteristic nodes with reified statistics, subsets).
kg::Graph build_graph(const StudyRecord& study);

// Union of per-study graphs plus study metadata (type, identifier, title,
// registry link) and arm identifiers. Throws CorpusError on duplicate
// study ids or when two studies mint the same IRI.
kg::Graph build_corpus_graph(const std::vector<StudyRecord>& studies);

struct CorpusCounts {
  std::size_t studies = 0;
  std::size_t arms = 0;
  // Distinct characteristics per study, summed over studies.
  std::size_t characteristics = 0;
  // Characteristic attribute nodes, summed over arms.
  std::size_t characteristic_nodes = 0;
  std::size_t subsets = 0;
};

CorpusCounts count_records(const std::vector<StudyRecord>& studies);

}  // namespace cohortkg::ingest

#endif  // COHORTKG_INGEST_HPP_
