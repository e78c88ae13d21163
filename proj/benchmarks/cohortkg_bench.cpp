// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <filesystem>

#include "cohortkg/cohort_query.hpp"
#include "cohortkg/corpus_view.hpp"
#include "cohortkg/ingest.hpp"
#include "cohortkg/isomorphism.hpp"
#include "cohortkg/onto_subset.hpp"
#include "cohortkg/similarity.hpp"
#include "cohortkg/term_vocabulary.hpp"
#include "cohortkg/turtle.hpp"
#include "cohortkg/vocabulary.hpp"

namespace kg = cohortkg::kg;
namespace ingest = cohortkg::ingest;
namespace query = cohortkg::query;
namespace sim = cohortkg::similarity;
namespace subset = cohortkg::subset;

namespace {

const std::filesystem::path kData = COHORTKG_BENCH_DATA_DIR;

const ingest::TermVocabulary& vocab() {
  static const auto v = ingest::TermVocabulary::load(kData / "vocab" / "sco-mini.ttl");
  return v;
}

const std::vector<ingest::StudyRecord>& studies() {
  static const auto s = ingest::load_corpus(kData / "fixture_corpus", vocab()).studies;
  return s;
}

const kg::Graph& corpus_graph() {
  static const auto g = ingest::build_corpus_graph(studies());
  return g;
}

std::string sco(const char* local) { return std::string(kg::ns::kSco) + local; }

void BM_LoadCorpus(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ingest::load_corpus(kData / "fixture_corpus", vocab()));
  }
}
BENCHMARK(BM_LoadCorpus)->Unit(benchmark::kMillisecond);

void BM_BuildCorpusGraph(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ingest::build_corpus_graph(studies()));
  state.counters["triples"] = static_cast<double>(corpus_graph().size());
}
BENCHMARK(BM_BuildCorpusGraph)->Unit(benchmark::kMillisecond);

void BM_SerializeTurtle(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(kg::serialize_turtle(corpus_graph()));
}
BENCHMARK(BM_SerializeTurtle)->Unit(benchmark::kMillisecond);

void BM_ParseTurtle(benchmark::State& state) {
  const auto text = kg::serialize_turtle(corpus_graph());
  for (auto _ : state) benchmark::DoNotOptimize(kg::parse_turtle(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseTurtle)->Unit(benchmark::kMillisecond);

void BM_Isomorphic(benchmark::State& state) {
  const auto back = kg::parse_turtle(kg::serialize_turtle(corpus_graph()));
  for (auto _ : state) benchmark::DoNotOptimize(kg::isomorphic(back, corpus_graph()));
}
BENCHMARK(BM_Isomorphic)->Unit(benchmark::kMillisecond);

void BM_CorpusView(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(query::CorpusView(corpus_graph()));
}
BENCHMARK(BM_CorpusView)->Unit(benchmark::kMillisecond);

void BM_StudyMatch(benchmark::State& state) {
  const query::CorpusView view(corpus_graph());
  const std::vector<query::FeatureCriterion> criteria{
      {"", query::HasSubsetWith{{sco("Male"), sco("AfricanAmerican")}, 0.0}}};
  for (auto _ : state) benchmark::DoNotOptimize(query::study_match(view, criteria));
}
BENCHMARK(BM_StudyMatch);

void BM_StudyLimitation(benchmark::State& state) {
  const query::CorpusView view(corpus_graph());
  const query::FeatureCriterion subgroup{
      kg::iri::kSioAge,
      query::StatisticBound{query::Quantity::kUpperBound, query::Comparison::kLess, 70}};
  for (auto _ : state) benchmark::DoNotOptimize(query::study_limitation(view, subgroup));
}
BENCHMARK(BM_StudyLimitation);

void BM_StudyQuality(benchmark::State& state) {
  const query::CorpusView view(corpus_graph());
  const query::QualityParams params{1000, sco("Guanidines"), 1.0 / 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(query::study_quality(view, vocab(), params));
}
BENCHMARK(BM_StudyQuality);

void BM_Similarity(benchmark::State& state) {
  const query::CorpusView view(corpus_graph());
  const auto patients = sim::load_patients(kData / "patients" / "nhanes_sample.csv");
  const auto& patient = patients.patients.front();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sim::compare(view, "MetforminCardioOutcomes", "Main", patient));
  }
}
BENCHMARK(BM_Similarity);

void BM_SubsetExtract(benchmark::State& state) {
  const auto onto = kg::read_turtle_file(kData / "ontology" / "chear-mini.ttl");
  const std::vector<std::string> seeds{"http://hadatac.org/ont/chear#Sex"};
  for (auto _ : state) benchmark::DoNotOptimize(subset::extract(onto, seeds, true));
}
BENCHMARK(BM_SubsetExtract);

}  // namespace

BENCHMARK_MAIN();
