// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "cohortkg/ingest.hpp"
#include "cohortkg/isomorphism.hpp"
#include "cohortkg/turtle.hpp"
#include "cohortkg/vocabulary.hpp"
#include "support.hpp"

namespace kg = cohortkg::kg;
namespace ingest = cohortkg::ingest;
namespace t = cohortkg::testing;
using kg::Term;

namespace {

const char* kRamiprilTurtle = R"(@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
@prefix sio: <http://semanticscience.org/resource/> .
@prefix sco: <https://idea.tw.rpi.edu/projects/heals/studycohort/> .
@prefix sco-i: <https://idea.tw.rpi.edu/projects/heals/studycohort_individuals/> .

sco-i:RamiprilArm
    a owl:Class, sco:InterventionArm ;
    rdfs:subClassOf sio:StudySubject ;
    sio:isParticipantIn sco-i:TelmisartanRamiprilStudy ;
    sio:hasAttribute
        [ a sco:PopulationSize ; sio:hasValue 8576 ],
        [ a sio:Age ;
          sio:hasUnit sio:Year ;
          sio:hasAttribute
              [ a sio:Mean ; sio:hasValue 66.4 ],
              [ a sio:StandardDeviation ; sio:hasValue 7.2 ] ] .
)";

std::string fmt_label(int cycle, int i) {
  return "c" + std::to_string(cycle) + "_" + std::to_string(i);
}

Term relabel(const Term& term) {
  return term.is_blank() ? Term::blank("z" + term.value()) : term;
}

}  // namespace

TEST(Turtle, RamiprilArmSerializesExactly) {
  const auto graph = ingest::build_graph(t::ramipril_study());
  EXPECT_EQ(kg::serialize_turtle(graph), kRamiprilTurtle);
}

TEST(Turtle, RamiprilArmParsesBack) {
  const auto graph = ingest::build_graph(t::ramipril_study());
  const auto parsed = kg::parse_turtle(kRamiprilTurtle);
  EXPECT_EQ(parsed.size(), graph.size());
  EXPECT_TRUE(kg::isomorphic(parsed, graph));
}

TEST(Turtle, HandWrittenVariantParses) {
  // Loose whitespace, trailing semicolons and a comment.
  const std::string text = R"(@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
@prefix sio: <http://semanticscience.org/resource/> .
@prefix sco: <https://idea.tw.rpi.edu/projects/heals/studycohort/> .
@prefix sco-i: <https://idea.tw.rpi.edu/projects/heals/studycohort_individuals/> .
# the Ramipril arm
sco-i:RamiprilArm
       a    owl:Class, sco:InterventionArm;
       rdfs:subClassOf sio:StudySubject;
       sio:isParticipantIn sco-i:TelmisartanRamiprilStudy;
       sio:hasAttribute
       [ a sco:PopulationSize; sio:hasValue 8576],
       [ a sio:Age; sio:hasUnit sio:Year;
          sio:hasAttribute
          [ a sio:Mean; sio:hasValue 66.4],
          [a sio:StandardDeviation; sio:hasValue 7.2 ]
        ] .
)";
  const auto parsed = kg::parse_turtle(text);
  EXPECT_TRUE(kg::isomorphic(parsed, ingest::build_graph(t::ramipril_study())));
}

TEST(Turtle, UndeclaredPrefixIsResolutionError) {
  EXPECT_THROW(kg::parse_turtle("foo:x foo:y foo:z ."), kg::PrefixResolutionError);
}

TEST(Turtle, SyntaxErrorCarriesPosition) {
  try {
    kg::parse_turtle("@prefix ex: <http://example.org/> .\nex:a ex:b \"open .\n");
    FAIL() << "expected a syntax error";
  } catch (const kg::TurtleSyntaxError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GE(e.column(), 1u);
  }
  EXPECT_THROW(kg::parse_turtle("<http://a> <http://b> ."), kg::TurtleSyntaxError);
  EXPECT_THROW(kg::parse_turtle("<http://a> <http://b> <http://c>"), kg::TurtleSyntaxError);
  EXPECT_THROW(kg::parse_turtle("<http://a> \"lit\" <http://c> ."), kg::TurtleSyntaxError);
}

TEST(Turtle, LiteralsRoundTrip) {
  kg::Graph g;
  const Term s = Term::iri("http://example.org/s");
  const Term p = Term::iri("http://example.org/p");
  g.insert(s, p, Term::string("quote \" backslash \\ newline \n tab \t"));
  g.insert(s, p, Term::string("chat", "fr"));
  g.insert(s, p, Term::string("μg/dL – ü"));
  g.insert(s, p, Term::integer(-42));
  g.insert(s, p, Term::decimal(0.1));
  g.insert(s, p, Term::decimal(-1e-7));
  g.insert(s, p, Term::literal("2020-01-01", std::string(kg::ns::kXsd) + "date"));
  const auto text = kg::serialize_turtle(g);
  const auto back = kg::parse_turtle(text);
  EXPECT_EQ(back.size(), g.size());
  for (const auto& triple : g.triples()) EXPECT_TRUE(back.contains(triple)) << triple.object.to_string();
}

TEST(Turtle, SharedBlankNodesKeepLabels) {
  kg::Graph g;
  const Term b = Term::blank("shared");
  g.insert(Term::iri("http://example.org/a"), Term::iri("http://example.org/p"), b);
  g.insert(Term::iri("http://example.org/c"), Term::iri("http://example.org/p"), b);
  g.insert(b, Term::iri("http://example.org/q"), Term::integer(1));
  const auto text = kg::serialize_turtle(g);
  EXPECT_NE(text.find("_:b"), std::string::npos) << text;
  EXPECT_TRUE(kg::isomorphic(kg::parse_turtle(text), g));
}

TEST(Turtle, BlankCycleRoundTrips) {
  kg::Graph g;
  const Term p = Term::iri("http://example.org/p");
  g.insert(Term::blank("x"), p, Term::blank("y"));
  g.insert(Term::blank("y"), p, Term::blank("x"));
  EXPECT_TRUE(kg::isomorphic(kg::parse_turtle(kg::serialize_turtle(g)), g));
}

TEST(Turtle, SerializationIgnoresInsertionOrderAndLabelSpelling) {
  t::Rng rng(7);
  auto g = t::random_graph(rng, 20);
  // Same triples in reverse order; blank labels change but keep their order.
  kg::Graph h;
  h.prefixes() = g.prefixes();
  auto rows = g.triples();
  std::reverse(rows.begin(), rows.end());
  for (const auto& row : rows) {
    h.insert(relabel(row.subject), row.predicate, relabel(row.object));
  }
  EXPECT_EQ(kg::serialize_turtle(g), kg::serialize_turtle(h));
}

TEST(Turtle, EmptyGraphIsPrefixBlock) {
  kg::Graph g;
  const auto text = kg::serialize_turtle(g);
  EXPECT_NE(text.find("@prefix sio:"), std::string::npos);
  EXPECT_EQ(kg::parse_turtle(text).size(), 0u);
}

TEST(Turtle, FileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "cohortkg_turtle_test.ttl";
  const auto graph = ingest::build_graph(t::ramipril_study());
  kg::write_turtle_file(graph, path);
  EXPECT_TRUE(kg::isomorphic(kg::read_turtle_file(path), graph));
  std::filesystem::remove(path);
  EXPECT_THROW(kg::read_turtle_file(path), std::runtime_error);
}

TEST(Turtle, BundledOntologiesParse) {
  const auto vocab = kg::read_turtle_file(t::vocab_path());
  EXPECT_GT(vocab.size(), 200u);
  const auto chear = kg::read_turtle_file(t::data_dir() / "ontology" / "chear-mini.ttl");
  EXPECT_GT(chear.size(), 20u);
}

TEST(Turtle, RandomGraphsRoundTrip) {
  t::Rng rng(99);
  for (int i = 0; i < 30; ++i) {
    const auto g = t::random_graph(rng, 30);
    const auto text = kg::serialize_turtle(g);
    const auto back = kg::parse_turtle(text);
    ASSERT_EQ(back.size(), g.size()) << text;
    ASSERT_TRUE(kg::isomorphic(back, g)) << text;
    EXPECT_EQ(kg::serialize_turtle(back), text);
  }
}

TEST(Isomorphism, DetectsRelabelingAndDifferences) {
  const Term p = Term::iri("http://example.org/p");
  const Term a = Term::iri("http://example.org/a");
  kg::Graph g1, g2, g3;
  g1.insert(a, p, Term::blank("x"));
  g1.insert(Term::blank("x"), p, Term::integer(1));
  g2.insert(a, p, Term::blank("zz"));
  g2.insert(Term::blank("zz"), p, Term::integer(1));
  g3.insert(a, p, Term::blank("x"));
  g3.insert(Term::blank("x"), p, Term::integer(2));
  auto mapping = kg::find_blank_bijection(g1, g2);
  ASSERT_TRUE(mapping);
  EXPECT_EQ(mapping->at("x"), "zz");
  EXPECT_FALSE(kg::isomorphic(g1, g3));
}

TEST(Isomorphism, SymmetricBlanksNeedBacktracking) {
  // Two 3-cycles vs one 6-cycle: colour refinement alone cannot tell them
  // apart.
  const Term p = Term::iri("http://example.org/p");
  kg::Graph two, six;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < 3; ++i) {
      two.insert(Term::blank(fmt_label(c, i)), p, Term::blank(fmt_label(c, (i + 1) % 3)));
    }
  }
  for (int i = 0; i < 6; ++i) {
    six.insert(Term::blank("s" + std::to_string(i)), p,
               Term::blank("s" + std::to_string((i + 1) % 6)));
  }
  EXPECT_EQ(two.size(), six.size());
  EXPECT_FALSE(kg::isomorphic(two, six));
  EXPECT_TRUE(kg::isomorphic(two, two));
  EXPECT_TRUE(kg::isomorphic(six, six));
}
