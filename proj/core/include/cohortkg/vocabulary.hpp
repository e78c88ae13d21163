// SPDX-License-Identifier: Apache-2.0
//
// Namespace and IRI constants for the SCO/SIO modeling patterns.

#ifndef COHORTKG_VOCABULARY_HPP_
#define COHORTKG_VOCABULARY_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "cohortkg/term.hpp"

namespace cohortkg::kg {

namespace ns {
inline constexpr std::string_view kRdf =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kSio = "http://semanticscience.org/resource/";
inline constexpr std::string_view kSco =
    "https://idea.tw.rpi.edu/projects/heals/studycohort/";
inline constexpr std::string_view kScoI =
    "https://idea.tw.rpi.edu/projects/heals/studycohort_individuals/";
inline constexpr std::string_view kScoX =
    "https://idea.tw.rpi.edu/projects/heals/studycohort_extension/";
inline constexpr std::string_view kHasco = "http://hadatac.org/ont/hasco/";
inline constexpr std::string_view kDct = "http://purl.org/dc/terms/";
inline constexpr std::string_view kSkos = "http://www.w3.org/2004/02/skos/core#";
}  // namespace ns

// Full IRI strings. Kept as std::string so they can be handed to Term::iri
// and compared against Term::value() without allocation at call sites.
namespace iri {
#define COHORTKG_IRI(name, space, local) \
  inline const std::string name = std::string(space) + local

COHORTKG_IRI(kRdfType, ns::kRdf, "type");
COHORTKG_IRI(kRdfsSubClassOf, ns::kRdfs, "subClassOf");
COHORTKG_IRI(kRdfsLabel, ns::kRdfs, "label");
COHORTKG_IRI(kRdfsComment, ns::kRdfs, "comment");
COHORTKG_IRI(kOwlClass, ns::kOwl, "Class");
COHORTKG_IRI(kOwlRestriction, ns::kOwl, "Restriction");
COHORTKG_IRI(kOwlOnProperty, ns::kOwl, "onProperty");
COHORTKG_IRI(kOwlSomeValuesFrom, ns::kOwl, "someValuesFrom");
COHORTKG_IRI(kXsdInteger, ns::kXsd, "integer");
COHORTKG_IRI(kXsdDecimal, ns::kXsd, "decimal");
COHORTKG_IRI(kXsdDouble, ns::kXsd, "double");
COHORTKG_IRI(kXsdString, ns::kXsd, "string");
COHORTKG_IRI(kXsdBoolean, ns::kXsd, "boolean");
COHORTKG_IRI(kRdfLangString, ns::kRdf, "langString");

COHORTKG_IRI(kSioHasAttribute, ns::kSio, "hasAttribute");
COHORTKG_IRI(kSioHasProperty, ns::kSio, "hasProperty");
COHORTKG_IRI(kSioHasValue, ns::kSio, "hasValue");
COHORTKG_IRI(kSioHasUnit, ns::kSio, "hasUnit");
COHORTKG_IRI(kSioIsParticipantIn, ns::kSio, "isParticipantIn");
COHORTKG_IRI(kSioMean, ns::kSio, "Mean");
COHORTKG_IRI(kSioStandardDeviation, ns::kSio, "StandardDeviation");
COHORTKG_IRI(kSioMedian, ns::kSio, "Median");
COHORTKG_IRI(kSioMinimalValue, ns::kSio, "MinimalValue");
COHORTKG_IRI(kSioMaximalValue, ns::kSio, "MaximalValue");
COHORTKG_IRI(kSioAge, ns::kSio, "Age");
COHORTKG_IRI(kSioStudySubject, ns::kSio, "StudySubject");
COHORTKG_IRI(kSioYear, ns::kSio, "Year");

COHORTKG_IRI(kScoInterventionArm, ns::kSco, "InterventionArm");
COHORTKG_IRI(kScoControlArm, ns::kSco, "ControlArm");
COHORTKG_IRI(kScoPopulationSize, ns::kSco, "PopulationSize");
COHORTKG_IRI(kScoPercentage, ns::kSco, "Percentage");
COHORTKG_IRI(kScoCount, ns::kSco, "Count");

COHORTKG_IRI(kHascoResearchStudy, ns::kHasco, "ResearchStudy");
COHORTKG_IRI(kDctIdentifier, ns::kDct, "identifier");
COHORTKG_IRI(kDctTitle, ns::kDct, "title");
COHORTKG_IRI(kDctSource, ns::kDct, "source");
COHORTKG_IRI(kSkosAltLabel, ns::kSkos, "altLabel");

#undef COHORTKG_IRI
}  // namespace iri

// Returns the IRI term for a full IRI string.
inline Term iri_term(const std::string& value) { return Term::iri(value); }

// The single sub-property rule: sio:hasProperty specializes sio:hasAttribute.
// Returns the direct super-property of `predicate`, or an empty string.
const std::string& super_property_of(std::string_view predicate);

// Predicates that specialize `predicate` (not including itself).
const std::vector<std::string>& sub_properties_of(std::string_view predicate);

}  // namespace cohortkg::kg

#endif  // COHORTKG_VOCABULARY_HPP_
