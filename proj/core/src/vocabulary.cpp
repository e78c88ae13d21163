// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/vocabulary.hpp"

namespace cohortkg::kg {

const std::string& super_property_of(std::string_view predicate) {
  static const std::string kNone;
  if (predicate == iri::kSioHasProperty) return iri::kSioHasAttribute;
  return kNone;
}

const std::vector<std::string>& sub_properties_of(std::string_view predicate) {
  static const std::vector<std::string> kNone;
  static const std::vector<std::string> kAttribute{iri::kSioHasProperty};
  if (predicate == iri::kSioHasAttribute) return kAttribute;
  return kNone;
}

}  // namespace cohortkg::kg
