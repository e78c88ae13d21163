// SPDX-License-Identifier: Apache-2.0
//
// Graph isomorphism up to blank-node relabeling.

#ifndef COHORTKG_ISOMORPHISM_HPP_
#define COHORTKG_ISOMORPHISM_HPP_

#include <map>
#include <optional>
#include <string>

#include "cohortkg/graph.hpp"

namespace cohortkg::kg {

// Blank-node label in `a` -> blank-node label in `b`.
using BlankMapping = std::map<std::string, std::string>;

// Searches for a bijection between the blank nodes of `a` and `b` that maps
// the triple set of `a` onto the triple set of `b`. Candidates are pruned by
// iterated neighbourhood colouring before backtracking.
std::optional<BlankMapping> find_blank_bijection(const Graph& a,
                                                 const Graph& b);

inline bool isomorphic(const Graph& a, const Graph& b) {
  return find_blank_bijection(a, b).has_value();
}

}  // namespace cohortkg::kg

#endif  // COHORTKG_ISOMORPHISM_HPP_
