// SPDX-License-Identifier: Apache-2.0
//
// Turtle reader and writer for the subset of Turtle this toolkit emits:
// prefix directives, `a`, bracketed blank nodes, labelled blank nodes,
// predicate-object and object lists, string and numeric literals.

#ifndef COHORTKG_TURTLE_HPP_
#define COHORTKG_TURTLE_HPP_

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cohortkg/graph.hpp"

namespace cohortkg::kg {

class TurtleSyntaxError : public std::runtime_error {
 public:
  TurtleSyntaxError(std::size_t line, std::size_t column,
                    const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Prefix block, then one block per subject. Output depends only on the
// triple set and prefix map.
std::string serialize_turtle(const Graph& graph);

// Throws TurtleSyntaxError (with 1-based line/column) or
// PrefixResolutionError for undeclared prefixes.
Graph parse_turtle(std::string_view text);

Graph read_turtle_file(const std::filesystem::path& path);
void write_turtle_file(const Graph& graph, const std::filesystem::path& path);

}  // namespace cohortkg::kg

#endif  // COHORTKG_TURTLE_HPP_
