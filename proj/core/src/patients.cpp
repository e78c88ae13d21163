// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "cohortkg/similarity.hpp"
#include "cohortkg/study.hpp"

namespace cohortkg::similarity {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::string PatientDiagnostic::to_string() const {
  return fmt::format("row {}, column {}: {}", row, column, message);
}

PatientLoad parse_patients(std::string_view csv) {
  std::vector<std::string> expected{"patient_id"};
  for (const auto& f : canonical_facets()) expected.push_back(f.csv_column);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t nl = csv.find('\n', start);
    if (nl == std::string_view::npos) nl = csv.size();
    lines.push_back(csv.substr(start, nl - start));
    start = nl + 1;
  }
  std::size_t first = 0;
  while (first < lines.size() && trim(lines[first]).empty()) ++first;
  if (first == lines.size()) throw PatientFileError("patient file has no header");
  std::string_view header_line = lines[first];
  if (header_line.starts_with("\xEF\xBB\xBF")) header_line.remove_prefix(3);
  const auto header = split(header_line);
  if (header.size() != expected.size() ||
      !std::equal(header.begin(), header.end(), expected.begin())) {
    throw PatientFileError(
        fmt::format("patient header must be '{}'", fmt::join(expected, ",")));
  }

  PatientLoad load;
  std::set<std::string> ids;
  std::size_t row = 0;
  for (std::size_t i = first + 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    ++row;
    const auto cells = split(lines[i]);
    if (cells.size() != expected.size()) {
      load.diagnostics.push_back({row, "*", fmt::format("expected {} cells, found {}",
                                                        expected.size(), cells.size())});
      continue;
    }
    PatientRecord patient;
    patient.patient_id = std::string(cells[0]);
    bool ok = true;
    if (!ingest::valid_identifier(patient.patient_id)) {
      load.diagnostics.push_back({row, "patient_id", "must be a non-empty identifier"});
      ok = false;
    }
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (cells[c].empty()) continue;  // missing value
      const Facet& facet = canonical_facets()[c - 1];
      auto value = parse_number(cells[c]);
      if (!value) {
        load.diagnostics.push_back(
            {row, facet.csv_column, fmt::format("'{}' is not a finite number", cells[c])});
        ok = false;
        continue;
      }
      patient.features[facet.characteristic] = {*value, facet.unit};
    }
    if (!ok) continue;
    if (!ids.insert(patient.patient_id).second) {
      throw PatientFileError(
          fmt::format("duplicate patient_id '{}' at row {}", patient.patient_id, row));
    }
    load.patients.push_back(std::move(patient));
  }
  return load;
}

PatientLoad load_patients(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read patient file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_patients(buffer.str());
}

}  // namespace cohortkg::similarity
