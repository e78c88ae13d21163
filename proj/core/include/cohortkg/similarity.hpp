// SPDX-License-Identifier: Apache-2.0
//
// Patient-to-arm closeness over the five canonical facets, plus star-plot
// series for the browser.

#ifndef COHORTKG_SIMILARITY_HPP_
#define COHORTKG_SIMILARITY_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "cohortkg/corpus_view.hpp"

namespace cohortkg::similarity {

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A star plot needs at least three axes.
class InsufficientAxesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Patient CSV problems other than per-cell diagnostics (bad header,
// duplicate patient ids).
class PatientFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Facet {
  std::string id;              // age, bmi, sbp, hba1c, glucose
  std::string characteristic;  // class IRI
  std::string label;
  std::string unit;        // canonical unit IRI
  std::string unit_label;  // e.g. "year"
  std::string csv_column;
};

// Fixed order: age, bmi, sbp, hba1c, glucose.
const std::vector<Facet>& canonical_facets();
// Accepts a facet id or its characteristic IRI.
const Facet* find_facet(std::string_view id_or_iri);
// Short label for a unit IRI ("year", "mg/dL"); the IRI itself if unknown.
std::string unit_label(const std::string& unit);

// Converts between units of the conversion table (year<->month,
// mg/dL<->mmol/L). Throws UnitError naming both units otherwise.
double convert(double value, const std::string& from_unit, const std::string& to_unit);

struct FeatureValue {
  double value = 0.0;
  std::string unit;  // unit IRI
  friend bool operator==(const FeatureValue&, const FeatureValue&) = default;
};

struct PatientRecord {
  std::string patient_id;
  std::map<std::string, FeatureValue> features;  // characteristic IRI -> value
  friend bool operator==(const PatientRecord&, const PatientRecord&) = default;
};

struct FeatureComparison {
  std::string facet;  // facet id
  std::string characteristic;
  double patient_value = 0.0;  // in the arm's unit
  double arm_center = 0.0;
  double arm_spread = 0.0;
  std::string unit;
  double z = 0.0;
  bool infinite_z = false;  // zero spread and patient off-center
  double closeness = 0.0;
  double radial = 0.0;
};

// Zero spread: z = 0 at the center, otherwise an infinite z with
// closeness 0 and radial clamped to the matching end.
FeatureComparison compare_value(double patient, double center, double spread);
double closeness_of(double z);
double radial_of(double z);

struct SimilarityReport {
  std::string patient_id;
  std::string study_id;
  std::string arm_id;
  std::vector<FeatureComparison> comparisons;  // canonical order
  std::vector<std::string> covered_features;   // facet ids compared
  std::vector<std::string> absent_features;    // requested, not reported by the arm
  std::vector<std::string> missing_patient_features;  // reported, patient has no value
  double overall = 0.0;
};

// Facet ids the arm reports with a continuous statistic.
std::vector<std::string> arm_facets(const query::ArmView& arm);

// `features` are facet ids or IRIs; nullopt requests all five.
SimilarityReport compare(const query::CorpusView& corpus, const std::string& study_id,
                         const std::string& arm_id, const PatientRecord& patient,
                         const std::optional<std::vector<std::string>>& features = std::nullopt);
SimilarityReport compare(const query::ArmView& arm, const std::string& study_id,
                         const PatientRecord& patient,
                         const std::optional<std::vector<std::string>>& features = std::nullopt);

struct PlotAxis {
  std::string facet;
  std::string label;
  std::string unit;
  double range_lo = 0.0;
  double range_hi = 0.0;
  std::string annotation;  // "52.0–80.8 year"
};

struct PlotSeries {
  std::vector<PlotAxis> axes;
  std::vector<double> patient;
  std::vector<double> reference;  // constant 0.5
  double overall = 0.0;
};

PlotSeries star_plot_series(const SimilarityReport& report);

nlohmann::ordered_json to_json(const SimilarityReport& report);
nlohmann::ordered_json to_json(const PlotSeries& series);

struct PatientDiagnostic {
  std::size_t row = 0;  // 1-based data row (header is row 0)
  std::string column;
  std::string message;
  std::string to_string() const;
};

struct PatientLoad {
  std::vector<PatientRecord> patients;
  std::vector<PatientDiagnostic> diagnostics;
};

// CSV header: patient_id,age_years,bmi_kg_m2,sbp_mmhg,hba1c_pct,glucose_mg_dl.
// Empty cells are missing values. Rows with bad cells are skipped with a
// diagnostic; a duplicate patient_id throws PatientFileError.
PatientLoad parse_patients(std::string_view csv);
PatientLoad load_patients(const std::filesystem::path& path);

}  // namespace cohortkg::similarity

#endif  // COHORTKG_SIMILARITY_HPP_
