// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cohortkg/vocabulary.hpp"

namespace cohortkg::similarity {
namespace {

std::string sco(std::string_view local) { return std::string(kg::ns::kSco) + std::string(local); }

const std::string& month() {
  static const std::string kMonth = sco("Month");
  return kMonth;
}
const std::string& mg_dl() {
  static const std::string kUnit = sco("MilligramPerDeciliter");
  return kUnit;
}
const std::string& mmol_l() {
  static const std::string kUnit = sco("MillimolePerLiter");
  return kUnit;
}

constexpr double kGlucoseFactor = 18.0;  // mg/dL per mmol/L

struct Center {
  double center;
  double spread;
};

std::optional<Center> center_of(const query::ArmCharacteristic& c) {
  if (!c.statistic) return std::nullopt;
  if (const auto* s = std::get_if<ingest::MeanSd>(&*c.statistic)) return Center{s->mean, s->sd};
  if (const auto* s = std::get_if<ingest::MedianIqr>(&*c.statistic)) {
    return Center{s->median, (s->q3 - s->q1) / 2.0};
  }
  return std::nullopt;
}

std::vector<const Facet*> requested_facets(
    const std::optional<std::vector<std::string>>& features) {
  std::vector<const Facet*> out;
  if (!features) {
    for (const auto& f : canonical_facets()) out.push_back(&f);
    return out;
  }
  for (const auto& name : *features) {
    const Facet* facet = find_facet(name);
    if (!facet) throw std::invalid_argument(fmt::format("unknown feature '{}'", name));
    if (std::find(out.begin(), out.end(), facet) == out.end()) out.push_back(facet);
  }
  // compare() always reports in canonical order.
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

const std::vector<Facet>& canonical_facets() {
  static const std::vector<Facet> kFacets{
      {"age", kg::iri::kSioAge, "Age", kg::iri::kSioYear, "year", "age_years"},
      {"bmi", sco("BodyMassIndex"), "BMI", sco("KilogramPerSquareMeter"), "kg/m²",
       "bmi_kg_m2"},
      {"sbp", sco("SystolicBloodPressure"), "Systolic BP", sco("MillimeterOfMercury"), "mmHg",
       "sbp_mmhg"},
      {"hba1c", sco("HbA1c"), "HbA1c", sco("Percent"), "%", "hba1c_pct"},
      {"glucose", sco("FastingPlasmaGlucose"), "Fasting glucose", mg_dl(), "mg/dL",
       "glucose_mg_dl"},
  };
  return kFacets;
}

const Facet* find_facet(std::string_view id_or_iri) {
  for (const auto& f : canonical_facets()) {
    if (f.id == id_or_iri || f.characteristic == id_or_iri) return &f;
  }
  return nullptr;
}

std::string unit_label(const std::string& unit) {
  for (const auto& f : canonical_facets()) {
    if (f.unit == unit) return f.unit_label;
  }
  if (unit == month()) return "month";
  if (unit == mmol_l()) return "mmol/L";
  return unit;
}

double convert(double value, const std::string& from_unit, const std::string& to_unit) {
  if (from_unit == to_unit) return value;
  const std::string& year = kg::iri::kSioYear;
  if (from_unit == year && to_unit == month()) return value * 12.0;
  if (from_unit == month() && to_unit == year) return value / 12.0;
  if (from_unit == mg_dl() && to_unit == mmol_l()) return value / kGlucoseFactor;
  if (from_unit == mmol_l() && to_unit == mg_dl()) return value * kGlucoseFactor;
  throw UnitError(fmt::format("no conversion from <{}> to <{}>", from_unit, to_unit));
}

double closeness_of(double z) {
  if (z == 0.0) return 1.0;
  if (!std::isfinite(z)) return 0.0;
  // Keep closeness strictly below 1 for any non-zero z, even when |z|/2
  // vanishes in the subtraction.
  const double below_one = std::nextafter(1.0, 0.0);
  return std::max(0.0, std::min(1.0 - std::fabs(z) / 2.0, below_one));
}

double radial_of(double z) {
  if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
  return std::clamp((z + 3.0) / 6.0, 0.0, 1.0);
}

FeatureComparison compare_value(double patient, double center, double spread) {
  FeatureComparison c;
  c.patient_value = patient;
  c.arm_center = center;
  c.arm_spread = spread;
  if (spread > 0) {
    c.z = (patient - center) / spread;
  } else if (patient == center) {
    c.z = 0.0;
  } else {
    c.infinite_z = true;
    c.z = patient > center ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
  }
  c.closeness = closeness_of(c.z);
  c.radial = radial_of(c.z);
  return c;
}

std::vector<std::string> arm_facets(const query::ArmView& arm) {
  std::vector<std::string> out;
  for (const auto& f : canonical_facets()) {
    const auto* c = arm.find(f.characteristic);
    if (c && center_of(*c)) out.push_back(f.id);
  }
  return out;
}

SimilarityReport compare(const query::ArmView& arm, const std::string& study_id,
                         const PatientRecord& patient,
                         const std::optional<std::vector<std::string>>& features) {
  SimilarityReport report;
  report.patient_id = patient.patient_id;
  report.study_id = study_id;
  report.arm_id = arm.arm_id;
  double total = 0.0;
  for (const Facet* facet : requested_facets(features)) {
    const auto* c = arm.find(facet->characteristic);
    auto center = c ? center_of(*c) : std::nullopt;
    if (!center) {
      report.absent_features.push_back(facet->id);
      continue;
    }
    auto value = patient.features.find(facet->characteristic);
    if (value == patient.features.end()) {
      report.missing_patient_features.push_back(facet->id);
      continue;
    }
    const std::string arm_unit = c->unit.value_or(facet->unit);
    const double converted = convert(value->second.value, value->second.unit, arm_unit);
    FeatureComparison cmp = compare_value(converted, center->center, center->spread);
    cmp.facet = facet->id;
    cmp.characteristic = facet->characteristic;
    cmp.unit = arm_unit;
    total += cmp.closeness;
    report.covered_features.push_back(facet->id);
    report.comparisons.push_back(std::move(cmp));
  }
  if (!report.comparisons.empty()) {
    report.overall = total / static_cast<double>(report.comparisons.size());
  }
  return report;
}

SimilarityReport compare(const query::CorpusView& corpus, const std::string& study_id,
                         const std::string& arm_id, const PatientRecord& patient,
                         const std::optional<std::vector<std::string>>& features) {
  const auto* study = corpus.find(study_id);
  if (!study) throw NotFoundError(fmt::format("unknown study '{}'", study_id));
  const auto* arm = study->find_arm(arm_id);
  if (!arm) {
    throw NotFoundError(fmt::format("unknown arm '{}' in study '{}'", arm_id, study_id));
  }
  return compare(*arm, study_id, patient, features);
}

PlotSeries star_plot_series(const SimilarityReport& report) {
  if (report.comparisons.size() < 3) {
    throw InsufficientAxesError(fmt::format(
        "a star plot needs at least 3 compared features, got {}; use the tabular comparison",
        report.comparisons.size()));
  }
  PlotSeries series;
  for (const auto& c : report.comparisons) {
    const Facet* facet = find_facet(c.facet);
    PlotAxis axis;
    axis.facet = c.facet;
    axis.label = facet ? facet->label : c.facet;
    axis.unit = unit_label(c.unit);
    axis.range_lo = c.arm_center - 2.0 * c.arm_spread;
    axis.range_hi = c.arm_center + 2.0 * c.arm_spread;
    axis.annotation = fmt::format("{:.1f}–{:.1f} {}", axis.range_lo, axis.range_hi, axis.unit);
    series.axes.push_back(std::move(axis));
    series.patient.push_back(c.radial);
    series.reference.push_back(0.5);
  }
  series.overall = report.overall;
  return series;
}

nlohmann::ordered_json to_json(const SimilarityReport& report) {
  nlohmann::ordered_json out;
  out["patient_id"] = report.patient_id;
  out["study_id"] = report.study_id;
  out["arm_id"] = report.arm_id;
  auto comparisons = nlohmann::ordered_json::array();
  for (const auto& c : report.comparisons) {
    nlohmann::ordered_json item;
    item["feature"] = c.facet;
    item["characteristic"] = c.characteristic;
    item["patient_value"] = c.patient_value;
    item["arm_center"] = c.arm_center;
    item["arm_spread"] = c.arm_spread;
    item["unit"] = c.unit;
    item["z"] = c.infinite_z ? nlohmann::ordered_json() : nlohmann::ordered_json(c.z);
    item["infinite_z"] = c.infinite_z;
    item["closeness"] = c.closeness;
    item["radial"] = c.radial;
    comparisons.push_back(std::move(item));
  }
  out["comparisons"] = std::move(comparisons);
  out["covered_features"] = report.covered_features;
  out["absent_features"] = report.absent_features;
  out["missing_patient_features"] = report.missing_patient_features;
  out["overall"] = report.overall;
  return out;
}

nlohmann::ordered_json to_json(const PlotSeries& series) {
  nlohmann::ordered_json out;
  auto axes = nlohmann::ordered_json::array();
  for (const auto& a : series.axes) {
    axes.push_back({{"feature", a.facet},
                    {"label", a.label},
                    {"unit", a.unit},
                    {"range_lo", a.range_lo},
                    {"range_hi", a.range_hi},
                    {"annotation", a.annotation}});
  }
  out["axes"] = std::move(axes);
  out["patient"] = series.patient;
  out["reference"] = series.reference;
  out["overall"] = series.overall;
  return out;
}

}  // namespace cohortkg::similarity
