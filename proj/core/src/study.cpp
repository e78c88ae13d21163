// SPDX-License-Identifier: Apache-2.0

#include "cohortkg/study.hpp"

#include <cmath>
#include <set>

#include <fmt/format.h>

#include "cohortkg/term.hpp"
#include "cohortkg/vocabulary.hpp"

namespace cohortkg::ingest {

std::string_view to_string(ArmKind kind) {
  return kind == ArmKind::kIntervention ? "intervention" : "control";
}

std::string_view to_string(Persistence persistence) {
  return persistence == Persistence::kAttribute ? "attribute" : "property";
}

bool valid_identifier(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

std::string study_iri(const StudyRecord& study) {
  return fmt::format("{}{}Study", kg::ns::kScoI, study.study_id);
}

std::string arm_iri(const StudyRecord& study, const StudyArmRecord& arm) {
  if (!arm.iri.empty()) return arm.iri;
  return fmt::format("{}{}{}Arm", kg::ns::kScoI, study.study_id, arm.arm_id);
}

std::string subset_iri(const StudyRecord& study, const StudyArmRecord& arm,
                       const SubsetRecord& subset) {
  return fmt::format("{}{}Subset", arm_iri(study, arm), subset.subset_id);
}

namespace {

void check_finite(std::vector<Violation>& out, const std::string& path,
                  double value) {
  if (!std::isfinite(value)) out.push_back({path, "must be a finite number"});
}

void check_statistic(std::vector<Violation>& out, const std::string& path,
                     const StatisticPattern& statistic) {
  if (const auto* s = std::get_if<MeanSd>(&statistic)) {
    check_finite(out, path + ".mean", s->mean);
    check_finite(out, path + ".sd", s->sd);
    if (s->sd < 0) out.push_back({path + ".sd", "sd >= 0"});
  } else if (const auto* s = std::get_if<MedianIqr>(&statistic)) {
    check_finite(out, path + ".median", s->median);
    check_finite(out, path + ".q1", s->q1);
    check_finite(out, path + ".q3", s->q3);
    if (!(s->q1 <= s->median && s->median <= s->q3)) {
      out.push_back({path, "q1 <= median <= q3"});
    }
  } else if (const auto* s = std::get_if<Percentage>(&statistic)) {
    check_finite(out, path + ".value", s->value);
    if (!(s->value >= 0 && s->value <= 100)) {
      out.push_back({path + ".value", "0 <= percentage <= 100"});
    }
  } else if (const auto* s = std::get_if<Count>(&statistic)) {
    if (s->value < 0) out.push_back({path + ".value", "count >= 0"});
  }
}

}  // namespace

std::vector<Violation> validate(const StudyRecord& study) {
  std::vector<Violation> out;
  if (!valid_identifier(study.study_id)) {
    out.push_back({"study_id", "non-empty identifier of [A-Za-z0-9_-]"});
  }
  if (study.registry_link && !kg::is_absolute_iri(*study.registry_link)) {
    out.push_back({"registry_link", "absolute IRI"});
  }
  if (study.arms.empty()) out.push_back({"arms", "at least one arm"});
  std::set<std::string> arm_ids;
  for (std::size_t a = 0; a < study.arms.size(); ++a) {
    const auto& arm = study.arms[a];
    const std::string base = fmt::format("arms[{}]", a);
    if (!valid_identifier(arm.arm_id)) {
      out.push_back({base + ".arm_id", "non-empty identifier of [A-Za-z0-9_-]"});
    } else if (!arm_ids.insert(arm.arm_id).second) {
      out.push_back({base + ".arm_id", "unique within the study"});
    }
    if (!arm.iri.empty() && !kg::is_absolute_iri(arm.iri)) {
      out.push_back({base + ".iri", "absolute IRI"});
    }
    if (arm.population_size < 0) {
      out.push_back({base + ".population_size", "population_size >= 0"});
    }
    for (std::size_t c = 0; c < arm.characteristics.size(); ++c) {
      const auto& value = arm.characteristics[c];
      const std::string path = fmt::format("{}.characteristics[{}]", base, c);
      if (!kg::is_absolute_iri(value.characteristic)) {
        out.push_back({path + ".label", "resolves to an absolute IRI"});
      }
      const bool continuous = std::holds_alternative<MeanSd>(value.statistic) ||
                              std::holds_alternative<MedianIqr>(value.statistic);
      if (continuous && !value.unit) {
        out.push_back({path + ".unit", "unit required for mean_sd and median_iqr"});
      }
      if (value.unit && !kg::is_absolute_iri(*value.unit)) {
        out.push_back({path + ".unit", "resolves to an absolute IRI"});
      }
      check_statistic(out, path + ".statistic", value.statistic);
    }
    std::set<std::string> subset_ids;
    for (std::size_t s = 0; s < arm.subsets.size(); ++s) {
      const auto& subset = arm.subsets[s];
      const std::string path = fmt::format("{}.subsets[{}]", base, s);
      if (!valid_identifier(subset.subset_id)) {
        out.push_back({path + ".subset_id", "non-empty identifier of [A-Za-z0-9_-]"});
      } else if (!subset_ids.insert(subset.subset_id).second) {
        out.push_back({path + ".subset_id", "unique within the arm"});
      }
      if (subset.defined_by.empty()) {
        out.push_back({path + ".defined_by", "at least one defining pair"});
      }
      for (std::size_t d = 0; d < subset.defined_by.size(); ++d) {
        const auto& pair = subset.defined_by[d];
        if (!kg::is_absolute_iri(pair.characteristic) ||
            !kg::is_absolute_iri(pair.value)) {
          out.push_back({fmt::format("{}.defined_by[{}]", path, d),
                         "label and value resolve to absolute IRIs"});
        }
      }
      if (!(subset.percentage >= 0 && subset.percentage <= 100)) {
        out.push_back({path + ".percentage", "0 <= percentage <= 100"});
      }
    }
  }
  return out;
}

}  // namespace cohortkg::ingest
