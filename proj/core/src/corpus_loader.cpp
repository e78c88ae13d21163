// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "cohortkg/ingest.hpp"
#include "cohortkg/vocabulary.hpp"

namespace cohortkg::ingest {
namespace {

using nlohmann::json;

class StudyReader {
 public:
  StudyReader(const TermVocabulary& vocabulary, std::string file)
      : vocabulary_(vocabulary), file_(std::move(file)) {}

  StudyParse run(const json& doc) {
    StudyParse result;
    StudyRecord study;
    if (!doc.is_object()) {
      error("", "document must be a JSON object");
    } else {
      read_study(doc, study);
    }
    // Range checks still run after type errors, unless an item was dropped
    // and the record's indices no longer line up with the document.
    if (errors_ == 0 || dropped_ == 0) {
      for (const auto& v : validate(study)) {
        if (!reported(v.path)) error(v.path, v.constraint);
      }
    }
    if (errors_ == 0) {
      check_shared_characteristics(study);
      result.study = std::move(study);
    }
    result.diagnostics = std::move(diagnostics_);
    return result;
  }

 private:
  // True when an error was already reported at or below `path`, or above it.
  bool reported(const std::string& path) const {
    for (const auto& d : diagnostics_) {
      if (d.severity != Severity::kError) continue;
      const auto& p = d.path;
      if (p == path) return true;
      const auto& [shorter, longer] = p.size() < path.size() ? std::pair{&p, &path}
                                                              : std::pair{&path, &p};
      if (longer->compare(0, shorter->size(), *shorter) == 0 &&
          ((*longer)[shorter->size()] == '.' || (*longer)[shorter->size()] == '[')) {
        return true;
      }
    }
    return false;
  }

  void error(const std::string& path, const std::string& message) {
    ++errors_;
    diagnostics_.push_back({Severity::kError, file_, path, message});
  }
  void warn(const std::string& path, const std::string& message) {
    diagnostics_.push_back({Severity::kWarning, file_, path, message});
  }

  void check_keys(const json& object, const std::string& path,
                  std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : object.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        warn(join(path, key), "unknown field ignored");
      }
    }
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : fmt::format("{}.{}", path, key);
  }

  const json* field(const json& object, const std::string& path,
                    std::string_view key, bool required) {
    auto it = object.find(key);
    if (it == object.end() || it->is_null()) {
      if (required) error(join(path, key), "required field missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string_field(const json& object, const std::string& path,
                                          std::string_view key, bool required) {
    const json* value = field(object, path, key, required);
    if (!value) return std::nullopt;
    if (!value->is_string()) {
      error(join(path, key), "must be a string");
      return std::nullopt;
    }
    return value->get<std::string>();
  }

  std::optional<double> number_field(const json& object, const std::string& path,
                                     std::string_view key) {
    const json* value = field(object, path, key, true);
    if (!value) return std::nullopt;
    if (!value->is_number()) {
      error(join(path, key), "must be a number");
      return std::nullopt;
    }
    return value->get<double>();
  }

  std::optional<std::int64_t> integer_field(const json& object, const std::string& path,
                                            std::string_view key) {
    const json* value = field(object, path, key, true);
    if (!value) return std::nullopt;
    if (!value->is_number_integer()) {
      error(join(path, key), "must be an integer");
      return std::nullopt;
    }
    return value->get<std::int64_t>();
  }

  const json* array_field(const json& object, const std::string& path,
                          std::string_view key, bool required) {
    const json* value = field(object, path, key, required);
    if (value && !value->is_array()) {
      error(join(path, key), "must be an array");
      return nullptr;
    }
    return value;
  }

  std::string resolve_label(const std::string& path, const std::string& label) {
    auto resolution = vocabulary_.resolve(label);
    if (resolution.minted) {
      warn(path, fmt::format("unknown label '{}' minted as <{}>", label,
                             resolution.iri));
    }
    return resolution.iri;
  }

  void read_study(const json& doc, StudyRecord& study) {
    check_keys(doc, "", {"study_id", "title", "registry_link", "arms"});
    study.study_id = string_field(doc, "", "study_id", true).value_or("");
    study.title = string_field(doc, "", "title", true).value_or("");
    study.registry_link = string_field(doc, "", "registry_link", false);
    if (const json* arms = array_field(doc, "", "arms", true)) {
      for (std::size_t i = 0; i < arms->size(); ++i) {
        const std::string path = fmt::format("arms[{}]", i);
        const json& item = (*arms)[i];
        if (!item.is_object()) {
          error(path, "must be an object");
          ++dropped_;
          continue;
        }
        study.arms.push_back(read_arm(item, path));
      }
    }
  }

  StudyArmRecord read_arm(const json& doc, const std::string& path) {
    check_keys(doc, path,
               {"arm_id", "kind", "population_size", "characteristics",
                "subsets", "iri", "description"});
    StudyArmRecord arm;
    arm.arm_id = string_field(doc, path, "arm_id", true).value_or("");
    if (auto kind = string_field(doc, path, "kind", true)) {
      if (*kind == "intervention") {
        arm.kind = ArmKind::kIntervention;
      } else if (*kind == "control") {
        arm.kind = ArmKind::kControl;
      } else {
        error(join(path, "kind"), "must be \"intervention\" or \"control\"");
      }
    }
    arm.population_size = integer_field(doc, path, "population_size").value_or(0);
    if (auto iri = string_field(doc, path, "iri", false)) {
      try {
        arm.iri = vocabulary_.graph().prefixes().resolve(*iri);
      } catch (const kg::PrefixResolutionError& e) {
        error(join(path, "iri"), e.what());
      }
    }
    arm.description = string_field(doc, path, "description", false).value_or("");
    if (const json* items = array_field(doc, path, "characteristics", false)) {
      for (std::size_t i = 0; i < items->size(); ++i) {
        const std::string item_path = fmt::format("{}.characteristics[{}]", path, i);
        if (!(*items)[i].is_object()) {
          error(item_path, "must be an object");
          ++dropped_;
          continue;
        }
        if (auto value = read_characteristic((*items)[i], item_path)) {
          arm.characteristics.push_back(std::move(*value));
        } else {
          ++dropped_;
        }
      }
    }
    if (const json* items = array_field(doc, path, "subsets", false)) {
      for (std::size_t i = 0; i < items->size(); ++i) {
        const std::string item_path = fmt::format("{}.subsets[{}]", path, i);
        if (!(*items)[i].is_object()) {
          error(item_path, "must be an object");
          ++dropped_;
          continue;
        }
        arm.subsets.push_back(read_subset((*items)[i], item_path));
      }
    }
    return arm;
  }

  std::optional<CharacteristicValue> read_characteristic(const json& doc,
                                                         const std::string& path) {
    check_keys(doc, path, {"label", "persistence", "unit", "statistic"});
    auto label = string_field(doc, path, "label", true);
    if (!label) return std::nullopt;
    CharacteristicValue value;
    value.characteristic = resolve_label(join(path, "label"), *label);
    const bool persists = vocabulary_.persists(value.characteristic);
    value.persistence = persists ? Persistence::kProperty : Persistence::kAttribute;
    if (auto persistence = string_field(doc, path, "persistence", false)) {
      if (*persistence == "attribute") {
        value.persistence = Persistence::kAttribute;
      } else if (*persistence == "property") {
        if (!persists) {
          error(join(path, "persistence"),
                fmt::format("'property' only for disease or intervention "
                            "characteristics, '{}' is {}",
                            *label, to_string(vocabulary_.family_of(value.characteristic))));
        }
        value.persistence = Persistence::kProperty;
      } else {
        error(join(path, "persistence"), "must be \"attribute\" or \"property\"");
      }
    }
    if (auto unit = string_field(doc, path, "unit", false)) {
      value.unit = resolve_label(join(path, "unit"), *unit);
    }
    const json* statistic = field(doc, path, "statistic", true);
    if (!statistic) return std::nullopt;
    const std::string spath = join(path, "statistic");
    if (!statistic->is_object()) {
      error(spath, "must be an object");
      return std::nullopt;
    }
    auto type = string_field(*statistic, spath, "type", true);
    if (!type) return std::nullopt;
    if (*type == "mean_sd") {
      check_keys(*statistic, spath, {"type", "mean", "sd"});
      auto mean = number_field(*statistic, spath, "mean");
      auto sd = number_field(*statistic, spath, "sd");
      if (!mean || !sd) return std::nullopt;
      value.statistic = MeanSd{*mean, *sd};
    } else if (*type == "median_iqr") {
      check_keys(*statistic, spath, {"type", "median", "q1", "q3"});
      auto median = number_field(*statistic, spath, "median");
      auto q1 = number_field(*statistic, spath, "q1");
      auto q3 = number_field(*statistic, spath, "q3");
      if (!median || !q1 || !q3) return std::nullopt;
      value.statistic = MedianIqr{*median, *q1, *q3};
    } else if (*type == "percentage") {
      check_keys(*statistic, spath, {"type", "value"});
      auto v = number_field(*statistic, spath, "value");
      if (!v) return std::nullopt;
      value.statistic = Percentage{*v};
    } else if (*type == "count") {
      check_keys(*statistic, spath, {"type", "value"});
      auto v = integer_field(*statistic, spath, "value");
      if (!v) return std::nullopt;
      value.statistic = Count{*v};
    } else {
      error(join(spath, "type"),
            "must be one of mean_sd, median_iqr, percentage, count");
      return std::nullopt;
    }
    return value;
  }

  SubsetRecord read_subset(const json& doc, const std::string& path) {
    check_keys(doc, path, {"subset_id", "defined_by", "percentage"});
    SubsetRecord subset;
    subset.subset_id = string_field(doc, path, "subset_id", true).value_or("");
    subset.percentage = number_field(doc, path, "percentage").value_or(0.0);
    if (const json* pairs = array_field(doc, path, "defined_by", true)) {
      for (std::size_t i = 0; i < pairs->size(); ++i) {
        const std::string ppath = fmt::format("{}.defined_by[{}]", path, i);
        const json& pair = (*pairs)[i];
        if (!pair.is_object()) {
          error(ppath, "must be an object");
          ++dropped_;
          continue;
        }
        check_keys(pair, ppath, {"label", "value"});
        auto label = string_field(pair, ppath, "label", true);
        auto value = string_field(pair, ppath, "value", true);
        if (!label || !value) {
          ++dropped_;
          continue;
        }
        subset.defined_by.push_back({resolve_label(join(ppath, "label"), *label),
                                     resolve_label(join(ppath, "value"), *value)});
      }
    }
    return subset;
  }

  // Arms of one study normally report the same characteristics.
  void check_shared_characteristics(const StudyRecord& study) {
    if (study.arms.size() < 2) return;
    auto set_of = [](const StudyArmRecord& arm) {
      std::set<std::string> out;
      for (const auto& c : arm.characteristics) out.insert(c.characteristic);
      return out;
    };
    const auto reference = set_of(study.arms.front());
    for (std::size_t i = 1; i < study.arms.size(); ++i) {
      if (set_of(study.arms[i]) != reference) {
        warn(fmt::format("arms[{}].characteristics", i),
             fmt::format("arm '{}' reports a different characteristic set than arm '{}'",
                         study.arms[i].arm_id, study.arms.front().arm_id));
      }
    }
  }

  const TermVocabulary& vocabulary_;
  std::string file_;
  std::vector<Diagnostic> diagnostics_;
  std::size_t errors_ = 0;
  std::size_t dropped_ = 0;
};

}  // namespace

std::string Diagnostic::to_string() const {
  return fmt::format("{}: {}{}{}: {}", severity == Severity::kError ? "error" : "warning",
                     file.empty() ? "<input>" : file, path.empty() ? "" : ": ", path,
                     message);
}

StudyParse parse_study(const nlohmann::json& document,
                       const TermVocabulary& vocabulary, const std::string& file) {
  return StudyReader(vocabulary, file).run(document);
}

bool CorpusLoad::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::kError; });
}

CorpusLoad load_corpus(const std::filesystem::path& directory,
                       const TermVocabulary& vocabulary) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(directory)) {
    throw std::runtime_error("corpus directory not found: " + directory.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  CorpusLoad load;
  std::map<std::string, std::string> owner;  // study_id -> file
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      load.diagnostics.push_back({Severity::kError, name, "", "cannot read file"});
      continue;
    }
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      load.diagnostics.push_back({Severity::kError, name, "", e.what()});
      continue;
    }
    auto parsed = parse_study(doc, vocabulary, name);
    load.diagnostics.insert(load.diagnostics.end(), parsed.diagnostics.begin(),
                            parsed.diagnostics.end());
    if (!parsed.study) continue;
    auto [it, inserted] = owner.emplace(parsed.study->study_id, name);
    if (!inserted) {
      throw CorpusError(fmt::format("duplicate study_id '{}' in {} and {}",
                                    parsed.study->study_id, it->second, name));
    }
    load.studies.push_back(std::move(*parsed.study));
  }
  std::sort(load.studies.begin(), load.studies.end(),
            [](const StudyRecord& a, const StudyRecord& b) {
              return a.study_id < b.study_id;
            });
  return load;
}

CorpusCounts count_records(const std::vector<StudyRecord>& studies) {
  CorpusCounts counts;
  counts.studies = studies.size();
  for (const auto& study : studies) {
    std::set<std::string> distinct;
    for (const auto& arm : study.arms) {
      ++counts.arms;
      counts.characteristic_nodes += arm.characteristics.size();
      counts.subsets += arm.subsets.size();
      for (const auto& c : arm.characteristics) distinct.insert(c.characteristic);
    }
    counts.characteristics += distinct.size();
  }
  return counts;
}

}  // namespace cohortkg::ingest
