#pragma once

// Scenario documents (JSON, "schema_version": 1). See docs/scenario-schema.md.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hcivalue/action.hpp"
#include "hcivalue/cost_benefit.hpp"
#include "hcivalue/device.hpp"
#include "hcivalue/study.hpp"

namespace hcivalue {

inline constexpr int kScenarioSchemaVersion = 1;

/// A task's action alphabet as declared. Alphabets too large to enumerate
/// (freehand paths, very wide checkbox groups) carry only an analytic capacity.
struct AlphabetSpec {
  AlphabetKind kind = AlphabetKind::custom;
  std::optional<ActionAlphabet> enumerated;
  double capacity_bits = 0.0;
  std::optional<std::size_t> checkbox_boxes;
  bool uniform_checkbox = false;
  std::optional<FreehandCapacity> freehand;
};

struct TaskSpec {
  std::string name;
  AlphabetSpec alphabet;
  std::optional<CostModel> cost;
  std::optional<MistakeModel> mistake;
  std::optional<std::string> device;
  std::optional<double> task_seconds;
};

struct ScenarioFile {
  int schema_version = kScenarioSchemaVersion;
  std::optional<double> epsilon;
  std::vector<InputDeviceSpec> devices;
  std::vector<TaskSpec> tasks;
  std::vector<KnowledgeLedger> ledgers;
  std::vector<StudyDesign> studies;

  const InputDeviceSpec* find_device(std::string_view name) const;
  const TaskSpec* find_task(std::string_view name) const;
  const KnowledgeLedger* find_ledger(std::string_view name) const;
  const StudyDesign* find_study(std::string_view name) const;
};

/// Parses and fully validates a scenario. Errors carry a JSON path such as
/// "$.tasks[2].device"; dangling references name the missing target.
ScenarioFile parse_scenario(std::string_view json_text);

/// Reads a study design from either a standalone design document or a scenario
/// with a "studies" section (`study_name` picks one when there are several).
StudyDesign parse_study_design(std::string_view json_text, const std::optional<std::string>& study_name = std::nullopt);

}  // namespace hcivalue
