#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smm/belief.hpp"
#include "smm/scoring.hpp"

namespace smm {

inline constexpr int kSchemaVersion = 1;

struct LevelSpec {
  LevelId level = 0;
  double duration_seconds = 0.0;

  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

struct Scenario {
  int schema_version = kSchemaVersion;
  std::optional<std::string> description;
  std::vector<AgentId> roles;
  std::vector<LevelSpec> levels;  // levels 1..n in order
  std::map<LevelId, GroundTruth> ground_truth;
  std::vector<TargetSpec> targets;

  const LevelSpec* find_level(LevelId level) const {
    for (const auto& l : levels)
      if (l.level == level) return &l;
    return nullptr;
  }

  bool has_role(const AgentId& a) const {
    for (const auto& r : roles)
      if (r == a) return true;
    return false;
  }

  bool has_element(const std::string& element_id) const {
    for (const auto& t : targets)
      for (const auto& e : t.elements)
        if (e.element_id == element_id) return true;
    return false;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// A team confirming it has seen a target element.
struct Confirmation {
  TeamId team = 1;
  LevelId level = 1;
  double t = 0.0;
  std::string element_id;

  friend bool operator==(const Confirmation&, const Confirmation&) = default;
};

using StreamRecord = std::variant<UpdateEvent, Confirmation>;

inline TeamId team_of(const StreamRecord& r) {
  return std::visit([](const auto& v) { return v.team; }, r);
}

inline LevelId level_of(const StreamRecord& r) {
  return std::visit([](const auto& v) { return v.level; }, r);
}

// Parsed event stream. `lines[i]` is the one-based source line of records[i].
struct EventStream {
  std::string source;
  std::vector<StreamRecord> records;
  std::vector<std::uint64_t> lines;
};

}  // namespace smm
