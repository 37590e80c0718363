#pragma once

// Objective target-identification scoring: points are earned only for target
// elements a team explicitly confirmed seeing.

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smm/belief.hpp"

namespace smm {

enum class Difficulty : std::uint8_t { Easy, Hard };

constexpr std::string_view to_string(Difficulty d) noexcept {
  return d == Difficulty::Easy ? "easy" : "hard";
}

inline std::optional<Difficulty> parse_difficulty(std::string_view s) {
  if (s == "easy") return Difficulty::Easy;
  if (s == "hard") return Difficulty::Hard;
  return std::nullopt;
}

struct TargetElement {
  std::string element_id;
  std::uint32_t points = 0;

  friend bool operator==(const TargetElement&, const TargetElement&) = default;
};

struct TargetSpec {
  std::string id;
  Difficulty difficulty = Difficulty::Easy;
  std::vector<TargetElement> elements;
  std::uint32_t max_points = 0;

  void validate() const {
    if (id.empty()) throw Error(ErrorCode::InvalidTarget, "target with empty id");
    std::uint32_t sum = 0;
    for (const auto& e : elements) {
      if (e.points == 0)
        throw Error(ErrorCode::InvalidTarget, "element '" + e.element_id + "' of '" + id +
                                                  "' must be worth at least one point");
      sum += e.points;
    }
    if (max_points == 0 || sum != max_points)
      throw Error(ErrorCode::InvalidTarget, "target '" + id + "' declares max_points " +
                                                std::to_string(max_points) +
                                                " but its elements sum to " + std::to_string(sum));
  }

  friend bool operator==(const TargetSpec&, const TargetSpec&) = default;
};

struct ConfirmationLog {
  TeamId team = 0;
  std::set<std::string> confirmed;
};

// Percent of `max` rounded half-up to one decimal, as tenths of a percent.
// Integer arithmetic keeps 42.1 / 26.3 style values exact.
constexpr std::uint64_t percent_tenths(std::uint64_t earned, std::uint64_t max) noexcept {
  if (max == 0) return 0;
  return (2000 * earned + max) / (2 * max);
}

struct TargetScore {
  std::string target_id;
  Difficulty difficulty = Difficulty::Easy;
  std::uint32_t earned = 0;
  std::uint32_t max = 0;

  double percent() const { return static_cast<double>(percent_tenths(earned, max)) / 10.0; }
};

struct ScoreCard {
  TeamId team = 0;
  std::vector<TargetScore> per_target;  // in declaration order
  std::uint32_t total_earned = 0;
  std::uint32_t total_max = 0;

  double total_percent() const {
    return static_cast<double>(percent_tenths(total_earned, total_max)) / 10.0;
  }

  const TargetScore* find(std::string_view target_id) const {
    for (const auto& t : per_target)
      if (t.target_id == target_id) return &t;
    return nullptr;
  }
};

// "8 (42.1%)"
inline std::string format_points(std::uint64_t earned, std::uint64_t max) {
  const std::uint64_t tenths = percent_tenths(earned, max);
  return std::to_string(earned) + " (" + std::to_string(tenths / 10) + '.' +
         std::to_string(tenths % 10) + "%)";
}

inline ScoreCard score(std::span<const TargetSpec> targets, const ConfirmationLog& log) {
  std::map<std::string_view, std::size_t> owner;  // element id -> target index
  for (std::size_t i = 0; i < targets.size(); ++i)
    for (const auto& e : targets[i].elements)
      if (!owner.emplace(e.element_id, i).second)
        throw Error(ErrorCode::InvalidTarget,
                    "element '" + e.element_id + "' belongs to more than one target");

  for (const auto& c : log.confirmed)
    if (!owner.contains(c))
      throw Error(ErrorCode::UnknownElement,
                  "team " + std::to_string(log.team) + " confirmed unknown element '" + c + "'");

  ScoreCard card;
  card.team = log.team;
  for (const auto& t : targets) {
    TargetScore ts{t.id, t.difficulty, 0, t.max_points};
    for (const auto& e : t.elements)
      if (log.confirmed.contains(e.element_id)) ts.earned += e.points;
    card.total_earned += ts.earned;
    card.total_max += ts.max;
    card.per_target.push_back(std::move(ts));
  }
  return card;
}

}  // namespace smm
