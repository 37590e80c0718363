#pragma once

// Per-team, per-level discrepancy count vectors.
//
// Counting rule: a record counts once for the level in which it was opened,
// whether or not it was closed before the level ended. Levels are independent
// episodes; nothing carries over from one level to the next.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "smm/discrepancy.hpp"

namespace smm {

// A discrepancy kind, or the total over all four.
enum class Measure : std::uint8_t { Contradiction, Omission, Unsupported, False, Total };

inline constexpr std::array<Measure, 5> kAllMeasures = {
    Measure::Contradiction, Measure::Omission, Measure::Unsupported, Measure::False,
    Measure::Total};

constexpr Measure measure_of(DiscrepancyKind k) noexcept {
  switch (k) {
    case DiscrepancyKind::BeliefContradiction: return Measure::Contradiction;
    case DiscrepancyKind::Omission: return Measure::Omission;
    case DiscrepancyKind::UnsupportedBelief: return Measure::Unsupported;
    case DiscrepancyKind::FalseBelief: return Measure::False;
  }
  return Measure::Total;
}

constexpr std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::Contradiction: return "contradiction";
    case Measure::Omission: return "omission";
    case Measure::Unsupported: return "unsupported";
    case Measure::False: return "false";
    case Measure::Total: return "total";
  }
  return "total";
}

inline std::optional<Measure> parse_measure(std::string_view s) {
  for (auto m : kAllMeasures)
    if (to_string(m) == s) return m;
  return std::nullopt;
}

// Measures in alphabetical order of their names, the row order of reports.
inline constexpr std::array<Measure, 5> kMeasuresByName = {
    Measure::Contradiction, Measure::False, Measure::Omission, Measure::Total,
    Measure::Unsupported};

struct EpisodeCounts {
  TeamId team = 0;
  LevelId level = 0;
  std::array<std::uint64_t, 4> by_kind{};  // indexed by DiscrepancyKind
  std::uint64_t total = 0;

  std::uint64_t operator[](DiscrepancyKind k) const {
    return by_kind[static_cast<std::size_t>(k)];
  }

  std::uint64_t get(Measure m) const {
    return m == Measure::Total ? total : by_kind[static_cast<std::size_t>(m)];
  }

  void add(DiscrepancyKind k, std::uint64_t n = 1) {
    by_kind[static_cast<std::size_t>(k)] += n;
    total += n;
  }

  friend bool operator==(const EpisodeCounts&, const EpisodeCounts&) = default;
};

struct TeamHistory {
  TeamId team = 0;
  std::vector<EpisodeCounts> episodes;  // levels 1..n, ascending

  const EpisodeCounts* find(LevelId level) const {
    if (level < 1 || static_cast<std::size_t>(level) > episodes.size()) return nullptr;
    return &episodes[static_cast<std::size_t>(level - 1)];
  }

  std::vector<LevelId> levels() const {
    std::vector<LevelId> out;
    for (const auto& e : episodes) out.push_back(e.level);
    return out;
  }
};

inline EpisodeCounts count_level(std::span<const Discrepancy> records, TeamId team,
                                 LevelId level) {
  EpisodeCounts counts{team, level, {}, 0};
  for (const auto& r : records) {
    if (r.team != team || r.level != level)
      throw Error(ErrorCode::MixedTeamOrLevel,
                  "record for team " + std::to_string(r.team) + " level " +
                      std::to_string(r.level) + " in tally for team " + std::to_string(team) +
                      " level " + std::to_string(level));
    counts.add(r.kind());
  }
  return counts;
}

// Groups counts into per-team histories. Every team must have levels 1..n
// with no gaps; n may differ between teams.
inline std::vector<TeamHistory> build_history(std::span<const EpisodeCounts> all_counts) {
  std::map<TeamId, std::map<LevelId, EpisodeCounts>> grouped;
  for (const auto& c : all_counts) {
    if (!grouped[c.team].emplace(c.level, c).second)
      throw Error(ErrorCode::DuplicateEpisode, "team " + std::to_string(c.team) + " level " +
                                                   std::to_string(c.level) + " appears twice");
  }
  std::vector<TeamHistory> out;
  for (auto& [team, levels] : grouped) {
    TeamHistory h{team, {}};
    LevelId expected = 1;
    for (auto& [level, counts] : levels) {
      if (level != expected)
        throw Error(ErrorCode::MissingLevel,
                    "team " + std::to_string(team) + " has no level " + std::to_string(expected));
      h.episodes.push_back(counts);
      ++expected;
    }
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace smm
