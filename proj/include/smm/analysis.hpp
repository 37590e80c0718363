#pragma once

// Runs an event stream through one DiscrepancyEngine per (team, level) and
// tallies the results.

#include <algorithm>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "smm/discrepancy.hpp"
#include "smm/episode.hpp"
#include "smm/scenario.hpp"
#include "smm/scoring.hpp"

namespace smm {

struct Analysis {
  // Every (team, level) cell for teams 1..max team, in team then level order.
  std::vector<EpisodeCounts> counts;
  std::map<std::pair<TeamId, LevelId>, std::vector<Discrepancy>> records;
  std::map<TeamId, ConfirmationLog> confirmations;
  TeamId teams = 0;

  std::vector<Discrepancy> all_records() const {
    std::vector<Discrepancy> out;
    for (const auto& [cell, recs] : records) out.insert(out.end(), recs.begin(), recs.end());
    return out;
  }
};

// `min_teams` forces cells for teams 1..min_teams even if they have no
// events. Engine errors are re-thrown with the record's source line.
inline Analysis analyze(const Scenario& sc, const EventStream& stream, TeamId min_teams = 0) {
  std::map<std::pair<TeamId, LevelId>, DiscrepancyEngine> engines;
  Analysis out;
  out.teams = min_teams;

  for (std::size_t i = 0; i < stream.records.size(); ++i) {
    const StreamRecord& rec = stream.records[i];
    out.teams = std::max(out.teams, team_of(rec));
    if (const auto* c = std::get_if<Confirmation>(&rec)) {
      auto& log = out.confirmations[c->team];
      log.team = c->team;
      log.confirmed.insert(c->element_id);
      continue;
    }
    const auto& ev = std::get<UpdateEvent>(rec);
    try {
      auto it = engines.find({ev.team, ev.level});
      if (it == engines.end()) {
        auto gt = sc.ground_truth.find(ev.level);
        if (gt == sc.ground_truth.end())
          throw Error(ErrorCode::DanglingReference,
                      "no ground truth for level " + std::to_string(ev.level));
        it = engines.try_emplace({ev.team, ev.level}, ev.team, ev.level,
                                 std::span<const AgentId>(sc.roles), gt->second)
                 .first;
      }
      it->second.step(ev);
    } catch (const Error& e) {
      if (e.where() || i >= stream.lines.size()) throw;
      throw Error(e.code(), e.detail(), SourceLocation{stream.source, stream.lines[i], 1, {}});
    }
  }

  for (auto& [cell, engine] : engines) out.records[cell] = engine.records();

  for (TeamId team = 1; team <= out.teams; ++team) {
    for (const auto& l : sc.levels) {
      auto it = out.records.find({team, l.level});
      if (it == out.records.end())
        out.counts.push_back(EpisodeCounts{team, l.level, {}, 0});
      else
        out.counts.push_back(count_level(it->second, team, l.level));
    }
  }
  return out;
}

inline Analysis analyze(const Scenario& sc, std::span<const StreamRecord> records,
                        TeamId min_teams = 0) {
  EventStream s;
  s.records.assign(records.begin(), records.end());
  return analyze(sc, s, min_teams);
}

}  // namespace smm
