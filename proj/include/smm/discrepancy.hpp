#pragma once

// Detection of the four shared-mental-model discrepancy kinds.
//
// Two routes are provided. The batch detectors scan complete snapshots and
// are the reference; DiscrepancyEngine maintains the same set incrementally,
// re-evaluating only the proposition id an event touched. Every discrepancy
// concerns exactly one proposition id, and an update changes exactly one
// entry of one model, so the open set for every other id is unaffected.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smm/belief.hpp"

namespace smm {

enum class DiscrepancyKind : std::uint8_t {
  BeliefContradiction,
  Omission,
  UnsupportedBelief,
  FalseBelief,
};

inline constexpr std::array<DiscrepancyKind, 4> kAllKinds = {
    DiscrepancyKind::BeliefContradiction, DiscrepancyKind::Omission,
    DiscrepancyKind::UnsupportedBelief, DiscrepancyKind::FalseBelief};

// Short names used in every file format and report column.
constexpr std::string_view to_string(DiscrepancyKind k) noexcept {
  switch (k) {
    case DiscrepancyKind::BeliefContradiction: return "contradiction";
    case DiscrepancyKind::Omission: return "omission";
    case DiscrepancyKind::UnsupportedBelief: return "unsupported";
    case DiscrepancyKind::FalseBelief: return "false";
  }
  return "contradiction";
}

inline std::optional<DiscrepancyKind> parse_kind(std::string_view s) {
  for (auto k : kAllKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

// Identity of a discrepancy: at most one open record per key at any instant.
struct DiscrepancyKey {
  DiscrepancyKind kind = DiscrepancyKind::BeliefContradiction;
  PropositionId proposition_id;
  AgentId holder;
  std::optional<AgentId> counterpart;

  friend auto operator<=>(const DiscrepancyKey&, const DiscrepancyKey&) = default;
};

struct Discrepancy {
  DiscrepancyKey key;
  TeamId team = 0;
  LevelId level = 0;
  Ordinal opened_at = 0;
  std::optional<Ordinal> closed_at;

  DiscrepancyKind kind() const noexcept { return key.kind; }
  bool open() const noexcept { return !closed_at.has_value(); }

  friend bool operator==(const Discrepancy&, const Discrepancy&) = default;
};

using DiscrepancySet = std::set<DiscrepancyKey>;

namespace detail {

inline void require_distinct_owners(std::span<const ModelSnapshot> models) {
  std::set<AgentId> seen;
  for (const auto& m : models)
    if (!seen.insert(m.owner()).second)
      throw Error(ErrorCode::DuplicateOwner, "two models owned by '" + m.owner() + "'");
}

}  // namespace detail

// One record per unordered agent pair and proposition id where both hold the
// id with the same attitude but opposite polarity. Attitudes do not interact:
// a goal never contradicts a belief.
inline DiscrepancySet detect_contradictions(std::span<const ModelSnapshot> models) {
  detail::require_distinct_owners(models);
  DiscrepancySet out;
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      const ModelSnapshot* a = &models[i];
      const ModelSnapshot* b = &models[j];
      if (b->owner() < a->owner()) std::swap(a, b);
      for (const auto& [id, ea] : a->entries()) {
        const HeldEntry* eb = b->find(id);
        if (eb && eb->attitude == ea.attitude && eb->polarity != ea.polarity)
          out.insert({DiscrepancyKind::BeliefContradiction, id, a->owner(), b->owner()});
      }
    }
  }
  return out;
}

// For every agent B and id q that B's role is expected to hold, that some
// teammate holds (any polarity), and that B lacks. The holder is the
// lowest-ordered teammate holding q.
inline DiscrepancySet detect_omissions(std::span<const ModelSnapshot> models,
                                       const GroundTruth& gt) {
  detail::require_distinct_owners(models);
  DiscrepancySet out;
  for (const auto& lacking : models) {
    auto exp = gt.expected_knowledge.find(lacking.owner());
    if (exp == gt.expected_knowledge.end())
      throw Error(ErrorCode::UnknownAgent,
                  "'" + lacking.owner() + "' has no expected-knowledge entry");
    for (const auto& q : exp->second) {
      if (lacking.find(q)) continue;
      const AgentId* holder = nullptr;
      for (const auto& other : models) {
        if (&other == &lacking || !other.find(q)) continue;
        if (!holder || other.owner() < *holder) holder = &other.owner();
      }
      if (holder) out.insert({DiscrepancyKind::Omission, q, *holder, lacking.owner()});
    }
  }
  return out;
}

// Entries outside ground-truth coverage that no teammate holds in any
// polarity. Opposite-polarity peers are a contradiction, not support.
inline DiscrepancySet detect_unsupported(std::span<const ModelSnapshot> models,
                                         const GroundTruth& gt) {
  detail::require_distinct_owners(models);
  DiscrepancySet out;
  for (const auto& m : models) {
    for (const auto& [id, e] : m.entries()) {
      if (gt.covers(id)) continue;
      bool corroborated = std::any_of(models.begin(), models.end(), [&](const auto& o) {
        return &o != &m && o.find(id) != nullptr;
      });
      if (!corroborated) out.insert({DiscrepancyKind::UnsupportedBelief, id, m.owner(), std::nullopt});
    }
  }
  return out;
}

inline DiscrepancySet detect_false_beliefs(std::span<const ModelSnapshot> models,
                                           const GroundTruth& gt) {
  detail::require_distinct_owners(models);
  DiscrepancySet out;
  for (const auto& m : models) {
    for (const auto& [id, e] : m.entries()) {
      auto fact = gt.facts.find(id);
      if (fact != gt.facts.end() && fact->second != e.polarity)
        out.insert({DiscrepancyKind::FalseBelief, id, m.owner(), std::nullopt});
    }
  }
  return out;
}

inline DiscrepancySet detect_all(std::span<const ModelSnapshot> models, const GroundTruth& gt) {
  DiscrepancySet out = detect_contradictions(models);
  out.merge(detect_omissions(models, gt));
  out.merge(detect_unsupported(models, gt));
  out.merge(detect_false_beliefs(models, gt));
  return out;
}

// Result of feeding one event to the engine. Both lists are ordered by key.
struct StepResult {
  std::vector<Discrepancy> opened;
  std::vector<Discrepancy> closed;
};

// Incremental detector for one team's dialogue within one level.
class DiscrepancyEngine {
 public:
  DiscrepancyEngine(TeamId team, LevelId level, std::span<const AgentId> roles, GroundTruth gt)
      : team_(team), level_(level), gt_(std::move(gt)) {
    for (const auto& r : roles) {
      if (!models_.try_emplace(r, r).second)
        throw Error(ErrorCode::DuplicateOwner, "role '" + r + "' declared twice");
      gt_.expected_knowledge.try_emplace(r);
    }
    for (const auto& [agent, ids] : gt_.expected_knowledge)
      if (!models_.contains(agent))
        throw Error(ErrorCode::UnknownAgent,
                    "expected knowledge names undeclared agent '" + agent + "'");
  }

  TeamId team() const noexcept { return team_; }
  LevelId level() const noexcept { return level_; }
  const GroundTruth& ground_truth() const noexcept { return gt_; }
  const std::map<AgentId, MentalModel>& models() const noexcept { return models_; }

  StepResult step(const UpdateEvent& ev) {
    if (ev.team != team_ || ev.level != level_)
      throw Error(ErrorCode::MixedTeamOrLevel,
                  "event " + std::to_string(ev.ordinal) + " belongs to team " +
                      std::to_string(ev.team) + " level " + std::to_string(ev.level));
    auto model = models_.find(ev.actor);
    if (model == models_.end())
      throw Error(ErrorCode::UnknownAgent, "'" + ev.actor + "' is not a declared role");
    model->second.apply(ev);

    const PropositionId& id = ev.proposition.id;
    DiscrepancySet now = evaluate(id);
    StepResult result;

    auto& open_for_id = open_[id];
    for (auto it = open_for_id.begin(); it != open_for_id.end();) {
      if (now.erase(it->first) == 0) {
        Discrepancy& rec = records_[it->second];
        rec.closed_at = ev.ordinal;
        result.closed.push_back(rec);
        it = open_for_id.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& key : now) {
      records_.push_back({key, team_, level_, ev.ordinal, std::nullopt});
      open_for_id.emplace(key, records_.size() - 1);
      result.opened.push_back(records_.back());
    }
    if (open_for_id.empty()) open_.erase(id);
    return result;
  }

  DiscrepancySet open_keys() const {
    DiscrepancySet out;
    for (const auto& [id, recs] : open_)
      for (const auto& [key, idx] : recs) out.insert(key);
    return out;
  }

  std::vector<Discrepancy> open_records() const {
    std::vector<Discrepancy> out;
    for (const auto& [id, recs] : open_)
      for (const auto& [key, idx] : recs) out.push_back(records_[idx]);
    return out;
  }

  // Every record emitted so far, open or closed, in emission order.
  const std::vector<Discrepancy>& records() const noexcept { return records_; }

  std::vector<ModelSnapshot> snapshots() const {
    std::vector<ModelSnapshot> out;
    out.reserve(models_.size());
    for (const auto& [agent, m] : models_) out.push_back(m.snapshot());
    return out;
  }

 private:
  // Discrepancies involving one proposition id under the current models.
  DiscrepancySet evaluate(const PropositionId& id) const {
    std::vector<std::pair<const AgentId*, const HeldEntry*>> holders;
    for (const auto& [agent, m] : models_)
      if (const HeldEntry* e = m.find(id)) holders.emplace_back(&agent, e);

    DiscrepancySet out;
    if (holders.empty()) return out;

    // models_ is ordered by agent id, so holders are too.
    for (std::size_t i = 0; i < holders.size(); ++i)
      for (std::size_t j = i + 1; j < holders.size(); ++j)
        if (holders[i].second->attitude == holders[j].second->attitude &&
            holders[i].second->polarity != holders[j].second->polarity)
          out.insert({DiscrepancyKind::BeliefContradiction, id, *holders[i].first,
                      *holders[j].first});

    for (const auto& [agent, expected] : gt_.expected_knowledge)
      if (expected.contains(id) && !models_.at(agent).holds(id))
        out.insert({DiscrepancyKind::Omission, id, *holders.front().first, agent});

    if (!gt_.covers(id) && holders.size() == 1)
      out.insert({DiscrepancyKind::UnsupportedBelief, id, *holders.front().first, std::nullopt});

    if (auto fact = gt_.facts.find(id); fact != gt_.facts.end())
      for (const auto& [agent, e] : holders)
        if (e->polarity != fact->second)
          out.insert({DiscrepancyKind::FalseBelief, id, *agent, std::nullopt});

    return out;
  }

  TeamId team_;
  LevelId level_;
  GroundTruth gt_;
  std::map<AgentId, MentalModel> models_;
  std::vector<Discrepancy> records_;
  // Open records by proposition id, then key; values index into records_.
  std::map<PropositionId, std::map<DiscrepancyKey, std::size_t>> open_;
};

}  // namespace smm
