#pragma once

// Propositions, attitudes and per-agent mental models.
//
// Propositions arrive pre-canonicalized: an opaque, case-sensitive id plus a
// polarity bit. Two propositions with the same id and opposite polarity are
// each other's negation; no text matching happens anywhere in this library.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "smm/error.hpp"

namespace smm {

using PropositionId = std::string;
using AgentId = std::string;
using TeamId = int;
using LevelId = int;
using Ordinal = std::uint64_t;

enum class Polarity : std::uint8_t { Positive, Negative };
enum class Attitude : std::uint8_t { Belief, Goal, Commitment };
enum class UpdateOp : std::uint8_t { Assert, Retract };

constexpr Polarity flip(Polarity p) noexcept {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

constexpr std::string_view to_string(Polarity p) noexcept {
  return p == Polarity::Positive ? "positive" : "negative";
}

constexpr std::string_view to_string(Attitude a) noexcept {
  switch (a) {
    case Attitude::Belief: return "belief";
    case Attitude::Goal: return "goal";
    case Attitude::Commitment: return "commitment";
  }
  return "belief";
}

constexpr std::string_view to_string(UpdateOp op) noexcept {
  return op == UpdateOp::Assert ? "assert" : "retract";
}

inline std::optional<Polarity> parse_polarity(std::string_view s) {
  if (s == "positive") return Polarity::Positive;
  if (s == "negative") return Polarity::Negative;
  return std::nullopt;
}

inline std::optional<Attitude> parse_attitude(std::string_view s) {
  if (s == "belief") return Attitude::Belief;
  if (s == "goal") return Attitude::Goal;
  if (s == "commitment") return Attitude::Commitment;
  return std::nullopt;
}

inline std::optional<UpdateOp> parse_op(std::string_view s) {
  if (s == "assert") return UpdateOp::Assert;
  if (s == "retract") return UpdateOp::Retract;
  return std::nullopt;
}

struct Proposition {
  PropositionId id;
  Polarity polarity = Polarity::Positive;

  friend auto operator<=>(const Proposition&, const Proposition&) = default;
};

inline Proposition negate(Proposition p) {
  p.polarity = flip(p.polarity);
  return p;
}

// What an agent holds about one proposition id.
struct HeldEntry {
  Polarity polarity = Polarity::Positive;
  Attitude attitude = Attitude::Belief;
  Ordinal since = 0;  // ordinal of the event that last changed this entry

  friend bool operator==(const HeldEntry&, const HeldEntry&) = default;
};

struct UpdateEvent {
  Ordinal ordinal = 0;
  TeamId team = 1;
  LevelId level = 1;
  double t = 0.0;  // seconds into the level
  AgentId actor;
  UpdateOp op = UpdateOp::Assert;
  Proposition proposition;
  Attitude attitude = Attitude::Belief;
  std::optional<std::string> utterance_ref;

  friend bool operator==(const UpdateEvent&, const UpdateEvent&) = default;
};

// One (proposition, attitude) pair as seen in a snapshot.
struct HeldProposition {
  Proposition proposition;
  Attitude attitude = Attitude::Belief;

  friend auto operator<=>(const HeldProposition&, const HeldProposition&) = default;
};

// Immutable copy of a model's entries at one point in dialogue time.
class ModelSnapshot {
 public:
  ModelSnapshot() = default;
  ModelSnapshot(AgentId owner, std::map<PropositionId, HeldEntry> entries, Ordinal clock)
      : owner_(std::move(owner)), entries_(std::move(entries)), clock_(clock) {}

  const AgentId& owner() const noexcept { return owner_; }
  Ordinal clock() const noexcept { return clock_; }
  const std::map<PropositionId, HeldEntry>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  const HeldEntry* find(const PropositionId& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::set<HeldProposition> as_set() const {
    std::set<HeldProposition> out;
    for (const auto& [id, e] : entries_) out.insert({{id, e.polarity}, e.attitude});
    return out;
  }

  // Compares content only; `since` ordinals and the clock are bookkeeping.
  friend bool operator==(const ModelSnapshot& a, const ModelSnapshot& b) {
    return a.owner_ == b.owner_ && a.as_set() == b.as_set();
  }

 private:
  AgentId owner_;
  std::map<PropositionId, HeldEntry> entries_;
  Ordinal clock_ = 0;
};

// One agent's current mental model: at most one polarity per proposition id.
class MentalModel {
 public:
  MentalModel() = default;
  explicit MentalModel(AgentId owner) : owner_(std::move(owner)) {}

  const AgentId& owner() const noexcept { return owner_; }
  Ordinal clock() const noexcept { return clock_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::map<PropositionId, HeldEntry>& entries() const noexcept { return entries_; }

  const HeldEntry* find(const PropositionId& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool holds(const PropositionId& id) const { return entries_.contains(id); }

  // Applies one update in place. On error the model is left unchanged.
  void apply(const UpdateEvent& ev) {
    if (ev.actor != owner_)
      throw Error(ErrorCode::ActorMismatch,
                  "event " + std::to_string(ev.ordinal) + " is for '" + ev.actor +
                      "', model belongs to '" + owner_ + "'");
    if (ev.ordinal <= clock_)
      throw Error(ErrorCode::StaleEvent, "event ordinal " + std::to_string(ev.ordinal) +
                                             " is not after model clock " +
                                             std::to_string(clock_));
    if (ev.proposition.id.empty())
      throw Error(ErrorCode::InvalidProposition, "empty proposition id");

    if (ev.op == UpdateOp::Retract) {
      auto it = entries_.find(ev.proposition.id);
      if (it == entries_.end())
        throw Error(ErrorCode::RetractMissing,
                    "'" + owner_ + "' does not hold '" + ev.proposition.id + "'");
      entries_.erase(it);
    } else {
      auto [it, inserted] = entries_.try_emplace(ev.proposition.id);
      HeldEntry& e = it->second;
      // Re-asserting an identical entry only advances the clock.
      if (inserted || e.polarity != ev.proposition.polarity || e.attitude != ev.attitude)
        e = HeldEntry{ev.proposition.polarity, ev.attitude, ev.ordinal};
    }
    clock_ = ev.ordinal;
  }

  ModelSnapshot snapshot() const { return ModelSnapshot(owner_, entries_, clock_); }

 private:
  AgentId owner_;
  std::map<PropositionId, HeldEntry> entries_;
  Ordinal clock_ = 0;
};

inline MentalModel apply_update(MentalModel model, const UpdateEvent& ev) {
  model.apply(ev);
  return model;
}

inline ModelSnapshot snapshot(const MentalModel& model) { return model.snapshot(); }

// Authoritative task state for one level.
struct GroundTruth {
  std::map<PropositionId, Polarity> facts;
  std::map<AgentId, std::set<PropositionId>> expected_knowledge;
  std::set<PropositionId> coverage;

  bool covers(const PropositionId& id) const { return coverage.contains(id); }

  const std::set<PropositionId>& expected_for(const AgentId& agent) const {
    static const std::set<PropositionId> none;
    auto it = expected_knowledge.find(agent);
    return it == expected_knowledge.end() ? none : it->second;
  }

  // Every asserted fact must lie inside the authoritative domain.
  void validate() const {
    for (const auto& [id, pol] : facts) {
      if (id.empty()) throw Error(ErrorCode::InvalidProposition, "empty fact id");
      if (!coverage.contains(id))
        throw Error(ErrorCode::DanglingReference,
                    "fact '" + id + "' is not in the ground-truth coverage");
    }
  }

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

}  // namespace smm
