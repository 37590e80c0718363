#pragma once

// Synthetic multi-team, multi-level annotation corpora with a ledger of the
// discrepancies planted in them.
//
// Each planted discrepancy is realized by a minimal event template whose
// effect on the detectors is known exactly, so the ledger is an oracle:
//
//   contradiction  both agents assert the same id, same attitude, opposite
//                  polarity; the id is in coverage but has no fact
//   omission       one agent asserts an id that is a fact and is expected
//                  knowledge of the other agent, who never asserts it
//   false          one agent asserts the opposite of a fact
//   unsupported    one agent asserts an id outside coverage
//
// Filler only touches fact ids with the factual polarity and never expected
// ids held by the wrong agent, so it cannot open anything, even transiently.
//
// Randomness comes from std::mt19937_64, whose output sequence is fixed by
// the standard. Uniform and normal variates are derived here rather than with
// <random> distributions, whose algorithms are implementation-defined.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "smm/discrepancy.hpp"
#include "smm/scenario.hpp"

namespace smm {

inline constexpr const char* kGeneratorRng = "mt19937_64";
inline constexpr const char* kGeneratorNormal = "box-muller-cosine";

struct GenConfig {
  int teams = 20;
  int levels = 4;
  std::uint64_t seed = 1;
  // Expected plantings per level for each kind. False and unsupported beliefs
  // are rare by default: present in well under a fifth of cells.
  std::map<DiscrepancyKind, double> rate_by_kind = {
      {DiscrepancyKind::BeliefContradiction, 4.0},
      {DiscrepancyKind::Omission, 10.0},
      {DiscrepancyKind::UnsupportedBelief, 0.02},
      {DiscrepancyKind::FalseBelief, 0.02},
  };
  // Log-scale standard deviation of each team's per-kind baseline rate.
  double team_baseline_spread = 0.4;
  // Standard deviation of the per-level count around the team baseline.
  double noise = 0.35;
  std::vector<AgentId> roles = {"photographer", "spotter"};
  double level_duration = 480.0;
  int min_events_per_level = 50;

  void validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
    if (teams < 1) bad("teams must be >= 1");
    if (levels < 1) bad("levels must be >= 1");
    for (auto k : kAllKinds) {
      auto it = rate_by_kind.find(k);
      if (it == rate_by_kind.end()) bad("missing rate for " + std::string(to_string(k)));
      if (!(it->second >= 0.0) || !std::isfinite(it->second))
        bad("rate for " + std::string(to_string(k)) + " must be a finite value >= 0");
    }
    if (!(team_baseline_spread >= 0.0) || !std::isfinite(team_baseline_spread))
      bad("team_baseline_spread must be >= 0");
    if (!(noise >= 0.0) || !std::isfinite(noise)) bad("noise must be >= 0");
    if (roles.size() != 2) bad("the generator models dyads: exactly two roles");
    if (roles[0].empty() || roles[1].empty() || roles[0] == roles[1])
      bad("roles must be two distinct non-empty names");
    if (!(level_duration > 0.0) || !std::isfinite(level_duration))
      bad("level_duration must be positive");
    if (min_events_per_level < 0) bad("min_events_per_level must be >= 0");
  }
};

struct PlantedDiscrepancy {
  TeamId team = 0;
  LevelId level = 0;
  DiscrepancyKey key;
  std::vector<Ordinal> ordinals;  // events realizing the template

  friend bool operator==(const PlantedDiscrepancy&, const PlantedDiscrepancy&) = default;
};

struct PlantLedger {
  std::uint64_t seed = 0;
  std::vector<PlantedDiscrepancy> planted;

  std::uint64_t count(TeamId team, LevelId level, DiscrepancyKind kind) const {
    std::uint64_t n = 0;
    for (const auto& p : planted)
      if (p.team == team && p.level == level && p.key.kind == kind) ++n;
    return n;
  }
};

struct Corpus {
  Scenario scenario;
  std::vector<StreamRecord> events;
  PlantLedger ledger;
};

namespace detail {

class SynthRng {
 public:
  explicit SynthRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, n); n is always small here.
  std::uint64_t below(std::uint64_t n) {
    return std::min(n - 1, static_cast<std::uint64_t>(uniform() * static_cast<double>(n)));
  }

  bool coin() { return (engine_() >> 63) != 0; }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

inline std::string pad2(int v) { return (v < 10 ? "0" : "") + std::to_string(v); }

}  // namespace detail

inline Corpus generate(const GenConfig& cfg) {
  cfg.validate();
  detail::SynthRng rng(cfg.seed);

  Corpus corpus;
  corpus.ledger.seed = cfg.seed;
  Scenario& sc = corpus.scenario;
  sc.description = std::string("synthetic corpus; generator ") + kGeneratorRng + " / " +
                   kGeneratorNormal + ", seed " + std::to_string(cfg.seed);
  sc.roles = cfg.roles;
  for (LevelId l = 1; l <= cfg.levels; ++l) {
    sc.levels.push_back({l, cfg.level_duration});
    GroundTruth gt;
    for (const auto& r : cfg.roles) gt.expected_knowledge[r];
    sc.ground_truth.emplace(l, std::move(gt));
  }

  // A pending event has no ordinal or time until the level is laid out.
  struct Pending {
    AgentId actor;
    UpdateOp op;
    Proposition prop;
    Attitude attitude;
    int plant = -1;  // index into the level's plantings, or -1 for filler
  };
  using Chain = std::vector<Pending>;

  auto random_attitude = [&] {
    static constexpr Attitude all[] = {Attitude::Belief, Attitude::Goal, Attitude::Commitment};
    return all[rng.below(3)];
  };
  auto random_polarity = [&] { return rng.coin() ? Polarity::Positive : Polarity::Negative; };

  Ordinal ordinal = 0;
  for (TeamId team = 1; team <= cfg.teams; ++team) {
    std::map<DiscrepancyKind, double> baseline;
    for (auto k : kAllKinds) {
      const double s = cfg.team_baseline_spread;
      baseline[k] = cfg.rate_by_kind.at(k) * std::exp(s * rng.normal() - 0.5 * s * s);
    }

    for (LevelId level = 1; level <= cfg.levels; ++level) {
      GroundTruth& gt = sc.ground_truth.at(level);
      const std::string prefix = "t" + detail::pad2(team) + ".l" + std::to_string(level) + ".";
      std::vector<Chain> chains;
      std::vector<PlantedDiscrepancy> plants;
      std::size_t n_events = 0;

      for (auto kind : kAllKinds) {
        // The draw is taken even for a zero rate so the stream stays aligned.
        const double draw = baseline[kind] + cfg.noise * rng.normal();
        const auto n = baseline[kind] > 0.0 ? static_cast<int>(std::max(0.0, std::round(draw))) : 0;
        for (int i = 0; i < n; ++i) {
          const PropositionId id = prefix + std::string(to_string(kind)) + "." + std::to_string(i);
          const int idx = static_cast<int>(plants.size());
          const std::size_t a = rng.below(2);
          const AgentId& holder = cfg.roles[a];
          const AgentId& other = cfg.roles[1 - a];
          const Polarity pol = random_polarity();
          const Attitude att = random_attitude();
          PlantedDiscrepancy p{team, level, {kind, id, holder, std::nullopt}, {}};
          switch (kind) {
            case DiscrepancyKind::BeliefContradiction: {
              gt.coverage.insert(id);
              // Each assert is its own chain so the pair can land in either order.
              chains.push_back({{holder, UpdateOp::Assert, {id, pol}, att, idx}});
              chains.push_back({{other, UpdateOp::Assert, {id, flip(pol)}, att, idx}});
              p.key.holder = std::min(holder, other);
              p.key.counterpart = std::max(holder, other);
              n_events += 2;
              break;
            }
            case DiscrepancyKind::Omission:
              gt.coverage.insert(id);
              gt.facts[id] = pol;
              gt.expected_knowledge[other].insert(id);
              chains.push_back({{holder, UpdateOp::Assert, {id, pol}, att, idx}});
              p.key.counterpart = other;
              n_events += 1;
              break;
            case DiscrepancyKind::UnsupportedBelief:
              chains.push_back({{holder, UpdateOp::Assert, {id, pol}, att, idx}});
              n_events += 1;
              break;
            case DiscrepancyKind::FalseBelief:
              gt.coverage.insert(id);
              gt.facts[id] = flip(pol);
              chains.push_back({{holder, UpdateOp::Assert, {id, pol}, att, idx}});
              n_events += 1;
              break;
          }
          plants.push_back(std::move(p));
        }
      }

      // Filler chains, each on a fresh fact id asserted with the factual
      // polarity: shared knowledge, an expected fact its owner learns, a
      // restated entry, or an entry later retracted.
      int filler = 0;
      while (n_events < static_cast<std::size_t>(cfg.min_events_per_level)) {
        const PropositionId id = prefix + "fill." + std::to_string(filler++);
        const Polarity pol = random_polarity();
        gt.coverage.insert(id);
        gt.facts[id] = pol;
        const std::size_t a = rng.below(2);
        const AgentId& first = cfg.roles[a];
        const AgentId& second = cfg.roles[1 - a];
        Chain c{{first, UpdateOp::Assert, {id, pol}, random_attitude(), -1}};
        switch (rng.below(5)) {
          case 0:
            break;
          case 1:
            c.push_back({second, UpdateOp::Assert, {id, pol}, random_attitude(), -1});
            break;
          case 2:
            gt.expected_knowledge[first].insert(id);
            break;
          case 3:
            c.push_back({first, UpdateOp::Assert, {id, pol}, random_attitude(), -1});
            break;
          case 4:
            c.push_back({first, UpdateOp::Retract, {id, pol}, Attitude::Belief, -1});
            break;
        }
        n_events += c.size();
        chains.push_back(std::move(c));
      }

      // Interleave chains, keeping each chain's internal order.
      std::vector<std::size_t> cursor(chains.size(), 0);
      std::vector<std::size_t> live;
      for (std::size_t i = 0; i < chains.size(); ++i) live.push_back(i);
      std::vector<Pending> order;
      order.reserve(n_events);
      while (!live.empty()) {
        const std::size_t pick = rng.below(live.size());
        const std::size_t ci = live[pick];
        order.push_back(chains[ci][cursor[ci]++]);
        if (cursor[ci] == chains[ci].size()) {
          live[pick] = live.back();
          live.pop_back();
        }
      }

      const double step = cfg.level_duration / static_cast<double>(order.size() + 1);
      for (std::size_t i = 0; i < order.size(); ++i) {
        const Pending& pe = order[i];
        UpdateEvent ev;
        ev.ordinal = ++ordinal;
        ev.team = team;
        ev.level = level;
        ev.t = std::round(step * static_cast<double>(i + 1) * 1000.0) / 1000.0;
        ev.actor = pe.actor;
        ev.op = pe.op;
        ev.proposition = pe.prop;
        ev.attitude = pe.attitude;
        if (pe.plant >= 0) plants[static_cast<std::size_t>(pe.plant)].ordinals.push_back(ev.ordinal);
        corpus.events.emplace_back(std::move(ev));
      }
      for (auto& p : plants) corpus.ledger.planted.push_back(std::move(p));
    }
  }
  return corpus;
}

// ---- ledger file ---------------------------------------------------------

inline nlohmann::json config_to_json(const GenConfig& cfg) {
  nlohmann::json rates = nlohmann::json::object();
  for (const auto& [k, r] : cfg.rate_by_kind) rates[std::string(to_string(k))] = r;
  return {{"teams", cfg.teams},
          {"levels", cfg.levels},
          {"seed", cfg.seed},
          {"rate_by_kind", rates},
          {"team_baseline_spread", cfg.team_baseline_spread},
          {"noise", cfg.noise},
          {"roles", cfg.roles},
          {"level_duration", cfg.level_duration},
          {"min_events_per_level", cfg.min_events_per_level}};
}

inline nlohmann::json ledger_to_json(const PlantLedger& ledger, const GenConfig& cfg) {
  nlohmann::json doc;
  doc["generator"] = {{"rng", kGeneratorRng}, {"normal", kGeneratorNormal}, {"seed", ledger.seed}};
  doc["config"] = config_to_json(cfg);
  doc["planted"] = nlohmann::json::array();
  for (const auto& p : ledger.planted) {
    nlohmann::json e = {{"team", p.team},
                        {"level", p.level},
                        {"kind", to_string(p.key.kind)},
                        {"proposition_id", p.key.proposition_id},
                        {"holder", p.key.holder},
                        {"ordinals", p.ordinals}};
    e["counterpart"] = p.key.counterpart ? nlohmann::json(*p.key.counterpart) : nlohmann::json();
    doc["planted"].push_back(std::move(e));
  }
  return doc;
}

inline PlantLedger ledger_from_json(const nlohmann::json& doc) {
  PlantLedger ledger;
  try {
    ledger.seed = doc.at("generator").at("seed").get<std::uint64_t>();
    for (const auto& e : doc.at("planted")) {
      PlantedDiscrepancy p;
      p.team = e.at("team").get<TeamId>();
      p.level = e.at("level").get<LevelId>();
      auto kind = parse_kind(e.at("kind").get<std::string>());
      if (!kind) throw Error(ErrorCode::ParseError, "unknown kind in ledger");
      p.key.kind = *kind;
      p.key.proposition_id = e.at("proposition_id").get<std::string>();
      p.key.holder = e.at("holder").get<std::string>();
      if (!e.at("counterpart").is_null()) p.key.counterpart = e.at("counterpart").get<std::string>();
      p.ordinals = e.at("ordinals").get<std::vector<Ordinal>>();
      ledger.planted.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::ParseError, std::string("malformed ledger: ") + ex.what());
  }
  return ledger;
}

}  // namespace smm
