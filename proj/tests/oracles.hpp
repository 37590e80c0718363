#pragma once

// Test-only reference implementations. None of these call into the code they
// check; they are deliberately naive.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "smm/belief.hpp"
#include "smm/discrepancy.hpp"

namespace smm::oracle {

// Flat (agent, id) -> (polarity, attitude) table replayed from raw events.
using Table = std::map<std::pair<AgentId, PropositionId>, std::pair<Polarity, Attitude>>;

inline void replay(Table& t, const UpdateEvent& ev) {
  const auto key = std::pair{ev.actor, ev.proposition.id};
  if (ev.op == UpdateOp::Assert)
    t[key] = {ev.proposition.polarity, ev.attitude};
  else
    t.erase(key);
}

// Contradictions by enumerating every pair of (agent, id) rows.
inline std::set<std::tuple<PropositionId, AgentId, AgentId>> contradictions(const Table& t) {
  std::set<std::tuple<PropositionId, AgentId, AgentId>> out;
  for (const auto& [k1, v1] : t)
    for (const auto& [k2, v2] : t)
      if (k1.second == k2.second && k1.first < k2.first && v1.second == v2.second &&
          v1.first != v2.first)
        out.emplace(k1.second, k1.first, k2.first);
  return out;
}

// All four kinds straight from the definitions, over a flat table.
inline DiscrepancySet all_discrepancies(const Table& t, const std::vector<AgentId>& agents,
                                        const GroundTruth& gt) {
  DiscrepancySet out;
  for (const auto& [id, a, b] : contradictions(t))
    out.insert({DiscrepancyKind::BeliefContradiction, id, a, b});

  auto holds = [&](const AgentId& a, const PropositionId& id) { return t.contains({a, id}); };

  for (const auto& b : agents) {
    auto it = gt.expected_knowledge.find(b);
    if (it == gt.expected_knowledge.end()) continue;
    for (const auto& q : it->second) {
      if (holds(b, q)) continue;
      for (const auto& a : agents) {  // agents sorted: first holder is the lowest id
        if (a != b && holds(a, q)) {
          out.insert({DiscrepancyKind::Omission, q, a, b});
          break;
        }
      }
    }
  }

  for (const auto& [key, val] : t) {
    const auto& [agent, id] = key;
    bool peer = false;
    for (const auto& other : agents) peer = peer || (other != agent && holds(other, id));
    if (!gt.coverage.contains(id) && !peer)
      out.insert({DiscrepancyKind::UnsupportedBelief, id, agent, std::nullopt});
    auto f = gt.facts.find(id);
    if (f != gt.facts.end() && f->second != val.first)
      out.insert({DiscrepancyKind::FalseBelief, id, agent, std::nullopt});
  }
  return out;
}

// Student-t two-tailed p-value by Simpson integration of the density.
inline double t_two_tailed_p(double t, double df) {
  t = std::abs(t);
  const double logc = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) -
                      0.5 * std::log(df * 3.14159265358979323846);
  auto pdf = [&](double x) { return std::exp(logc - (df + 1) / 2 * std::log1p(x * x / df)); };
  const int n = 200000;  // even
  const double h = t / n;
  double s = pdf(0) + pdf(t);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * pdf(i * h);
  const double half_area = s * h / 3;  // integral of pdf over [0, t]
  return 1.0 - 2.0 * half_area;
}

// Pearson r straight from the textbook sums (single pass, no centering).
inline double pearson_r(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += static_cast<long double>(x[i]) * x[i];
    syy += static_cast<long double>(y[i]) * y[i];
    sxy += static_cast<long double>(x[i]) * y[i];
  }
  const long double num = n * sxy - sx * sy;
  const long double den = std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
  return static_cast<double>(num / den);
}

// Random events over a small id/agent alphabet so collisions are frequent.
// Retracts are only generated for ids the actor holds.
inline std::vector<UpdateEvent> random_stream(std::mt19937_64& rng, std::size_t n,
                                              const std::vector<AgentId>& agents, int ids,
                                              TeamId team = 1, LevelId level = 1) {
  std::vector<UpdateEvent> out;
  Table t;
  std::uniform_int_distribution<int> pick_agent(0, static_cast<int>(agents.size()) - 1);
  std::uniform_int_distribution<int> pick_id(0, ids - 1);
  std::uniform_int_distribution<int> pick3(0, 2);
  std::uniform_int_distribution<int> pick10(0, 9);
  for (std::size_t i = 0; i < n; ++i) {
    UpdateEvent ev;
    ev.ordinal = i + 1;
    ev.team = team;
    ev.level = level;
    ev.actor = agents[static_cast<std::size_t>(pick_agent(rng))];
    ev.proposition.id = "p" + std::to_string(pick_id(rng));
    ev.proposition.polarity = pick10(rng) < 5 ? Polarity::Positive : Polarity::Negative;
    // Attitude mostly belief so same-attitude collisions dominate.
    const int a = pick10(rng);
    ev.attitude = a < 7 ? Attitude::Belief : (a < 9 ? Attitude::Goal : Attitude::Commitment);
    const bool held = t.contains({ev.actor, ev.proposition.id});
    ev.op = held && pick3(rng) == 0 ? UpdateOp::Retract : UpdateOp::Assert;
    replay(t, ev);
    out.push_back(ev);
  }
  return out;
}

// Ground truth over the same alphabet: some ids are facts, some are covered
// without a fact, the rest are outside coverage; expectations are random.
inline GroundTruth random_ground_truth(std::mt19937_64& rng, const std::vector<AgentId>& agents,
                                       int ids) {
  GroundTruth gt;
  std::uniform_int_distribution<int> pick(0, 9);
  for (int i = 0; i < ids; ++i) {
    const std::string id = "p" + std::to_string(i);
    const int r = pick(rng);
    if (r < 4) {
      gt.coverage.insert(id);
      gt.facts[id] = pick(rng) < 5 ? Polarity::Positive : Polarity::Negative;
    } else if (r < 6) {
      gt.coverage.insert(id);
    }
  }
  for (const auto& a : agents) {
    auto& exp = gt.expected_knowledge[a];
    for (int i = 0; i < ids; ++i)
      if (pick(rng) < 3) exp.insert("p" + std::to_string(i));
  }
  return gt;
}

}  // namespace smm::oracle
