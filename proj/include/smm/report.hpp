#pragma once

// Output formats for counts, predictions and score cards. Row order is fixed
// (team, then level, then measure name) so identical inputs give
// byte-identical output.

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "smm/episode.hpp"
#include "smm/predictor.hpp"
#include "smm/scoring.hpp"

namespace smm {

enum class OutputFormat { Csv, Json, Table };

// Shortest decimal text that reads back as the same double.
inline std::string format_real(double v) {
  if (v == 0.0) return "0";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace detail {

inline void write_aligned(std::ostream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& r : rows) {
    if (width.size() < r.size()) width.resize(r.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : rows) {
    std::string line;
    for (std::size_t i = 0; i < r.size(); ++i) {
      line += r[i];
      if (i + 1 < r.size()) line.append(width[i] - r[i].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

}  // namespace detail

// ---- episode counts --------------------------------------------------------

inline void write_counts_csv(std::ostream& out, std::span<const EpisodeCounts> counts) {
  out << "team,level,contradiction,omission,unsupported,false,total\n";
  for (const auto& c : counts) {
    out << c.team << ',' << c.level;
    for (auto k : kAllKinds) out << ',' << c[k];
    out << ',' << c.total << '\n';
  }
}

inline nlohmann::json counts_to_json(std::span<const EpisodeCounts> counts) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : counts) {
    nlohmann::json row = {{"team", c.team}, {"level", c.level}, {"total", c.total}};
    for (auto k : kAllKinds) row[std::string(to_string(k))] = c[k];
    arr.push_back(std::move(row));
  }
  return arr;
}

inline void write_counts_table(std::ostream& out, std::span<const EpisodeCounts> counts) {
  std::vector<std::vector<std::string>> rows = {
      {"team", "level", "contradiction", "omission", "unsupported", "false", "total"}};
  for (const auto& c : counts) {
    std::vector<std::string> r = {std::to_string(c.team), std::to_string(c.level)};
    for (auto k : kAllKinds) r.push_back(std::to_string(c[k]));
    r.push_back(std::to_string(c.total));
    rows.push_back(std::move(r));
  }
  detail::write_aligned(out, rows);
}

// Plot-ready long format shared by every figure table.
inline void write_long_header(std::ostream& out) { out << "series,team,level,kind,value\n"; }

inline void write_counts_long(std::ostream& out, std::span<const EpisodeCounts> counts) {
  for (const auto& c : counts)
    for (Measure m : kMeasuresByName)
      out << "count," << c.team << ',' << c.level << ',' << to_string(m) << ',' << c.get(m)
          << '\n';
}

// ---- predictions -------------------------------------------------------

inline void write_prediction_csv(std::ostream& out, const PredictionReport& rep) {
  out << "team,kind,predicted,actual,error\n";
  for (const auto& p : rep.predictions)
    out << p.team << ',' << to_string(p.measure) << ',' << format_real(p.predicted) << ','
        << p.actual << ',' << format_real(p.error) << '\n';
  for (Measure m : kMeasuresByName)
    out << "# mae " << to_string(m) << ' ' << format_real(rep.mae.at(m)) << '\n';
  if (rep.correlation)
    out << "# pearson r=" << format_real(rep.correlation->r)
        << " p=" << format_real(rep.correlation->p_value) << " n=" << rep.correlation->n << '\n';
  else
    out << "# pearson undefined: " << rep.correlation_error.value_or("") << '\n';
  out << "# " << kAutocorrelationNote << '\n';
}

inline nlohmann::json prediction_to_json(const PredictionReport& rep) {
  nlohmann::json doc;
  doc["target"] = rep.target;
  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [l, w] : rep.scheme.weights()) weights[std::to_string(l)] = w;
  doc["scheme"] = {{"uniform", rep.scheme.is_uniform()}, {"weights", weights}};
  doc["predictions"] = nlohmann::json::array();
  for (const auto& p : rep.predictions)
    doc["predictions"].push_back({{"team", p.team},
                                  {"kind", to_string(p.measure)},
                                  {"predicted", p.predicted},
                                  {"actual", p.actual},
                                  {"error", p.error}});
  nlohmann::json mae = nlohmann::json::object();
  for (const auto& [m, v] : rep.mae) mae[std::string(to_string(m))] = v;
  nlohmann::json corr;
  if (rep.correlation)
    corr = {{"r", rep.correlation->r}, {"p", rep.correlation->p_value}, {"n", rep.correlation->n}};
  doc["aggregate"] = {{"mae_by_kind", mae}, {"pearson", corr}};
  if (rep.correlation_error) doc["aggregate"]["pearson_error"] = *rep.correlation_error;
  doc["note"] = kAutocorrelationNote;
  return doc;
}

inline void write_prediction_table(std::ostream& out, const PredictionReport& rep) {
  std::vector<std::vector<std::string>> rows = {{"team", "kind", "predicted", "actual", "error"}};
  for (const auto& p : rep.predictions) {
    std::ostringstream pred, err;
    pred << std::fixed << std::setprecision(2) << p.predicted;
    err << std::fixed << std::setprecision(2) << p.error;
    rows.push_back({std::to_string(p.team), std::string(to_string(p.measure)), pred.str(),
                    std::to_string(p.actual), err.str()});
  }
  detail::write_aligned(out, rows);
  out << "\nmean absolute error (level " << rep.target << ")\n";
  std::vector<std::vector<std::string>> mae;
  for (Measure m : kMeasuresByName) {
    std::ostringstream v;
    v << std::fixed << std::setprecision(3) << rep.mae.at(m);
    mae.push_back({"  " + std::string(to_string(m)), v.str()});
  }
  detail::write_aligned(out, mae);
  if (rep.correlation) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << "pearson r = " << rep.correlation->r
      << ", p = " << rep.correlation->p_value << ", n = " << rep.correlation->n;
    out << '\n' << s.str() << '\n';
  } else {
    out << "\npearson undefined: " << rep.correlation_error.value_or("") << '\n';
  }
  out << kAutocorrelationNote << '\n';
}

inline void write_prediction_long(std::ostream& out, const PredictionReport& rep) {
  for (const auto& p : rep.predictions) {
    const std::string tail = "," + std::to_string(p.team) + "," + std::to_string(rep.target) +
                             "," + std::string(to_string(p.measure)) + ",";
    out << "predicted" << tail << format_real(p.predicted) << '\n';
    out << "actual" << tail << p.actual << '\n';
    out << "error" << tail << format_real(p.error) << '\n';
  }
}

// ---- score cards ---------------------------------------------------------

inline std::string target_label(const TargetScore& t) {
  return t.target_id + (t.difficulty == Difficulty::Hard ? " (Hard)" : " (Easy)");
}

// Targets as rows, one column per team, totals last.
inline void write_score_table(std::ostream& out, std::span<const ScoreCard> cards,
                              std::span<const TargetSpec> targets) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head = {"Target", "Max"};
  for (const auto& c : cards) head.push_back("Team " + std::to_string(c.team));
  rows.push_back(std::move(head));
  std::uint32_t total_max = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    TargetScore label{targets[i].id, targets[i].difficulty, 0, targets[i].max_points};
    std::vector<std::string> r = {target_label(label), std::to_string(targets[i].max_points)};
    for (const auto& c : cards)
      r.push_back(format_points(c.per_target[i].earned, c.per_target[i].max));
    total_max += targets[i].max_points;
    rows.push_back(std::move(r));
  }
  std::vector<std::string> total = {"Total", std::to_string(total_max)};
  for (const auto& c : cards) total.push_back(format_points(c.total_earned, c.total_max));
  rows.push_back(std::move(total));
  detail::write_aligned(out, rows);
}

inline void write_score_csv(std::ostream& out, std::span<const ScoreCard> cards) {
  out << "team,target,earned,max,percent\n";
  auto pct = [](std::uint64_t e, std::uint64_t m) {
    const auto t = percent_tenths(e, m);
    return std::to_string(t / 10) + "." + std::to_string(t % 10);
  };
  for (const auto& c : cards) {
    for (const auto& t : c.per_target)
      out << c.team << ',' << t.target_id << ',' << t.earned << ',' << t.max << ','
          << pct(t.earned, t.max) << '\n';
    out << c.team << ",total," << c.total_earned << ',' << c.total_max << ','
        << pct(c.total_earned, c.total_max) << '\n';
  }
}

inline nlohmann::json scores_to_json(std::span<const ScoreCard> cards) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cards) {
    nlohmann::json targets = nlohmann::json::array();
    for (const auto& t : c.per_target)
      targets.push_back({{"target", t.target_id},
                         {"difficulty", to_string(t.difficulty)},
                         {"earned", t.earned},
                         {"max", t.max},
                         {"percent", t.percent()}});
    arr.push_back({{"team", c.team},
                   {"per_target", targets},
                   {"total_earned", c.total_earned},
                   {"total_max", c.total_max},
                   {"total_percent", c.total_percent()}});
  }
  return arr;
}

}  // namespace smm
