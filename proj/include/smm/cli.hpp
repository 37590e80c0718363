#pragma once

// Command-line front end: analyze, predict, score, generate, report.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smm/analysis.hpp"
#include "smm/io.hpp"
#include "smm/predictor.hpp"
#include "smm/report.hpp"
#include "smm/synth.hpp"

namespace smm::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

struct CliConfig {
  std::string command;
  std::string scenario;
  std::vector<std::string> events;
  std::optional<LevelId> target;
  std::string weights = "uniform";
  OutputFormat format = OutputFormat::Csv;
  std::string output;
  bool long_format = false;
  TeamId teams = 0;
  std::optional<LevelId> level;
  GenConfig gen;
};

namespace detail {

inline spdlog::level::level_enum log_level_from_env() {
  const char* v = std::getenv("SMM_LOG");
  if (!v) return spdlog::level::warn;
  const std::string s(v);
  if (s == "error") return spdlog::level::err;
  if (s == "info") return spdlog::level::info;
  if (s == "debug") return spdlog::level::debug;
  return spdlog::level::warn;
}

inline EventStream load_all_events(const CliConfig& cfg, const Scenario& sc) {
  EventStream merged;
  for (const auto& path : cfg.events) {
    EventStream s = load_events(path, sc);
    if (cfg.events.size() == 1) return s;
    merged.source = path;  // errors after the merge point at the last file
    merged.records.insert(merged.records.end(), s.records.begin(), s.records.end());
    merged.lines.insert(merged.lines.end(), s.lines.begin(), s.lines.end());
  }
  return merged;
}

// Writes to --output when given, otherwise to `out`.
template <class Fn>
void emit(const CliConfig& cfg, std::ostream& out, Fn&& write) {
  if (cfg.output.empty()) {
    write(out);
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw Error(ErrorCode::Io, "cannot write '" + cfg.output + "'");
  write(f);
  if (!f) throw Error(ErrorCode::Io, "error writing '" + cfg.output + "'");
}

inline PredictionReport run_prediction(const CliConfig& cfg, const Scenario& sc,
                                       const Analysis& analysis) {
  const LevelId target = cfg.target.value_or(sc.levels.back().level);
  if (!sc.find_level(target))
    throw Error(ErrorCode::UnknownTarget, "level " + std::to_string(target) + " is not declared");
  std::set<LevelId> predictors;
  for (const auto& l : sc.levels)
    if (l.level != target) predictors.insert(l.level);
  const WeightScheme scheme = parse_weight_spec(cfg.weights, predictors);
  const auto histories = build_history(analysis.counts);
  return batch_report(histories, target, scheme);
}

inline void cmd_analyze(const CliConfig& cfg, std::ostream& out, spdlog::logger& log) {
  const Scenario sc = load_scenario(cfg.scenario);
  const EventStream stream = load_all_events(cfg, sc);
  log.info("loaded {} records", stream.records.size());
  const Analysis a = analyze(sc, stream, cfg.teams);
  log.info("{} teams, {} discrepancies", a.teams, a.all_records().size());
  emit(cfg, out, [&](std::ostream& o) {
    if (cfg.long_format) {
      write_long_header(o);
      write_counts_long(o, a.counts);
    } else if (cfg.format == OutputFormat::Json) {
      o << counts_to_json(a.counts).dump(2) << '\n';
    } else if (cfg.format == OutputFormat::Table) {
      write_counts_table(o, a.counts);
    } else {
      write_counts_csv(o, a.counts);
    }
  });
}

inline void cmd_predict(const CliConfig& cfg, std::ostream& out, spdlog::logger& log) {
  const Scenario sc = load_scenario(cfg.scenario);
  const EventStream stream = load_all_events(cfg, sc);
  const Analysis a = analyze(sc, stream, cfg.teams);
  const PredictionReport rep = run_prediction(cfg, sc, a);
  log.info("predicted level {} for {} teams", rep.target, a.teams);
  emit(cfg, out, [&](std::ostream& o) {
    if (cfg.long_format) {
      write_long_header(o);
      write_prediction_long(o, rep);
      o << "# " << kAutocorrelationNote << '\n';
    } else if (cfg.format == OutputFormat::Json) {
      o << prediction_to_json(rep).dump(2) << '\n';
    } else if (cfg.format == OutputFormat::Table) {
      write_prediction_table(o, rep);
    } else {
      write_prediction_csv(o, rep);
    }
  });
}

inline void cmd_report(const CliConfig& cfg, std::ostream& out, spdlog::logger&) {
  const Scenario sc = load_scenario(cfg.scenario);
  const EventStream stream = load_all_events(cfg, sc);
  const Analysis a = analyze(sc, stream, cfg.teams);
  const PredictionReport rep = run_prediction(cfg, sc, a);
  emit(cfg, out, [&](std::ostream& o) {
    if (cfg.format == OutputFormat::Json) {
      nlohmann::json doc;
      doc["counts"] = counts_to_json(a.counts);
      doc["prediction"] = prediction_to_json(rep);
      o << doc.dump(2) << '\n';
    } else if (cfg.format == OutputFormat::Table) {
      o << "discrepancies per level\n";
      write_counts_table(o, a.counts);
      o << "\nlevel " << rep.target << " prediction\n";
      write_prediction_table(o, rep);
    } else {
      write_long_header(o);
      write_counts_long(o, a.counts);
      write_prediction_long(o, rep);
      o << "# " << kAutocorrelationNote << '\n';
    }
  });
}

inline void cmd_score(const CliConfig& cfg, std::ostream& out, spdlog::logger&) {
  const Scenario sc = load_scenario(cfg.scenario);
  if (sc.targets.empty())
    throw Error(ErrorCode::DanglingReference, "scenario '" + cfg.scenario + "' declares no targets");
  const EventStream stream = load_all_events(cfg, sc);

  std::map<TeamId, ConfirmationLog> logs;
  for (TeamId t = 1; t <= cfg.teams; ++t) logs[t].team = t;
  for (const auto& rec : stream.records) {
    auto& log = logs[team_of(rec)];
    log.team = team_of(rec);
    if (const auto* c = std::get_if<Confirmation>(&rec))
      if (!cfg.level || c->level == *cfg.level) log.confirmed.insert(c->element_id);
  }
  std::vector<ScoreCard> cards;
  for (const auto& [team, log] : logs) cards.push_back(score(sc.targets, log));

  emit(cfg, out, [&](std::ostream& o) {
    if (cfg.format == OutputFormat::Json)
      o << scores_to_json(cards).dump(2) << '\n';
    else if (cfg.format == OutputFormat::Csv)
      write_score_csv(o, cards);
    else
      write_score_table(o, cards, sc.targets);
  });
}

inline void cmd_generate(const CliConfig& cfg, std::ostream& out, spdlog::logger& log) {
  const Corpus corpus = generate(cfg.gen);
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create '" + cfg.output + "': " + ec.message());

  auto write = [&](const fs::path& p, auto&& body) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + p.string() + "'");
    body(f);
    if (!f) throw Error(ErrorCode::Io, "error writing '" + p.string() + "'");
  };
  write(dir / "scenario.json", [&](std::ostream& o) { o << serialize_scenario(corpus.scenario); });
  write(dir / "events.ndjson", [&](std::ostream& o) { write_events(o, corpus.events); });
  write(dir / "ledger.json",
        [&](std::ostream& o) { o << ledger_to_json(corpus.ledger, cfg.gen).dump(2) << '\n'; });
  log.info("wrote {} events, {} planted discrepancies", corpus.events.size(),
           corpus.ledger.planted.size());
  out << "wrote " << (dir / "scenario.json").string() << ", " << (dir / "events.ndjson").string()
      << ", " << (dir / "ledger.json").string() << " (" << corpus.events.size() << " events, "
      << corpus.ledger.planted.size() << " planted discrepancies)\n";
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  spdlog::logger log("smm", sink);
  log.set_level(detail::log_level_from_env());
  log.set_pattern("[%l] %v");

  CliConfig cfg;
  CLI::App app{"Shared-mental-model discrepancy tracking and prediction", "smm"};
  app.require_subcommand(1);

  const std::map<std::string, OutputFormat> formats = {
      {"csv", OutputFormat::Csv}, {"json", OutputFormat::Json}, {"table", OutputFormat::Table}};
  std::string format_name;

  auto add_inputs = [&](CLI::App* sub) {
    sub->add_option("--scenario", cfg.scenario, "scenario document (JSON)")->required();
    sub->add_option("--events", cfg.events, "event stream(s) (NDJSON)")->required();
    sub->add_option("--output,-o", cfg.output, "write to this file instead of stdout");
    sub->add_option("--teams", cfg.teams, "report teams 1..N even if they have no events")
        ->check(CLI::NonNegativeNumber);
  };
  auto add_format = [&](CLI::App* sub, const std::string& def) {
    sub->add_option("--format", format_name, "csv, json or table (default " + def + ")")
        ->check(CLI::IsMember({"csv", "json", "table"}, CLI::ignore_case));
  };
  auto add_prediction = [&](CLI::App* sub) {
    sub->add_option("--target", cfg.target, "level to predict (default: last level)");
    sub->add_option("--weights", cfg.weights, "\"uniform\" or level:weight list, e.g. 1:0.5,2:0.3,3:0.2");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "per-level discrepancy counts");
  add_inputs(analyze);
  add_format(analyze, "csv");
  analyze->add_flag("--long", cfg.long_format, "plot-ready long-format CSV");

  CLI::App* predict = app.add_subcommand("predict", "predict a level from the others");
  add_inputs(predict);
  add_format(predict, "csv");
  add_prediction(predict);
  predict->add_flag("--long", cfg.long_format, "plot-ready long-format CSV");

  CLI::App* score_cmd = app.add_subcommand("score", "target-identification score cards");
  add_inputs(score_cmd);
  add_format(score_cmd, "table");
  score_cmd->add_option("--level", cfg.level, "only count confirmations from this level");

  CLI::App* report = app.add_subcommand("report", "counts and predictions as figure tables");
  add_inputs(report);
  add_format(report, "csv");
  add_prediction(report);

  CLI::App* gen = app.add_subcommand("generate", "write a synthetic corpus with its ledger");
  gen->add_option("--output,-o", cfg.output, "output directory")->required();
  gen->add_option("--seed", cfg.gen.seed, "generator seed");
  gen->add_option("--teams", cfg.gen.teams, "number of teams");
  gen->add_option("--levels", cfg.gen.levels, "number of levels");
  gen->add_option("--spread", cfg.gen.team_baseline_spread, "cross-team spread of baseline rates");
  gen->add_option("--noise", cfg.gen.noise, "level-to-level noise");
  gen->add_option("--min-events", cfg.gen.min_events_per_level, "minimum events per level");
  std::vector<std::string> rates;
  gen->add_option("--rate", rates, "kind=rate, e.g. omission=8");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  if (!format_name.empty())
    cfg.format = formats.at(CLI::detail::to_lower(format_name));
  else if (*score_cmd)
    cfg.format = OutputFormat::Table;

  try {
    if (*gen) {
      for (const auto& r : rates) {
        auto eq = r.find('=');
        auto kind = eq == std::string::npos ? std::nullopt : parse_kind(r.substr(0, eq));
        if (!kind) throw Error(ErrorCode::InvalidConfig, "bad --rate '" + r + "'");
        try {
          cfg.gen.rate_by_kind[*kind] = std::stod(r.substr(eq + 1));
        } catch (const std::logic_error&) {
          throw Error(ErrorCode::InvalidConfig, "bad --rate '" + r + "'");
        }
      }
      detail::cmd_generate(cfg, out, log);
    } else if (*analyze) {
      detail::cmd_analyze(cfg, out, log);
    } else if (*predict) {
      detail::cmd_predict(cfg, out, log);
    } else if (*score_cmd) {
      detail::cmd_score(cfg, out, log);
    } else if (*report) {
      detail::cmd_report(cfg, out, log);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::Io ? kExitIo : kExitValidation;
  }
  return kExitOk;
}

}  // namespace smm::cli
