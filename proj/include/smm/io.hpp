#pragma once

// Reading and writing the scenario document (JSON) and the event stream
// (newline-delimited JSON). Ingestion is strict: the first invalid record
// aborts with an Error carrying its source location. docs/formats.md is the
// normative description of both formats.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "smm/scenario.hpp"

namespace smm {

using json = nlohmann::json;

namespace detail {

// Converts a byte offset into one-based line and column.
inline SourceLocation locate(std::string_view text, std::size_t byte, std::string file) {
  SourceLocation loc{std::move(file), 1, 1, {}};
  const std::size_t end = std::min(byte, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++loc.line;
      loc.column = 1;
    } else {
      ++loc.column;
    }
  }
  return loc;
}

inline std::string escape_pointer_token(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// Typed, strict access to one JSON object. Every failure names the file,
// the line (for stream records) and the JSON pointer of the offending value.
class ObjectReader {
 public:
  ObjectReader(const json& obj, SourceLocation base, std::string pointer)
      : obj_(obj), base_(std::move(base)), pointer_(std::move(pointer)) {
    if (!obj_.is_object()) fail(ErrorCode::ParseError, pointer_, "expected an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [k, v] : obj_.items()) {
      bool known = false;
      for (auto key : keys) known = known || key == k;
      if (!known) fail(ErrorCode::ParseError, child(k), "unknown field '" + k + "'");
    }
  }

  bool has(std::string_view key) const { return obj_.contains(key); }

  const json& at(std::string_view key) const {
    auto it = obj_.find(key);
    if (it == obj_.end())
      fail(ErrorCode::ParseError, pointer_, "missing field '" + std::string(key) + "'");
    return *it;
  }

  std::string string(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_string()) fail(ErrorCode::ParseError, child(key), "expected a string");
    return v.get<std::string>();
  }

  std::string nonempty_string(std::string_view key) const {
    std::string s = string(key);
    if (s.empty()) fail(ErrorCode::ParseError, child(key), "must not be empty");
    return s;
  }

  std::int64_t integer(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_number_integer()) fail(ErrorCode::ParseError, child(key), "expected an integer");
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
      fail(ErrorCode::ParseError, child(key), "integer out of range");
    return v.get<std::int64_t>();
  }

  int positive_int(std::string_view key) const {
    std::int64_t v = integer(key);
    if (v < 1 || v > INT32_MAX) fail(ErrorCode::ParseError, child(key), "expected an integer >= 1");
    return static_cast<int>(v);
  }

  double number(std::string_view key) const {
    const json& v = at(key);
    if (!v.is_number()) fail(ErrorCode::ParseError, child(key), "expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) fail(ErrorCode::ParseError, child(key), "expected a finite number");
    return d;
  }

  std::string child(std::string_view key) const {
    return pointer_ + "/" + escape_pointer_token(key);
  }

  const std::string& pointer() const { return pointer_; }
  const SourceLocation& base() const { return base_; }

  [[noreturn]] void fail(ErrorCode code, std::string pointer, const std::string& msg) const {
    SourceLocation where = base_;
    where.pointer = std::move(pointer);
    throw Error(code, msg, std::move(where));
  }

 private:
  const json& obj_;
  SourceLocation base_;
  std::string pointer_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, "error reading '" + path + "'");
  return ss.str();
}

inline Proposition read_proposition(const ObjectReader& parent, std::string_view key,
                                    bool polarity_required) {
  ObjectReader r(parent.at(key), parent.base(), parent.child(key));
  r.allow_only({"id", "polarity"});
  Proposition p;
  p.id = r.nonempty_string("id");
  if (polarity_required || r.has("polarity")) {
    auto pol = parse_polarity(r.string("polarity"));
    if (!pol) r.fail(ErrorCode::ParseError, r.child("polarity"), "expected positive or negative");
    p.polarity = *pol;
  }
  return p;
}

inline std::set<PropositionId> read_id_list(const json& v, const ObjectReader& owner,
                                            const std::string& pointer) {
  if (!v.is_array()) owner.fail(ErrorCode::ParseError, pointer, "expected an array of ids");
  std::set<PropositionId> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string ptr = pointer + "/" + std::to_string(i);
    if (!v[i].is_string() || v[i].get<std::string>().empty())
      owner.fail(ErrorCode::ParseError, ptr, "expected a non-empty string id");
    if (!out.insert(v[i].get<std::string>()).second)
      owner.fail(ErrorCode::ParseError, ptr, "duplicate id '" + v[i].get<std::string>() + "'");
  }
  return out;
}

}  // namespace detail

// Parses and validates a scenario document held in memory. `source` is only
// used for error locations.
inline Scenario parse_scenario(std::string_view text, const std::string& source = "<scenario>") {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what(),
                detail::locate(text, e.byte == 0 ? 0 : e.byte - 1, source));
  }

  const SourceLocation base{source, 0, 0, {}};
  detail::ObjectReader top(doc, base, "");
  top.allow_only({"schema_version", "description", "roles", "levels", "ground_truth", "targets"});

  Scenario sc;
  const std::int64_t version = top.integer("schema_version");
  if (version != kSchemaVersion)
    top.fail(ErrorCode::UnknownVersion, "/schema_version",
             "schema_version " + std::to_string(version) + " is not supported (expected " +
                 std::to_string(kSchemaVersion) + ")");
  sc.schema_version = static_cast<int>(version);
  if (top.has("description")) sc.description = top.string("description");

  const json& roles = top.at("roles");
  if (!roles.is_array() || roles.empty())
    top.fail(ErrorCode::ParseError, "/roles", "expected a non-empty array of role names");
  for (std::size_t i = 0; i < roles.size(); ++i) {
    const std::string ptr = "/roles/" + std::to_string(i);
    if (!roles[i].is_string() || roles[i].get<std::string>().empty())
      top.fail(ErrorCode::ParseError, ptr, "expected a non-empty role name");
    AgentId a = roles[i].get<std::string>();
    if (sc.has_role(a)) top.fail(ErrorCode::ParseError, ptr, "duplicate agent id '" + a + "'");
    sc.roles.push_back(std::move(a));
  }

  const json& levels = top.at("levels");
  if (!levels.is_array() || levels.empty())
    top.fail(ErrorCode::ParseError, "/levels", "expected a non-empty array of levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    detail::ObjectReader lr(levels[i], base, "/levels/" + std::to_string(i));
    lr.allow_only({"level", "duration_seconds"});
    LevelSpec spec{lr.positive_int("level"), lr.number("duration_seconds")};
    if (spec.level != static_cast<LevelId>(i + 1))
      lr.fail(ErrorCode::ParseError, lr.child("level"),
              "levels must be numbered 1..n in order; expected " + std::to_string(i + 1));
    if (spec.duration_seconds <= 0.0)
      lr.fail(ErrorCode::ParseError, lr.child("duration_seconds"), "must be positive");
    sc.levels.push_back(spec);
  }

  const json& gts = top.at("ground_truth");
  if (!gts.is_array()) top.fail(ErrorCode::ParseError, "/ground_truth", "expected an array");
  for (std::size_t i = 0; i < gts.size(); ++i) {
    detail::ObjectReader gr(gts[i], base, "/ground_truth/" + std::to_string(i));
    gr.allow_only({"level", "facts", "coverage", "expected_knowledge"});
    const LevelId level = gr.positive_int("level");
    if (!sc.find_level(level))
      gr.fail(ErrorCode::DanglingReference, gr.child("level"),
              "ground truth for undeclared level " + std::to_string(level));
    if (sc.ground_truth.contains(level))
      gr.fail(ErrorCode::ParseError, gr.child("level"),
              "duplicate ground truth for level " + std::to_string(level));

    GroundTruth gt;
    gt.coverage = detail::read_id_list(gr.at("coverage"), gr, gr.child("coverage"));

    const json& facts = gr.at("facts");
    if (!facts.is_array()) gr.fail(ErrorCode::ParseError, gr.child("facts"), "expected an array");
    for (std::size_t j = 0; j < facts.size(); ++j) {
      detail::ObjectReader fr(facts[j], base, gr.child("facts") + "/" + std::to_string(j));
      fr.allow_only({"id", "polarity"});
      const PropositionId id = fr.nonempty_string("id");
      auto pol = parse_polarity(fr.string("polarity"));
      if (!pol) fr.fail(ErrorCode::ParseError, fr.child("polarity"), "expected positive or negative");
      if (!gt.coverage.contains(id))
        fr.fail(ErrorCode::DanglingReference, fr.child("id"),
                "fact '" + id + "' is not listed in coverage");
      if (!gt.facts.emplace(id, *pol).second)
        fr.fail(ErrorCode::ParseError, fr.child("id"), "duplicate fact '" + id + "'");
    }

    const std::string ek_ptr = gr.child("expected_knowledge");
    const json& ek = gr.at("expected_knowledge");
    if (!ek.is_object()) gr.fail(ErrorCode::ParseError, ek_ptr, "expected an object");
    for (const auto& [agent, ids] : ek.items()) {
      const std::string ptr = ek_ptr + "/" + detail::escape_pointer_token(agent);
      if (!sc.has_role(agent))
        gr.fail(ErrorCode::DanglingReference, ptr, "undeclared agent '" + agent + "'");
      gt.expected_knowledge[agent] = detail::read_id_list(ids, gr, ptr);
    }
    for (const auto& r : sc.roles) gt.expected_knowledge.try_emplace(r);
    sc.ground_truth.emplace(level, std::move(gt));
  }
  for (const auto& l : sc.levels)
    if (!sc.ground_truth.contains(l.level))
      top.fail(ErrorCode::DanglingReference, "/ground_truth",
               "no ground truth for level " + std::to_string(l.level));

  if (top.has("targets")) {
    const json& targets = top.at("targets");
    if (!targets.is_array()) top.fail(ErrorCode::ParseError, "/targets", "expected an array");
    std::set<std::string> target_ids, element_ids;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      detail::ObjectReader tr(targets[i], base, "/targets/" + std::to_string(i));
      tr.allow_only({"id", "difficulty", "elements", "max_points"});
      TargetSpec t;
      t.id = tr.nonempty_string("id");
      if (!target_ids.insert(t.id).second)
        tr.fail(ErrorCode::ParseError, tr.child("id"), "duplicate target id '" + t.id + "'");
      auto diff = parse_difficulty(tr.string("difficulty"));
      if (!diff) tr.fail(ErrorCode::ParseError, tr.child("difficulty"), "expected easy or hard");
      t.difficulty = *diff;
      t.max_points = static_cast<std::uint32_t>(tr.positive_int("max_points"));
      const json& elems = tr.at("elements");
      if (!elems.is_array() || elems.empty())
        tr.fail(ErrorCode::ParseError, tr.child("elements"), "expected a non-empty array");
      std::uint32_t sum = 0;
      for (std::size_t j = 0; j < elems.size(); ++j) {
        detail::ObjectReader er(elems[j], base, tr.child("elements") + "/" + std::to_string(j));
        er.allow_only({"element_id", "points"});
        TargetElement e{er.nonempty_string("element_id"),
                        static_cast<std::uint32_t>(er.positive_int("points"))};
        if (!element_ids.insert(e.element_id).second)
          er.fail(ErrorCode::ParseError, er.child("element_id"),
                  "duplicate element id '" + e.element_id + "'");
        sum += e.points;
        t.elements.push_back(std::move(e));
      }
      if (sum != t.max_points)
        tr.fail(ErrorCode::ParseError, tr.child("max_points"),
                "max_points " + std::to_string(t.max_points) + " != sum of element points " +
                    std::to_string(sum));
      sc.targets.push_back(std::move(t));
    }
  }
  return sc;
}

inline Scenario load_scenario(const std::string& path) {
  return parse_scenario(detail::read_file(path), path);
}

namespace detail {

inline StreamRecord parse_record(const json& obj, const Scenario& sc, const SourceLocation& where) {
  ObjectReader r(obj, where, "");

  auto read_level = [&]() {
    const LevelId level = r.positive_int("level");
    if (!sc.find_level(level))
      r.fail(ErrorCode::DanglingReference, "/level", "undeclared level " + std::to_string(level));
    return level;
  };
  auto read_time = [&](LevelId level) {
    const double t = r.number("t");
    const double duration = sc.find_level(level)->duration_seconds;
    if (t < 0.0 || t > duration) {
      std::ostringstream os;
      os << "t = " << t << " outside [0, " << duration << "] for level " << level;
      r.fail(ErrorCode::OutOfRangeTime, "/t", os.str());
    }
    return t;
  };

  if (r.has("element_id")) {
    r.allow_only({"team", "level", "t", "element_id"});
    Confirmation c;
    c.team = r.positive_int("team");
    c.level = read_level();
    c.t = read_time(c.level);
    c.element_id = r.nonempty_string("element_id");
    if (!sc.has_element(c.element_id))
      r.fail(ErrorCode::UnknownElement, "/element_id",
             "element '" + c.element_id + "' is not part of any target");
    return c;
  }

  r.allow_only({"ordinal", "team", "level", "t", "actor", "op", "proposition", "attitude",
                "utterance_ref"});
  UpdateEvent ev;
  const std::int64_t ordinal = r.integer("ordinal");
  if (ordinal < 1) r.fail(ErrorCode::ParseError, "/ordinal", "ordinal must be >= 1");
  ev.ordinal = static_cast<Ordinal>(ordinal);
  ev.team = r.positive_int("team");
  ev.level = read_level();
  ev.t = read_time(ev.level);
  ev.actor = r.nonempty_string("actor");
  if (!sc.has_role(ev.actor))
    r.fail(ErrorCode::UnknownAgent, "/actor", "'" + ev.actor + "' is not a declared role");
  auto op = parse_op(r.string("op"));
  if (!op) r.fail(ErrorCode::ParseError, "/op", "expected assert or retract");
  ev.op = *op;
  const bool is_assert = ev.op == UpdateOp::Assert;
  ev.proposition = read_proposition(r, "proposition", is_assert);
  if (is_assert || r.has("attitude")) {
    auto att = parse_attitude(r.string("attitude"));
    if (!att) r.fail(ErrorCode::ParseError, "/attitude", "expected belief, goal or commitment");
    ev.attitude = *att;
  }
  if (r.has("utterance_ref")) ev.utterance_ref = r.string("utterance_ref");
  return ev;
}

}  // namespace detail

// Parses and validates an event stream. Blank lines are skipped; anything
// else must be a valid record.
inline EventStream parse_events(std::istream& in, const Scenario& sc,
                                const std::string& source = "<events>") {
  EventStream out;
  out.source = source;
  std::map<std::pair<TeamId, LevelId>, std::pair<Ordinal, std::uint64_t>> last;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      SourceLocation where{source, lineno, e.byte == 0 ? 1 : e.byte, {}};
      throw Error(ErrorCode::ParseError, e.what(), std::move(where));
    }
    const SourceLocation where{source, lineno, 1, {}};
    StreamRecord rec = detail::parse_record(obj, sc, where);

    if (const auto* ev = std::get_if<UpdateEvent>(&rec)) {
      auto [it, fresh] = last.try_emplace({ev->team, ev->level}, ev->ordinal, lineno);
      if (!fresh) {
        if (ev->ordinal <= it->second.first) {
          SourceLocation at = where;
          at.pointer = "/ordinal";
          throw Error(ErrorCode::OrdinalRegression,
                      "ordinal " + std::to_string(ev->ordinal) + " does not follow " +
                          std::to_string(it->second.first) + " (line " +
                          std::to_string(it->second.second) + ") for team " +
                          std::to_string(ev->team) + " level " + std::to_string(ev->level),
                      std::move(at));
        }
        it->second = {ev->ordinal, lineno};
      }
    }
    out.records.push_back(std::move(rec));
    out.lines.push_back(lineno);
  }
  if (in.bad()) throw Error(ErrorCode::Io, "error reading '" + source + "'");
  return out;
}

inline EventStream load_events(const std::string& path, const Scenario& sc) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  return parse_events(in, sc, path);
}

// ---- serialization -------------------------------------------------------

inline json to_json(const Scenario& sc) {
  json doc = json::object();
  doc["schema_version"] = sc.schema_version;
  if (sc.description) doc["description"] = *sc.description;
  doc["roles"] = sc.roles;
  doc["levels"] = json::array();
  for (const auto& l : sc.levels)
    doc["levels"].push_back({{"level", l.level}, {"duration_seconds", l.duration_seconds}});
  doc["ground_truth"] = json::array();
  for (const auto& [level, gt] : sc.ground_truth) {
    json g = {{"level", level}};
    g["facts"] = json::array();
    for (const auto& [id, pol] : gt.facts)
      g["facts"].push_back({{"id", id}, {"polarity", to_string(pol)}});
    g["coverage"] = gt.coverage;
    g["expected_knowledge"] = json::object();
    for (const auto& [agent, ids] : gt.expected_knowledge) g["expected_knowledge"][agent] = ids;
    doc["ground_truth"].push_back(std::move(g));
  }
  doc["targets"] = json::array();
  for (const auto& t : sc.targets) {
    json tj = {{"id", t.id}, {"difficulty", to_string(t.difficulty)}, {"max_points", t.max_points}};
    tj["elements"] = json::array();
    for (const auto& e : t.elements)
      tj["elements"].push_back({{"element_id", e.element_id}, {"points", e.points}});
    doc["targets"].push_back(std::move(tj));
  }
  return doc;
}

inline std::string serialize_scenario(const Scenario& sc) { return to_json(sc).dump(2) + "\n"; }

inline json to_json(const StreamRecord& rec) {
  if (const auto* c = std::get_if<Confirmation>(&rec))
    return {{"team", c->team}, {"level", c->level}, {"t", c->t}, {"element_id", c->element_id}};
  const auto& ev = std::get<UpdateEvent>(rec);
  json j = {{"ordinal", ev.ordinal},
            {"team", ev.team},
            {"level", ev.level},
            {"t", ev.t},
            {"actor", ev.actor},
            {"op", to_string(ev.op)},
            {"proposition",
             {{"id", ev.proposition.id}, {"polarity", to_string(ev.proposition.polarity)}}},
            {"attitude", to_string(ev.attitude)}};
  if (ev.utterance_ref) j["utterance_ref"] = *ev.utterance_ref;
  return j;
}

// One record per line, fields in a fixed order.
inline std::string serialize_record(const StreamRecord& rec) {
  // nlohmann::json objects sort keys; emit in declaration order instead so
  // files read naturally.
  const json j = to_json(rec);
  static const char* const update_order[] = {"ordinal", "team", "level", "t", "actor", "op",
                                             "proposition", "attitude", "utterance_ref"};
  static const char* const confirm_order[] = {"team", "level", "t", "element_id"};
  std::string out = "{";
  bool first = true;
  auto emit = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end()) return;
    if (!first) out += ',';
    first = false;
    out += json(key).dump();
    out += ':';
    if (std::string_view(key) == "proposition")
      out += "{\"id\":" + (*it)["id"].dump() + ",\"polarity\":" + (*it)["polarity"].dump() + "}";
    else
      out += it->dump();
  };
  if (std::holds_alternative<Confirmation>(rec))
    for (const char* k : confirm_order) emit(k);
  else
    for (const char* k : update_order) emit(k);
  out += '}';
  return out;
}

inline void write_events(std::ostream& out, std::span<const StreamRecord> records) {
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

}  // namespace smm
