#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "sigca/bitstream.hpp"
#include "sigca/compiler.hpp"
#include "sigca/harness.hpp"
#include "sigca/predicate_library.hpp"

namespace sigca {

using nlohmann::json;
using nlohmann::ordered_json;

inline constexpr const char* kArtifactFormat = "sigma-ca-system/1";

/// 1-based line of byte offset `pos` in `text`.
inline std::size_t line_at(const std::string& text, std::size_t pos) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < pos && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

/// Line of the first occurrence of "key": in `text`, 0 if absent.
inline std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 0 : line_at(text, pos);
}

inline json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), line_at(text, e.byte == 0 ? 0 : e.byte - 1));
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CheckerVariant parse_variant(const std::string& s) {
  if (s == "unary") return CheckerVariant::Unary;
  if (s == "counter") return CheckerVariant::Counter;
  throw ParseError("unknown variant '" + s + "' (expected unary or counter)");
}

// ---------------------------------------------------------------------------
// Bit-stream descriptors:
//   {"constant": 0|1}  {"periodic": "0110"}  {"prefix": "01", "then": <desc>}
//   {"unary": {"a": 1, "b": 0}}  (l_i = a*i + b)   {"from_word": true}

inline BitStream parse_stream(const json& d, const std::string& word) {
  if (!d.is_object() || d.size() == 0) throw ParseError("bit stream descriptor must be an object");
  if (d.contains("constant")) {
    const auto& v = d.at("constant");
    return BitStream::constant(v.is_boolean() ? v.get<bool>() : v.get<int>() != 0);
  }
  if (d.contains("periodic")) return BitStream::periodic(d.at("periodic").get<std::string>());
  if (d.contains("prefix")) {
    const json rest = d.value("then", json{{"constant", 0}});
    return BitStream::prefix(d.at("prefix").get<std::string>(), parse_stream(rest, word));
  }
  if (d.contains("unary")) {
    const auto& u = d.at("unary");
    return BitStream::unary_codes(u.value("a", 1u), u.value("b", 0u));
  }
  if (d.contains("from_word")) return bits_of_word(word);
  throw ParseError("unknown bit stream descriptor " + d.dump());
}

/// Validates a witness descriptor {"c_set", "skolem", "c_track"}; every field optional.
inline void check_witness(const json& w) {
  if (!w.is_object()) throw ParseError("witness must be an object");
  for (auto it = w.begin(); it != w.end(); ++it) {
    if (it.key() != "c_set" && it.key() != "skolem" && it.key() != "c_track")
      throw ParseError("unknown witness field '" + it.key() + "'");
    parse_stream(*it, "");
  }
}

/// Witness per word; fields missing from `w` fall back to the family default.
inline WitnessFn witness_from_json(const json& w, const std::string& family) {
  check_witness(w);
  return [w, family](const std::string& word) {
    Witness out = default_witness(family, word);
    if (w.contains("c_set")) out.c_set = parse_stream(w.at("c_set"), word);
    if (w.contains("skolem")) out.skolem = parse_stream(w.at("skolem"), word);
    if (w.contains("c_track")) out.c_track = parse_stream(w.at("c_track"), word);
    return out;
  };
}

// ---------------------------------------------------------------------------
// System documents and compiled artifacts.

struct SimulationDefaults {
  std::uint64_t fuel = kDefaultFuel;
  std::size_t min_recurrences = kDefaultMinRecurrences;
  std::string mode = "witness";
  std::size_t max_period = 3;
};

struct SystemDocument {
  PredicateProgram predicate;
  CheckerVariant variant = CheckerVariant::Unary;
  json witness = json::object();
  SimulationDefaults simulation;
};

namespace detail {

template <class F>
auto with_line(const std::string& text, const std::string& key, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError& e) {
    if (e.line()) throw;
    throw ParseError(e.what(), line_of_key(text, key));
  } catch (const json::exception& e) {
    throw ParseError(e.what(), line_of_key(text, key));
  } catch (const IllFormedMachine& e) {
    throw ParseError(e.what(), line_of_key(text, key));
  }
}

inline SimulationDefaults parse_simulation(const json& s) {
  SimulationDefaults d;
  for (auto it = s.begin(); it != s.end(); ++it) {
    const auto& k = it.key();
    if (k == "fuel") d.fuel = it->get<std::uint64_t>();
    else if (k == "min_recurrences") d.min_recurrences = it->get<std::size_t>();
    else if (k == "mode") d.mode = it->get<std::string>();
    else if (k == "max_period") d.max_period = it->get<std::size_t>();
    else throw ParseError("unknown simulation field '" + k + "'");
  }
  if (d.mode != "witness" && d.mode != "search") throw ParseError("unknown mode '" + d.mode + "'");
  if (d.max_period < 1) throw ParseError("max_period must be at least 1");
  return d;
}

inline ordered_json simulation_json(const SimulationDefaults& s) {
  return ordered_json{{"fuel", s.fuel}, {"min_recurrences", s.min_recurrences}, {"mode", s.mode},
                      {"max_period", s.max_period}};
}

}  // namespace detail

/// Reads {"predicate": name | program | {"library": path, "name": n}, "variant",
/// "witness", "simulation"}. `base_dir` resolves relative library paths.
inline SystemDocument parse_system_document(const std::string& text, const std::string& base_dir = ".") {
  const json j = parse_json_text(text);
  if (!j.is_object()) throw ParseError("system document must be an object", 1);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() != "predicate" && it.key() != "variant" && it.key() != "witness" && it.key() != "simulation")
      throw ParseError("unknown field '" + it.key() + "'", line_of_key(text, it.key()));
  }
  SystemDocument doc;
  if (!j.contains("predicate")) throw ParseError("missing field 'predicate'", 1);
  doc.predicate = detail::with_line(text, "predicate", [&] {
    const json& p = j.at("predicate");
    if (p.is_string()) return bundled_predicate(p.get<std::string>());
    if (p.contains("library")) {
      std::string path = p.at("library").get<std::string>();
      if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
      return load_predicate(parse_json_text(read_file(path)), p.at("name").get<std::string>());
    }
    return parse_predicate(p);
  });
  doc.variant = detail::with_line(text, "variant",
                                  [&] { return parse_variant(j.value("variant", std::string("unary"))); });
  if (j.contains("witness")) {
    detail::with_line(text, "witness", [&] {
      check_witness(j.at("witness"));
      return 0;
    });
    doc.witness = j.at("witness");
  }
  if (j.contains("simulation"))
    doc.simulation = detail::with_line(text, "simulation", [&] { return detail::parse_simulation(j.at("simulation")); });
  return doc;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline const char* main_glyph(MainSymbol m) {
  static const char* names[] = {"#", "|", "0", "1", "(0,0)", "(0,1)", "(1,0)", "(1,1)"};
  return names[m.index()];
}

/// A compiled system together with the defaults it was compiled with.
struct CompiledSystem {
  ReductionSystem system;
  json witness = json::object();
  SimulationDefaults simulation;

  WitnessFn witness_fn() const { return witness_from_json(witness, system.predicate.name); }
  ClassifyMode mode() const {
    if (simulation.mode == "search") return SearchPeriodicMode{simulation.max_period};
    return WitnessMode{witness_fn()};
  }
};

inline CompiledSystem compile_document(const SystemDocument& doc) {
  return {build_reduction_ca(doc.predicate, doc.variant), doc.witness, doc.simulation};
}

inline ordered_json artifact_json(const CompiledSystem& cs) {
  const ReductionSystem& sys = cs.system;
  const TMSpec& tm = sys.checker->tm;
  ordered_json a;
  a["format"] = kArtifactFormat;
  a["variant"] = to_string(sys.variant);
  a["predicate"] = predicate_to_json(sys.predicate);
  a["witness"] = ordered_json::parse(cs.witness.dump());
  a["simulation"] = detail::simulation_json(cs.simulation);
  ordered_json main = ordered_json::array();
  for (std::uint32_t i = 0; i < MainSymbol::kCount; ++i) main.push_back(main_glyph(MainSymbol::from_index(i)));
  a["alphabet"] = {{"size", sys.codec.alphabet_size()},
                   {"spread", kSpreadCell},
                   {"main", main},
                   {"helper", sys.codec.work_size},
                   {"tape_symbols", sys.codec.num_symbols},
                   {"head_marks", sys.codec.head_marks()},
                   {"index", "1 + (main*helper + work)*head_marks + head; head: 0 '>', 1 '<', 2+q state q"}};
  a["radius"] = sys.rule.radius();
  ordered_json states = ordered_json::array();
  for (StateId q = 0; q < tm.num_states(); ++q) states.push_back(tm.name(q));
  a["checker"] = {{"states", states},
                  {"q0", tm.name(sys.q0())},
                  {"dead", tm.name(sys.dead())},
                  {"spread_trigger", tm.name(sys.checker->spread_trigger)},
                  {"digest", hex64(tm.digest())}};
  return a;
}

inline std::string artifact_text(const CompiledSystem& cs) { return artifact_json(cs).dump(2) + "\n"; }

/// Rebuilds the system from an artifact and checks it against the recorded digest.
inline CompiledSystem load_artifact(const std::string& text) {
  const json a = parse_json_text(text);
  if (!a.is_object() || a.value("format", std::string()) != kArtifactFormat)
    throw ParseError("not a compiled system artifact", line_of_key(text, "format"));
  SystemDocument doc;
  doc.predicate = detail::with_line(text, "predicate", [&] { return parse_predicate(a.at("predicate")); });
  doc.variant = detail::with_line(text, "variant", [&] { return parse_variant(a.at("variant").get<std::string>()); });
  doc.witness = a.value("witness", json::object());
  detail::with_line(text, "witness", [&] {
    check_witness(doc.witness);
    return 0;
  });
  doc.simulation = detail::with_line(text, "simulation",
                                     [&] { return detail::parse_simulation(a.value("simulation", json::object())); });
  CompiledSystem cs = compile_document(doc);
  const std::string digest = a.at("checker").at("digest").get<std::string>();
  if (digest != hex64(cs.system.checker->tm.digest()))
    throw ParseError("checker digest mismatch: artifact is stale or edited", line_of_key(text, "digest"));
  return cs;
}

// ---------------------------------------------------------------------------
// Configuration literals:
//   {"lo": 0, "window": [cell, ...], "leftTail": tail, "rightTail": tail}
//   cell: "SPREAD" | {"main": "#" | "|" | {"a": 0|1} | {"b": 0|1, "c": 0|1},
//                     "head": ">" | "<" | {"q": state name}, "work": name}
//   tail: {"constant": cell} | {"periodic": [cell, ...]} | {"pairs": {"b": stream, "c": stream}}
// Work names are "blank" or markers joined by '+': visited P I L K X Y Z scratch:N.

namespace detail {

inline const std::vector<std::pair<std::string, std::uint32_t>>& work_markers() {
  using WL = WorkLayout;
  static const std::vector<std::pair<std::string, std::uint32_t>> m{
      {"visited", WL::kVisited}, {"P", WL::kP}, {"I", WL::kI}, {"L", WL::kL},
      {"K", WL::kK},             {"X", WL::kX}, {"Y", WL::kY}, {"Z", WL::kZ}};
  return m;
}

inline std::uint32_t parse_work(const std::string& name, const ReductionSystem& sys) {
  if (name.empty() || name == "blank") return 0;
  std::uint32_t w = 0;
  std::stringstream ss(name);
  std::string tok;
  while (std::getline(ss, tok, '+')) {
    if (tok.rfind("scratch:", 0) == 0) {
      const std::uint32_t v = std::uint32_t(std::stoul(tok.substr(8)));
      if (v >= sys.checker->layout.scratch_size) throw ParseError("scratch symbol " + tok.substr(8) + " out of range");
      w = WorkLayout::with_scratch(w, v);
      continue;
    }
    bool found = false;
    for (const auto& [n, bit] : work_markers())
      if (n == tok) w |= bit, found = true;
    if (!found) throw ParseError("unknown work marker '" + tok + "'");
  }
  return w;
}

inline std::string work_name(std::uint32_t w) {
  std::string out;
  for (const auto& [n, bit] : work_markers())
    if (w & bit) out += (out.empty() ? "" : "+") + n;
  if (WorkLayout::scratch_of(w))
    out += (out.empty() ? "" : "+") + std::string("scratch:") + std::to_string(WorkLayout::scratch_of(w));
  return out.empty() ? "blank" : out;
}

inline int bit_field(const json& j, const char* key) {
  const int v = j.at(key).get<int>();
  if (v != 0 && v != 1) throw ParseError(std::string("field '") + key + "' must be 0 or 1");
  return v;
}

}  // namespace detail

inline Cell cell_from_json(const json& d, const ReductionSystem& sys) {
  if (d.is_string() && d.get<std::string>() == "SPREAD") return kSpreadCell;
  if (!d.is_object()) throw ParseError("cell must be \"SPREAD\" or an object: " + d.dump());
  for (auto it = d.begin(); it != d.end(); ++it)
    if (it.key() != "main" && it.key() != "head" && it.key() != "work")
      throw ParseError("unknown cell field '" + it.key() + "'");
  const json& m = d.at("main");
  MainSymbol main;
  if (m == "#") main = MainSymbol::hash();
  else if (m == "|") main = MainSymbol::sep();
  else if (m.is_object() && m.contains("a") && m.size() == 1) main = MainSymbol::input(detail::bit_field(m, "a"));
  else if (m.is_object() && m.contains("b") && m.contains("c") && m.size() == 2)
    main = MainSymbol::pair(detail::bit_field(m, "b"), detail::bit_field(m, "c"));
  else throw ParseError("bad main symbol " + m.dump());
  const json h = d.value("head", json("<"));
  HeadMark head;
  if (h == ">") head = HeadMark::right();
  else if (h == "<") head = HeadMark::left();
  else if (h.is_object() && h.contains("q")) {
    const auto q = sys.checker->tm.find(h.at("q").get<std::string>());
    if (!q) throw ParseError("unknown checker state '" + h.at("q").get<std::string>() + "'");
    head = HeadMark::head(*q);
  } else throw ParseError("bad head mark " + h.dump());
  const std::uint32_t work = detail::parse_work(d.value("work", std::string("blank")), sys);
  return sys.codec.encode(TrackedCell::of(main, head, work));
}

inline ordered_json cell_json(Cell c, const ReductionSystem& sys) {
  if (c == kSpreadCell) return "SPREAD";
  const TrackedCell t = sys.codec.decode(c);
  ordered_json out;
  if (t.main.is_hash()) out["main"] = "#";
  else if (t.main.is_sep()) out["main"] = "|";
  else if (t.main.is_input()) out["main"] = {{"a", int(t.main.a)}};
  else out["main"] = {{"b", int(t.main.b)}, {"c", int(t.main.c)}};
  if (t.head.is_head()) out["head"] = {{"q", sys.checker->tm.name(t.head.state)}};
  else out["head"] = t.head == HeadMark::right() ? ">" : "<";
  out["work"] = detail::work_name(t.work);
  return out;
}

inline TailGenerator tail_from_json(const json& d, const ReductionSystem& sys) {
  if (!d.is_object() || d.size() != 1) throw ParseError("tail must be an object with one field");
  if (d.contains("constant")) return TailGenerator::constant(cell_from_json(d.at("constant"), sys));
  if (d.contains("periodic")) {
    std::vector<Cell> word;
    for (const auto& c : d.at("periodic")) word.push_back(cell_from_json(c, sys));
    if (word.empty()) throw ParseError("periodic tail needs at least one cell");
    return TailGenerator::periodic(std::move(word));
  }
  if (d.contains("pairs")) {
    const json& p = d.at("pairs");
    const BitStream b = parse_stream(p.value("b", json{{"constant", 0}}), "");
    const BitStream c = parse_stream(p.value("c", json{{"constant", 0}}), "");
    const CellCodec codec = sys.codec;
    return TailGenerator::program([codec, b, c](std::uint64_t j, Fuel& fuel) {
      fuel.charge();
      return pair_cell(codec, b(j), c(j));
    });
  }
  throw ParseError("unknown tail descriptor " + d.dump());
}

inline Configuration parse_configuration(const std::string& text, const ReductionSystem& sys) {
  const json j = parse_json_text(text);
  if (!j.is_object()) throw ParseError("configuration must be an object", 1);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "lo" && it.key() != "window" && it.key() != "leftTail" && it.key() != "rightTail")
      throw ParseError("unknown configuration field '" + it.key() + "'", line_of_key(text, it.key()));
  const Position lo = detail::with_line(text, "lo", [&] { return j.value("lo", Position(0)); });
  std::vector<Cell> cells = detail::with_line(text, "window", [&] {
    std::vector<Cell> out;
    for (const auto& c : j.at("window")) out.push_back(cell_from_json(c, sys));
    if (out.empty()) throw ParseError("window must not be empty");
    return out;
  });
  TailGenerator left = detail::with_line(text, "leftTail", [&] { return tail_from_json(j.at("leftTail"), sys); });
  TailGenerator right = detail::with_line(text, "rightTail", [&] { return tail_from_json(j.at("rightTail"), sys); });
  return Configuration(lo, std::move(cells), std::move(left), std::move(right));
}

/// Literal for the current window of `config`; program tails have no literal form.
inline ordered_json configuration_json(const Configuration& config, const ReductionSystem& sys) {
  auto tail = [&](const TailGenerator& t) -> ordered_json {
    if (auto* c = std::get_if<TailGenerator::Constant>(&t.kind())) return {{"constant", cell_json(c->cell, sys)}};
    if (auto* p = std::get_if<TailGenerator::Periodic>(&t.kind())) {
      ordered_json cells = ordered_json::array();
      for (Cell c : p->word) cells.push_back(cell_json(c, sys));
      return {{"periodic", cells}};
    }
    throw Error("program tails have no literal form");
  };
  ordered_json out;
  out["lo"] = config.lo();
  ordered_json window = ordered_json::array();
  for (Position p = config.lo(); p <= config.hi(); ++p) window.push_back(cell_json(*config.peek(p), sys));
  out["window"] = window;
  out["leftTail"] = tail(config.current_left_tail());
  out["rightTail"] = tail(config.current_right_tail());
  return out;
}

// ---------------------------------------------------------------------------
// Report records.

inline ordered_json report_records(const std::vector<SampleRow>& rows) {
  ordered_json out = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json rec;
    rec["word"] = r.word;
    rec["verdict"] = to_string(r.classification.verdict);
    rec["count"] = r.classification.count;
    if (r.classification.at) rec["at"] = *r.classification.at;
    rec["firstEvents"] = r.classification.signaling_times.size() > 4
                             ? std::vector<std::uint64_t>(r.classification.signaling_times.begin(),
                                                          r.classification.signaling_times.begin() + 4)
                             : r.classification.signaling_times;
    rec["oracle"] = r.oracle ? ordered_json(to_string(*r.oracle)) : ordered_json(nullptr);
    rec["agree"] = r.agree ? ordered_json(*r.agree) : ordered_json(nullptr);
    rec["witness"] = r.classification.witness;
    out.push_back(rec);
  }
  return out;
}

}  // namespace sigca
