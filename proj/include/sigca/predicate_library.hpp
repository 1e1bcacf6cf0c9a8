#pragma once

#include <string>
#include <string_view>

#include "json.hpp"
#include "sigca/predicate.hpp"
#include "sigca/turing.hpp"

namespace sigca {

/// Bundled test predicates. Kept byte-identical to data/predicates.json.
inline constexpr std::string_view kBundledPredicates = R"json({
  "predicates": [
    {
      "name": "ACCEPT_ALL",
      "scratch": 1,
      "start": "s",
      "states": ["s"],
      "rules": [
        {"in": "s", "to": "ACCEPT"}
      ]
    },
    {
      "name": "REJECT_ALL",
      "scratch": 1,
      "start": "s",
      "states": ["s"],
      "rules": [
        {"in": "s", "to": "REJECT"}
      ]
    },
    {
      "name": "PARITY",
      "scratch": 1,
      "start": "even",
      "states": ["even", "odd", "chk"],
      "rules": [
        {"in": "even", "if": {"region": "a0"}, "move": "R", "to": "even"},
        {"in": "even", "if": {"region": "a1"}, "move": "R", "to": "odd"},
        {"in": "even", "if": {"region": "sep"}, "move": "R", "to": "chk"},
        {"in": "even", "to": "REJECT"},
        {"in": "odd", "if": {"region": "a0"}, "move": "R", "to": "odd"},
        {"in": "odd", "if": {"region": "a1"}, "move": "R", "to": "even"},
        {"in": "odd", "to": "REJECT"},
        {"in": "chk", "if": {"region": "pair", "m": true}, "to": "ACCEPT"},
        {"in": "chk", "if": {"region": "pair", "l": true}, "to": "REJECT"},
        {"in": "chk", "move": "R", "to": "chk"}
      ]
    },
    {
      "name": "MEMBER",
      "scratch": 3,
      "start": "chk",
      "states": ["chk", "go", "x0", "y0", "y0set", "test", "yadv", "tox", "xadv", "toy",
                 "readx", "go0", "go1", "ask0", "ask1"],
      "queries": [
        {"query": "ask0", "one": "REJECT", "zero": "ACCEPT"},
        {"query": "ask1", "one": "ACCEPT", "zero": "REJECT"}
      ],
      "rules": [
        {"in": "chk", "if": {"region": "pair", "m": true}, "move": "L", "to": "go"},
        {"in": "chk", "if": {"region": "pair", "l": true}, "to": "REJECT"},
        {"in": "chk", "move": "R", "to": "chk"},
        {"in": "go", "if": {"region": "hash"}, "move": "R", "to": "x0"},
        {"in": "go", "move": "L", "to": "go"},
        {"in": "x0", "if": {"region": "sep"}, "to": "ACCEPT"},
        {"in": "x0", "write": 1, "move": "R", "to": "y0"},
        {"in": "y0", "if": {"region": "sep"}, "move": "R", "to": "y0set"},
        {"in": "y0", "move": "R", "to": "y0"},
        {"in": "y0set", "write": 2, "to": "test"},
        {"in": "test", "if": {"m": true}, "move": "L", "to": "readx"},
        {"in": "test", "write": 0, "move": "R", "to": "yadv"},
        {"in": "yadv", "write": 2, "move": "L", "to": "tox"},
        {"in": "tox", "if": {"region": "input", "s": 1}, "write": 0, "move": "R", "to": "xadv"},
        {"in": "tox", "move": "L", "to": "tox"},
        {"in": "xadv", "if": {"region": "sep"}, "to": "ACCEPT"},
        {"in": "xadv", "write": 1, "move": "R", "to": "toy"},
        {"in": "toy", "if": {"region": "pair", "s": 2}, "to": "test"},
        {"in": "toy", "move": "R", "to": "toy"},
        {"in": "readx", "if": {"region": "a0", "s": 1}, "move": "R", "to": "go0"},
        {"in": "readx", "if": {"region": "a1", "s": 1}, "move": "R", "to": "go1"},
        {"in": "readx", "move": "L", "to": "readx"},
        {"in": "go0", "if": {"m": true}, "to": "ask0"},
        {"in": "go0", "move": "R", "to": "go0"},
        {"in": "go1", "if": {"m": true}, "to": "ask1"},
        {"in": "go1", "move": "R", "to": "go1"}
      ]
    },
    {
      "name": "HALT-SEARCH",
      "scratch": 3,
      "start": "chk",
      "states": ["chk", "back", "tok", "tokset", "home", "g0", "g1",
                 "tt_g0", "tt_g1", "tt_h", "ts_g0", "ts_g1", "ts_h",
                 "tb_g0", "tb_g1", "tb_h", "cmp"],
      "rules": [
        {"in": "chk", "if": {"region": "pair", "m": true}, "move": "L", "to": "back"},
        {"in": "chk", "if": {"region": "pair", "l": true}, "to": "REJECT"},
        {"in": "chk", "move": "R", "to": "chk"},
        {"in": "back", "if": {"region": "hash"}, "move": "R", "to": "tok"},
        {"in": "back", "move": "L", "to": "back"},
        {"in": "tok", "if": {"region": "sep"}, "move": "R", "to": "tokset"},
        {"in": "tok", "move": "R", "to": "tok"},
        {"in": "tokset", "write": 2, "move": "L", "to": "home"},
        {"in": "home", "if": {"region": "hash"}, "move": "R", "to": "g0"},
        {"in": "home", "move": "L", "to": "home"},
        {"in": "g0", "if": {"region": "a0"}, "write": 1, "move": "R", "to": "tt_g0"},
        {"in": "g0", "if": {"region": "a1"}, "write": 1, "move": "R", "to": "tt_g1"},
        {"in": "g0", "to": "REJECT"},
        {"in": "g1", "if": {"region": "a0"}, "write": 1, "move": "R", "to": "tt_g0"},
        {"in": "g1", "if": {"region": "a1"}, "write": 1, "move": "R", "to": "tt_h"},
        {"in": "g1", "to": "REJECT"},
        {"in": "tt_g0", "if": {"region": "pair", "s": 2}, "write": 0, "move": "R", "to": "ts_g0"},
        {"in": "tt_g0", "move": "R", "to": "tt_g0"},
        {"in": "tt_g1", "if": {"region": "pair", "s": 2}, "write": 0, "move": "R", "to": "ts_g1"},
        {"in": "tt_g1", "move": "R", "to": "tt_g1"},
        {"in": "tt_h", "if": {"region": "pair", "s": 2}, "write": 0, "move": "R", "to": "ts_h"},
        {"in": "tt_h", "move": "R", "to": "tt_h"},
        {"in": "ts_g0", "write": 2, "move": "L", "to": "tb_g0"},
        {"in": "ts_g1", "write": 2, "move": "L", "to": "tb_g1"},
        {"in": "ts_h", "write": 2, "move": "L", "to": "tb_h"},
        {"in": "tb_g0", "if": {"region": "input", "s": 1}, "write": 0, "move": "R", "to": "g0"},
        {"in": "tb_g0", "move": "L", "to": "tb_g0"},
        {"in": "tb_g1", "if": {"region": "input", "s": 1}, "write": 0, "move": "R", "to": "g1"},
        {"in": "tb_g1", "move": "L", "to": "tb_g1"},
        {"in": "tb_h", "if": {"region": "input", "s": 1}, "write": 0, "move": "R", "to": "cmp"},
        {"in": "tb_h", "move": "L", "to": "tb_h"},
        {"in": "cmp", "if": {"region": "pair", "s": 2}, "to": "ACCEPT"},
        {"in": "cmp", "if": {"region": "pair", "l": true}, "to": "REJECT"},
        {"in": "cmp", "move": "R", "to": "cmp"}
      ]
    }
  ]
}
)json";

/// Loads predicate `name` from a library document {"predicates": [...]}.
inline PredicateProgram load_predicate(const nlohmann::json& library, const std::string& name) {
  for (const auto& p : library.at("predicates")) {
    if (p.at("name").get<std::string>() == name) return parse_predicate(p);
  }
  throw ParseError("no predicate named '" + name + "' in the library");
}

inline const nlohmann::json& bundled_library() {
  static const nlohmann::json lib = nlohmann::json::parse(kBundledPredicates);
  return lib;
}

inline PredicateProgram bundled_predicate(const std::string& name) {
  return load_predicate(bundled_library(), name);
}

/// The machine HALT-SEARCH runs on w: scans right, halts on the first "11",
/// loops forever once it reaches the blank after w. Symbols: 0 blank, 1 = '0', 2 = '1'.
inline TMSpec halt_search_guest() {
  TMSpec tm(3, 0);
  const StateId g0 = tm.add_state("g0");
  const StateId g1 = tm.add_state("g1");
  const StateId loop = tm.add_state("loop");
  const StateId halt = tm.add_state("halt", StateRole::Accept);
  const StateId dead = tm.add_state("dead", StateRole::Reject);
  tm.q0 = g0;
  tm.dead = dead;
  tm.set(g0, 1, {g0, kKeepSymbol, Move::Right});
  tm.set(g0, 2, {g1, kKeepSymbol, Move::Right});
  tm.set(g0, 0, {loop, kKeepSymbol, Move::Stay});
  tm.set(g1, 1, {g0, kKeepSymbol, Move::Right});
  tm.set(g1, 2, {halt, kKeepSymbol, Move::Right});
  tm.set(g1, 0, {loop, kKeepSymbol, Move::Stay});
  for (Symbol s = 0; s < 3; ++s) tm.set(loop, s, {loop, kKeepSymbol, Move::Stay});
  return tm;
}

}  // namespace sigca
