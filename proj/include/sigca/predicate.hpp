#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "sigca/core_model.hpp"
#include "sigca/turing.hpp"

namespace sigca {

/// What a predicate program sees of the cell under its head. The b-, c- and
/// input tracks are not writable; b is reachable only through oracle queries.
enum class Region : std::uint8_t { Hash, Input0, Input1, Sep, Pair };
inline constexpr std::uint32_t kRegionCount = 5;

inline Region region_of(MainSymbol m) {
  switch (m.kind) {
    case MainSymbol::Kind::Hash: return Region::Hash;
    case MainSymbol::Kind::Sep: return Region::Sep;
    case MainSymbol::Kind::Input: return m.a ? Region::Input1 : Region::Input0;
    case MainSymbol::Kind::Pair: return Region::Pair;
  }
  return Region::Hash;
}

struct PredicateView {
  Region region = Region::Hash;
  bool m_mark = false;  // this pair cell has index m
  bool l_mark = false;  // this pair cell has index l
  std::uint32_t scratch = 0;
};

struct Target {
  enum class Kind : std::uint8_t { State, Accept, Reject };
  Kind kind = Kind::Reject;
  StateId state = 0;

  static Target accept() { return {Kind::Accept, 0}; }
  static Target reject() { return {Kind::Reject, 0}; }
  static Target to(StateId q) { return {Kind::State, q}; }
  friend bool operator==(const Target&, const Target&) = default;
};

struct PredicateAction {
  std::optional<std::uint32_t> write;  // new scratch value
  Move move = Move::Stay;
  Target target;
};

/// Oracle instruction: answer chi_C(j) for the pair index j under the head
/// (0 on non-pair cells) and continue without moving.
struct QueryTargets {
  Target one;
  Target zero;
};

/// Recursive matrix R(C, m, l, w) as a small Turing machine over the
/// predicate view, with oracle access to C. Halts in ACCEPT or REJECT.
class PredicateProgram {
 public:
  struct Rule {
    StateId from = 0;
    std::optional<std::uint8_t> region_mask;  // bit per Region
    std::optional<bool> m_mark;
    std::optional<bool> l_mark;
    std::optional<std::uint32_t> scratch;
    PredicateAction action;

    bool matches(const PredicateView& v) const {
      if (region_mask && !((*region_mask >> unsigned(v.region)) & 1u)) return false;
      if (m_mark && *m_mark != v.m_mark) return false;
      if (l_mark && *l_mark != v.l_mark) return false;
      if (scratch && *scratch != v.scratch) return false;
      return true;
    }
  };

  std::string name;
  std::uint32_t scratch_size = 1;
  std::vector<std::string> states;
  StateId start = 0;
  std::vector<Rule> rules;                           // first match wins
  std::map<StateId, QueryTargets> queries;           // query states have no rules

  std::uint32_t view_count() const { return kRegionCount * 4 * scratch_size; }
  std::uint32_t view_index(const PredicateView& v) const {
    return ((std::uint32_t(v.region) * 2 + v.m_mark) * 2 + v.l_mark) * scratch_size + v.scratch;
  }
  PredicateView view_from_index(std::uint32_t i) const {
    PredicateView v;
    v.scratch = i % scratch_size;
    i /= scratch_size;
    v.l_mark = i % 2;
    i /= 2;
    v.m_mark = i % 2;
    v.region = Region(i / 2);
    return v;
  }

  bool is_query(StateId q) const { return queries.count(q) != 0; }

  /// Action for (state, view); only valid for non-query states of a validated program.
  const PredicateAction& action(StateId q, const PredicateView& v) const {
    return table_[std::size_t(q) * view_count() + view_index(v)];
  }

  std::optional<StateId> find(const std::string& s) const {
    for (StateId q = 0; q < states.size(); ++q)
      if (states[q] == s) return q;
    return std::nullopt;
  }

  /// Checks region discipline and totality, then builds the dense action table.
  void finalize() {
    if (scratch_size == 0) throw IllFormedMachine(name + ": scratch alphabet must be nonempty");
    if (scratch_size > 16) throw IllFormedMachine(name + ": scratch alphabet is limited to 16 symbols");
    if (states.empty() || start >= states.size()) throw IllFormedMachine(name + ": bad start state");
    auto check_target = [&](const Target& t) {
      if (t.kind == Target::Kind::State && t.state >= states.size())
        throw IllFormedMachine(name + ": transition to an unknown state");
    };
    for (const auto& r : rules) {
      if (r.from >= states.size()) throw IllFormedMachine(name + ": rule for an unknown state");
      if (is_query(r.from))
        throw IllFormedMachine(name + ": query state '" + states[r.from] + "' has ordinary rules");
      if (r.action.write && *r.action.write >= scratch_size)
        throw IllFormedMachine(name + ": write outside the scratch alphabet in state '" +
                               states[r.from] + "'");
      check_target(r.action.target);
    }
    for (const auto& [q, t] : queries) {
      check_target(t.one);
      check_target(t.zero);
    }
    table_.assign(states.size() * std::size_t(view_count()), PredicateAction{});
    for (StateId q = 0; q < states.size(); ++q) {
      if (is_query(q)) continue;
      for (std::uint32_t vi = 0; vi < view_count(); ++vi) {
        const PredicateView v = view_from_index(vi);
        const Rule* hit = nullptr;
        for (const auto& r : rules) {
          if (r.from == q && r.matches(v)) {
            hit = &r;
            break;
          }
        }
        if (!hit)
          throw IllFormedMachine(name + ": state '" + states[q] + "' has no rule for some cell view");
        table_[std::size_t(q) * view_count() + vi] = hit->action;
      }
    }
  }

 private:
  std::vector<PredicateAction> table_;
};

// ---------------------------------------------------------------------------
// Structured-text form.

namespace detail {

inline const std::map<std::string, std::uint8_t>& region_names() {
  static const std::map<std::string, std::uint8_t> names = {
      {"hash", 1u << unsigned(Region::Hash)},
      {"a0", 1u << unsigned(Region::Input0)},
      {"a1", 1u << unsigned(Region::Input1)},
      {"input", (1u << unsigned(Region::Input0)) | (1u << unsigned(Region::Input1))},
      {"sep", 1u << unsigned(Region::Sep)},
      {"pair", 1u << unsigned(Region::Pair)},
  };
  return names;
}

inline Move parse_move(const std::string& s, const std::string& ctx) {
  if (s == "L") return Move::Left;
  if (s == "R") return Move::Right;
  if (s == "S") return Move::Stay;
  throw ParseError(ctx + ": move must be L, R or S, got '" + s + "'");
}

inline const char* move_name(Move m) {
  return m == Move::Left ? "L" : m == Move::Right ? "R" : "S";
}

}  // namespace detail

/// Parses {"name", "scratch", "start", "states", "rules", "queries"}.
inline PredicateProgram parse_predicate(const nlohmann::json& j) {
  PredicateProgram p;
  try {
    p.name = j.at("name").get<std::string>();
    p.scratch_size = j.value("scratch", 1u);
    p.states = j.at("states").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("predicate program: ") + e.what());
  }
  const std::string ctx = "predicate " + p.name;
  auto state = [&](const std::string& s) {
    auto q = p.find(s);
    if (!q) throw ParseError(ctx + ": unknown state '" + s + "'");
    return *q;
  };
  auto target = [&](const std::string& s) {
    if (s == "ACCEPT") return Target::accept();
    if (s == "REJECT") return Target::reject();
    return Target::to(state(s));
  };
  p.start = state(j.at("start").get<std::string>());
  for (const auto& q : j.value("queries", nlohmann::json::array())) {
    p.queries[state(q.at("query").get<std::string>())] =
        QueryTargets{target(q.at("one").get<std::string>()), target(q.at("zero").get<std::string>())};
  }
  for (const auto& r : j.at("rules")) {
    PredicateProgram::Rule rule;
    rule.from = state(r.at("in").get<std::string>());
    if (r.contains("if")) {
      const auto& cond = r.at("if");
      for (auto it = cond.begin(); it != cond.end(); ++it) {
        if (it.key() == "region") {
          std::uint8_t mask = 0;
          auto add = [&](const std::string& name) {
            auto f = detail::region_names().find(name);
            if (f == detail::region_names().end())
              throw ParseError(ctx + ": unknown region '" + name + "'");
            mask |= f->second;
          };
          if (it->is_array())
            for (const auto& n : *it) add(n.get<std::string>());
          else
            add(it->get<std::string>());
          rule.region_mask = mask;
        } else if (it.key() == "m") {
          rule.m_mark = it->get<bool>();
        } else if (it.key() == "l") {
          rule.l_mark = it->get<bool>();
        } else if (it.key() == "s") {
          rule.scratch = it->get<std::uint32_t>();
        } else {
          throw ParseError(ctx + ": unknown condition '" + it.key() + "'");
        }
      }
    }
    if (r.contains("write")) rule.action.write = r.at("write").get<std::uint32_t>();
    rule.action.move = detail::parse_move(r.value("move", std::string("S")), ctx);
    rule.action.target = target(r.at("to").get<std::string>());
    p.rules.push_back(rule);
  }
  p.finalize();
  return p;
}

inline nlohmann::ordered_json predicate_to_json(const PredicateProgram& p) {
  using nlohmann::ordered_json;
  auto target = [&](const Target& t) -> std::string {
    if (t.kind == Target::Kind::Accept) return "ACCEPT";
    if (t.kind == Target::Kind::Reject) return "REJECT";
    return p.states[t.state];
  };
  ordered_json j;
  j["name"] = p.name;
  j["scratch"] = p.scratch_size;
  j["start"] = p.states[p.start];
  j["states"] = p.states;
  ordered_json queries = ordered_json::array();
  for (const auto& [q, t] : p.queries)
    queries.push_back({{"query", p.states[q]}, {"one", target(t.one)}, {"zero", target(t.zero)}});
  j["queries"] = queries;
  ordered_json rules = ordered_json::array();
  for (const auto& r : p.rules) {
    ordered_json o;
    o["in"] = p.states[r.from];
    ordered_json cond = ordered_json::object();
    if (r.region_mask) {
      ordered_json regions = ordered_json::array();
      for (const char* n : {"hash", "a0", "a1", "sep", "pair"}) {
        if (*r.region_mask & detail::region_names().at(n)) regions.push_back(n);
      }
      cond["region"] = regions;
    }
    if (r.m_mark) cond["m"] = *r.m_mark;
    if (r.l_mark) cond["l"] = *r.l_mark;
    if (r.scratch) cond["s"] = *r.scratch;
    if (!cond.empty()) o["if"] = cond;
    if (r.action.write) o["write"] = *r.action.write;
    o["move"] = detail::move_name(r.action.move);
    o["to"] = target(r.action.target);
    rules.push_back(o);
  }
  j["rules"] = rules;
  return j;
}

// ---------------------------------------------------------------------------
// Direct evaluation, independent of any cellular automaton.

enum class PredicateResult { Accept, Reject, Timeout };

inline const char* to_string(PredicateResult r) {
  switch (r) {
    case PredicateResult::Accept: return "Accept";
    case PredicateResult::Reject: return "Reject";
    case PredicateResult::Timeout: return "Timeout";
  }
  return "?";
}

using BitOracle = std::function<bool(std::uint64_t)>;

/// Runs R on the standalone layout  # .. # w | pairs..., with the m and l
/// marks on pair cells m and l and oracle queries answered from `c_oracle`.
/// Each transition, including a query, costs one unit of fuel.
inline PredicateResult eval_predicate_direct(const PredicateProgram& pred, const BitOracle& c_oracle,
                                             std::uint64_t m, std::uint64_t l,
                                             const std::vector<int>& w, std::uint64_t fuel) {
  const Position n = Position(w.size());
  std::unordered_map<Position, std::uint32_t> scratch;
  auto view_at = [&](Position p) {
    PredicateView v;
    if (p < 0) {
      v.region = Region::Hash;
    } else if (p < n) {
      v.region = w[std::size_t(p)] ? Region::Input1 : Region::Input0;
    } else if (p == n) {
      v.region = Region::Sep;
    } else {
      v.region = Region::Pair;
      const auto j = std::uint64_t(p - n - 1);
      v.m_mark = j == m;
      v.l_mark = j == l;
    }
    auto it = scratch.find(p);
    v.scratch = it == scratch.end() ? 0 : it->second;
    return v;
  };
  Position head = 0;
  StateId q = pred.start;
  for (std::uint64_t step = 0; step < fuel; ++step) {
    Target next;
    if (pred.is_query(q)) {
      const auto& qt = pred.queries.at(q);
      bool bit = head > n && c_oracle(std::uint64_t(head - n - 1));
      next = bit ? qt.one : qt.zero;
    } else {
      const PredicateAction& a = pred.action(q, view_at(head));
      if (a.write) scratch[head] = *a.write;
      head += static_cast<int>(a.move);
      next = a.target;
    }
    if (next.kind == Target::Kind::Accept) return PredicateResult::Accept;
    if (next.kind == Target::Kind::Reject) return PredicateResult::Reject;
    q = next.state;
  }
  return PredicateResult::Timeout;
}

}  // namespace sigca
