#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sigca/core_model.hpp"

namespace sigca {

enum class Move : std::int8_t { Left = -1, Stay = 0, Right = 1 };

inline constexpr std::int32_t kKeepSymbol = -1;

struct Transition {
  StateId next = 0;
  std::int32_t write = kKeepSymbol;  // kKeepSymbol leaves the read symbol in place
  Move move = Move::Stay;

  Symbol written(Symbol read) const { return write == kKeepSymbol ? read : Symbol(write); }
  friend bool operator==(const Transition&, const Transition&) = default;
};

enum class StateRole : std::uint8_t { Normal, Accept, Reject };

/// Deterministic single-tape Turing machine with a designated signaling state
/// `q0` and a halt-reject state `dead`. Halting states have no transitions.
class TMSpec {
 public:
  TMSpec() = default;
  TMSpec(std::uint32_t num_symbols, Symbol blank) : num_symbols_(num_symbols), blank_(blank) {}

  StateId add_state(std::string name, StateRole role = StateRole::Normal) {
    names_.push_back(std::move(name));
    roles_.push_back(role);
    table_.resize(names_.size() * num_symbols_);
    defined_.resize(names_.size() * num_symbols_, false);
    return StateId(names_.size() - 1);
  }

  void set(StateId q, Symbol s, Transition t) {
    const auto k = key(q, s);
    table_[k] = t;
    defined_[k] = true;
  }
  void clear(StateId q, Symbol s) { defined_[key(q, s)] = false; }

  const Transition* lookup(StateId q, Symbol s) const {
    const auto k = key(q, s);
    return defined_[k] ? &table_[k] : nullptr;
  }

  std::uint32_t num_symbols() const { return num_symbols_; }
  std::uint32_t num_states() const { return std::uint32_t(names_.size()); }
  Symbol blank() const { return blank_; }
  const std::string& name(StateId q) const { return names_[q]; }
  StateRole role(StateId q) const { return roles_[q]; }
  bool halting(StateId q) const { return roles_[q] != StateRole::Normal; }

  StateId q0 = 0;
  StateId dead = 0;

  std::optional<StateId> find(const std::string& name) const {
    for (StateId q = 0; q < names_.size(); ++q)
      if (names_[q] == name) return q;
    return std::nullopt;
  }

  /// Checks the structural invariants: q0 has one symbol-independent exit,
  /// halting states have no transitions, writes stay in the alphabet.
  void validate() const {
    if (q0 >= num_states() || dead >= num_states())
      throw IllFormedMachine("q0 or dead is not a state of the machine");
    if (roles_[dead] != StateRole::Reject) throw IllFormedMachine("dead must be a reject state");
    for (StateId q = 0; q < num_states(); ++q) {
      for (Symbol s = 0; s < num_symbols_; ++s) {
        const Transition* t = lookup(q, s);
        if (halting(q) && t) throw IllFormedMachine("halting state '" + name(q) + "' has a transition");
        if (!t) continue;
        if (t->next >= num_states() || (t->write != kKeepSymbol && Symbol(t->write) >= num_symbols_))
          throw IllFormedMachine("transition of '" + name(q) + "' leaves the machine");
      }
    }
    const Transition* exit = lookup(q0, 0);
    if (!exit) throw IllFormedMachine("q0 has no exit transition");
    for (Symbol s = 1; s < num_symbols_; ++s) {
      const Transition* t = lookup(q0, s);
      if (!t || !(*t == *exit)) throw IllFormedMachine("q0 must have exactly one exit transition");
    }
  }

  /// FNV-1a digest over the full transition table.
  std::uint64_t digest() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    mix(num_symbols_);
    mix(num_states());
    mix(q0);
    mix(dead);
    for (std::size_t k = 0; k < table_.size(); ++k) {
      if (!defined_[k]) {
        mix(~std::uint64_t(0));
        continue;
      }
      mix(table_[k].next);
      mix(std::uint64_t(std::int64_t(table_[k].write)));
      mix(std::uint64_t(std::int64_t(table_[k].move)));
    }
    for (auto r : roles_) mix(std::uint64_t(r));
    return h;
  }

 private:
  std::size_t key(StateId q, Symbol s) const { return std::size_t(q) * num_symbols_ + s; }

  std::uint32_t num_symbols_ = 0;
  Symbol blank_ = 0;
  std::vector<std::string> names_;
  std::vector<StateRole> roles_;
  std::vector<Transition> table_;
  std::vector<bool> defined_;
};

/// Sparse tape: explicit writes over a background function.
class Tape {
 public:
  using Background = std::function<Symbol(Position)>;

  Tape() : background_(std::make_shared<const Background>([](Position) { return Symbol(0); })) {}
  explicit Tape(Background bg) : background_(std::make_shared<const Background>(std::move(bg))) {}

  Symbol get(Position p) const {
    auto it = writes_.find(p);
    return it == writes_.end() ? (*background_)(p) : it->second;
  }
  void put(Position p, Symbol s) { writes_[p] = s; }
  const std::unordered_map<Position, Symbol>& writes() const { return writes_; }

 private:
  std::shared_ptr<const Background> background_;
  std::unordered_map<Position, Symbol> writes_;
};

struct TmConfig {
  StateId state = 0;
  Position head = 0;
  Tape tape;
};

/// One transition. Halting states are fixed points.
inline void tm_step(const TMSpec& spec, TmConfig& cfg) {
  if (spec.halting(cfg.state)) return;
  const Symbol read = cfg.tape.get(cfg.head);
  const Transition* t = spec.lookup(cfg.state, read);
  if (!t) {
    throw IllFormedMachine("no transition for state '" + spec.name(cfg.state) + "' on symbol " +
                           std::to_string(read));
  }
  cfg.tape.put(cfg.head, t->written(read));
  cfg.head += static_cast<int>(t->move);
  cfg.state = t->next;
}

enum class RunStatus { Accepted, Rejected, Running };

struct RunOutcome {
  RunStatus status = RunStatus::Running;
  TmConfig config;
  std::uint64_t steps = 0;
};

/// Steps at most `fuel` times. `observer`, if set, sees the configuration after every step.
inline RunOutcome tm_run(const TMSpec& spec, TmConfig cfg, std::uint64_t fuel,
                         const std::function<void(const TmConfig&, std::uint64_t)>& observer = {}) {
  std::uint64_t steps = 0;
  while (steps < fuel && !spec.halting(cfg.state)) {
    tm_step(spec, cfg);
    ++steps;
    if (observer) observer(cfg, steps);
  }
  RunOutcome out{RunStatus::Running, std::move(cfg), steps};
  switch (spec.role(out.config.state)) {
    case StateRole::Accept: out.status = RunStatus::Accepted; break;
    case StateRole::Reject: out.status = RunStatus::Rejected; break;
    case StateRole::Normal: break;
  }
  return out;
}

}  // namespace sigca
