#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sigca/core_model.hpp"
#include "sigca/predicate.hpp"
#include "sigca/turing.hpp"

namespace sigca {

enum class CheckerVariant { Unary, Counter };

inline const char* to_string(CheckerVariant v) {
  return v == CheckerVariant::Unary ? "unary" : "counter";
}

/// Helper-track layout used by the checker. The low byte holds single-bit
/// marker fields, the predicate's scratch symbol sits above it.
struct WorkLayout {
  static constexpr std::uint32_t kVisited = 1u << 0;  // cell touched during this pass
  static constexpr std::uint32_t kP = 1u << 1;        // pair p: first c = 0
  static constexpr std::uint32_t kI = 1u << 2;        // pair i: current check index (= m)
  static constexpr std::uint32_t kL = 1u << 3;        // pair l_i
  static constexpr std::uint32_t kK = 1u << 4;        // next unread Skolem bit
  static constexpr std::uint32_t kX = 1u << 5;        // oracle query origin
  static constexpr std::uint32_t kY = 1u << 6;        // doubling walk, slow cursor
  static constexpr std::uint32_t kZ = 1u << 7;        // doubling walk, fast cursor
  static constexpr std::uint32_t kMarkerMask = 0xffu;
  static constexpr unsigned kScratchShift = 8;

  std::uint32_t scratch_size = 1;

  std::uint32_t work_size() const { return (kMarkerMask + 1) * scratch_size; }
  std::uint32_t num_symbols() const { return MainSymbol::kCount * work_size(); }
  static std::uint32_t scratch_of(std::uint32_t work) { return work >> kScratchShift; }
  static std::uint32_t with_scratch(std::uint32_t work, std::uint32_t s) {
    return (work & kMarkerMask) | (s << kScratchShift);
  }
  Symbol symbol(MainSymbol m, std::uint32_t work) const { return m.index() * work_size() + work; }
  MainSymbol main_of(Symbol s) const { return MainSymbol::from_index(s / work_size()); }
  std::uint32_t work_of(Symbol s) const { return s % work_size(); }
};

/// The compiled checker machine M together with the states the rest of the
/// pipeline needs to recognise.
struct CheckerMachine {
  TMSpec tm;
  WorkLayout layout;
  CheckerVariant variant = CheckerVariant::Unary;
  StateId q0 = 0;
  StateId dead = 0;
  StateId spread_trigger = 0;
  StateId commit = 0;  // entered once per accepting pass, before the c-track write
};

namespace detail {

class CheckerBuilder {
 public:
  struct View {
    MainSymbol main;
    std::uint32_t work;
    bool has(std::uint32_t bit) const { return (work & bit) != 0; }
  };
  struct Act {
    StateId next;
    MainSymbol main;
    std::uint32_t work;
    Move move;
  };
  using Behaviour = std::function<Act(const View&)>;

  explicit CheckerBuilder(WorkLayout layout) : layout_(layout), tm_(layout.num_symbols(), 0) {}

  /// `marking` states set the visited bit on every cell they leave and treat
  /// helper content on an unvisited cell as a malformed configuration.
  StateId state(const std::string& name, bool marking = true, StateRole role = StateRole::Normal) {
    StateId q = tm_.add_state(name, role);
    behaviours_.emplace_back();
    marking_.push_back(marking);
    return q;
  }
  void define(StateId q, Behaviour b) { behaviours_[q] = std::move(b); }

  void set_trigger(StateId q) { trigger_ = q; }

  TMSpec finish() {
    for (StateId q = 0; q < tm_.num_states(); ++q) {
      if (!behaviours_[q]) continue;
      for (Symbol s = 0; s < tm_.num_symbols(); ++s) {
        View v{layout_.main_of(s), layout_.work_of(s)};
        if (marking_[q] && !v.has(WorkLayout::kVisited) && v.work != 0) {
          tm_.set(q, s, {trigger_, kKeepSymbol, Move::Stay});
          continue;
        }
        Act a = behaviours_[q](v);
        if (marking_[q]) a.work |= WorkLayout::kVisited;
        tm_.set(q, s, {a.next, std::int32_t(layout_.symbol(a.main, a.work)), a.move});
      }
    }
    return std::move(tm_);
  }

  TMSpec& tm() { return tm_; }

 private:
  WorkLayout layout_;
  TMSpec tm_;
  std::vector<Behaviour> behaviours_;
  std::vector<bool> marking_;
  StateId trigger_ = 0;
};

}  // namespace detail

/// Composes the checker M for predicate `pred`.
///
/// One pass, started from q0 at the origin:
///   LOCATE   smallest pair index p with c_p = 0 (scans forever on an all-ones c-track)
///   for i = 1 .. p+1:
///     DECODE l_i from the Skolem stream on the odd b-cells (unary codes 1^l 0)
///     RUN    the predicate with m = i, answering C-queries from the even b-cells
///     a rejection sends M to `dead`
///   COMMIT   unary: c_p := 1; counter: binary increment of the c-track
///   CLEANUP  erase every helper cell touched during the pass, re-enter q0 at the origin
/// Inconsistent encodings send M to `spread_trigger`.
inline CheckerMachine build_checker(const PredicateProgram& pred, CheckerVariant variant) {
  using detail::CheckerBuilder;
  using View = CheckerBuilder::View;
  using Act = CheckerBuilder::Act;
  using WL = WorkLayout;

  WorkLayout layout{pred.scratch_size};
  CheckerBuilder b(layout);

  const StateId q0 = b.state("q0", false);
  const StateId dead = b.state("dead", false, StateRole::Reject);
  const StateId trigger = b.state("spread", false, StateRole::Reject);
  b.set_trigger(trigger);

  auto stay = [](StateId next, const View& v, std::uint32_t work) {
    return Act{next, v.main, work, Move::Stay};
  };
  auto go = [](StateId next, const View& v, Move m) { return Act{next, v.main, v.work, m}; };
  auto fail = [&](const View& v) { return Act{trigger, v.main, v.work, Move::Stay}; };

  // Walks in `dir` until `found` holds. Reaching '#' first means a marker is missing.
  auto seek = [&](StateId self, Move dir, std::function<bool(const View&)> found,
                  std::function<Act(const View&)> on_found) {
    b.define(self, [=](const View& v) {
      if (found(v)) return on_found(v);
      if (v.main.is_hash()) return fail(v);
      return go(self, v, dir);
    });
  };
  auto marker = [](std::uint32_t bit) { return [bit](const View& v) { return v.has(bit); }; };
  auto is_sep = [](const View& v) { return v.main.is_sep(); };
  auto is_hash = [](const View& v) { return v.main.is_hash(); };

  const StateId locate = b.state("locate");
  const StateId setup_left = b.state("setup.left");
  const StateId setup_pair0 = b.state("setup.pair0");
  const StateId setup_pair1 = b.state("setup.pair1");
  const StateId home_decode = b.state("decode.home");
  const StateId to_sep = b.state("decode.to-sep");
  const StateId set_l0 = b.state("decode.l0");
  const StateId find_k = b.state("decode.find-k");
  const StateId k_skip = b.state("decode.k-skip");
  const StateId k_set = b.state("decode.k-set");
  const StateId l_back = b.state("decode.l-back");
  const StateId l_set = b.state("decode.l-set");
  const StateId end_skip = b.state("decode.end-skip");
  const StateId end_set = b.state("decode.end-set");
  const StateId home_run = b.state("run.home");
  std::vector<StateId> pred_state(pred.states.size());
  for (StateId s = 0; s < pred.states.size(); ++s) pred_state[s] = b.state("pred." + pred.states[s]);
  const StateId acc_right = b.state("accept.right", false);
  const StateId acc_sweep = b.state("accept.sweep", false);
  const StateId acc_home = b.state("accept.home");
  const StateId loop_test = b.state("loop.find-p");
  const StateId loop_check = b.state("loop.check");
  const StateId next_find = b.state("next.find-i");
  const StateId next_set = b.state("next.set-i");
  const StateId commit = b.state("commit");
  const StateId carry = b.state("commit.carry");
  const StateId cu_right = b.state("cleanup.right", false);
  const StateId cu_sweep = b.state("cleanup.sweep", false);
  const StateId cu_home = b.state("cleanup.home", false);

  // q0: a single exit, independent of the symbol read.
  for (Symbol s = 0; s < layout.num_symbols(); ++s) b.tm().set(q0, s, {locate, kKeepSymbol, Move::Stay});

  b.define(locate, [=](const View& v) {
    if (v.main.is_pair() && v.main.c == 0) return stay(setup_left, v, v.work | WL::kP);
    if (v.main.is_hash()) return fail(v);
    return go(locate, v, Move::Right);
  });
  seek(setup_left, Move::Left, is_sep, [=](const View& v) { return go(setup_pair0, v, Move::Right); });
  b.define(setup_pair0, [=](const View& v) {
    return v.main.is_pair() ? go(setup_pair1, v, Move::Right) : fail(v);
  });
  b.define(setup_pair1, [=](const View& v) {
    return v.main.is_pair() ? stay(home_decode, v, v.work | WL::kI | WL::kK) : fail(v);
  });

  // DECODE: L starts at pair 0 and advances once per 1 read at K.
  seek(home_decode, Move::Left, is_hash, [=](const View& v) { return go(to_sep, v, Move::Right); });
  seek(to_sep, Move::Right, is_sep, [=](const View& v) { return go(set_l0, v, Move::Right); });
  b.define(set_l0, [=](const View& v) {
    return v.main.is_pair() ? stay(find_k, v, v.work | WL::kL) : fail(v);
  });
  seek(find_k, Move::Right, marker(WL::kK), [=](const View& v) {
    const std::uint32_t w = v.work & ~WL::kK;
    return Act{v.main.b ? k_skip : end_skip, v.main, w, Move::Right};
  });
  b.define(k_skip, [=](const View& v) { return v.main.is_pair() ? go(k_set, v, Move::Right) : fail(v); });
  b.define(k_set, [=](const View& v) {
    return v.main.is_pair() ? Act{l_back, v.main, v.work | WL::kK, Move::Left} : fail(v);
  });
  seek(l_back, Move::Left, marker(WL::kL),
       [=](const View& v) { return Act{l_set, v.main, v.work & ~WL::kL, Move::Right}; });
  b.define(l_set, [=](const View& v) {
    return v.main.is_pair() ? stay(find_k, v, v.work | WL::kL) : fail(v);
  });
  b.define(end_skip, [=](const View& v) { return v.main.is_pair() ? go(end_set, v, Move::Right) : fail(v); });
  b.define(end_set, [=](const View& v) {
    return v.main.is_pair() ? stay(home_run, v, v.work | WL::kK) : fail(v);
  });
  seek(home_run, Move::Left, is_hash,
       [=](const View& v) { return go(pred_state[pred.start], v, Move::Right); });

  // RUN: the predicate, with oracle queries resolved by a doubling walk to b_{2j}.
  auto resolve = [&](const Target& t) {
    switch (t.kind) {
      case Target::Kind::Accept: return acc_right;
      case Target::Kind::Reject: return dead;
      case Target::Kind::State: return pred_state[t.state];
    }
    return dead;
  };
  for (StateId s = 0; s < pred.states.size(); ++s) {
    const StateId self = pred_state[s];
    if (!pred.is_query(s)) {
      b.define(self, [=, &pred](const View& v) {
        PredicateView pv{region_of(v.main), v.has(WL::kI), v.has(WL::kL), WL::scratch_of(v.work)};
        const PredicateAction& a = pred.action(s, pv);
        const std::uint32_t w = a.write ? WL::with_scratch(v.work, *a.write) : v.work;
        return Act{resolve(a.target), v.main, w, a.move};
      });
      continue;
    }
    const QueryTargets qt = pred.queries.at(s);
    const StateId on_one = resolve(qt.one);
    const StateId on_zero = resolve(qt.zero);
    const std::string n = pred.states[s];
    const StateId to_sep_q = b.state("query." + n + ".to-sep");
    const StateId set_y = b.state("query." + n + ".y0");
    const StateId check = b.state("query." + n + ".check");
    const StateId adv_y = b.state("query." + n + ".adv-y");
    const StateId to_z = b.state("query." + n + ".to-z");
    const StateId adv_z = b.state("query." + n + ".adv-z");
    const StateId back_y = b.state("query." + n + ".back-y");
    const StateId find_z = b.state("query." + n + ".find-z");
    const StateId ret1 = b.state("query." + n + ".ret1");
    const StateId ret0 = b.state("query." + n + ".ret0");

    b.define(self, [=](const View& v) {
      if (!v.main.is_pair()) return stay(on_zero, v, v.work);
      return Act{to_sep_q, v.main, v.work | WL::kX | WL::kZ, Move::Left};
    });
    seek(to_sep_q, Move::Left, is_sep, [=](const View& v) { return go(set_y, v, Move::Right); });
    b.define(set_y, [=](const View& v) { return stay(check, v, v.work | WL::kY); });
    b.define(check, [=](const View& v) {
      if (v.has(WL::kX)) return stay(find_z, v, v.work);
      return Act{adv_y, v.main, v.work & ~WL::kY, Move::Right};
    });
    b.define(adv_y, [=](const View& v) { return stay(to_z, v, v.work | WL::kY); });
    seek(to_z, Move::Right, marker(WL::kZ),
         [=](const View& v) { return Act{adv_z, v.main, v.work & ~WL::kZ, Move::Right}; });
    b.define(adv_z, [=](const View& v) {
      return v.main.is_pair() ? Act{back_y, v.main, v.work | WL::kZ, Move::Left} : fail(v);
    });
    seek(back_y, Move::Left, marker(WL::kY), [=](const View& v) { return stay(check, v, v.work); });
    seek(find_z, Move::Right, marker(WL::kZ), [=](const View& v) {
      const StateId ret = v.main.b ? ret1 : ret0;
      const std::uint32_t w = v.work & ~WL::kZ;
      return Act{ret, v.main, w, v.has(WL::kX) ? Move::Stay : Move::Left};
    });
    seek(ret1, Move::Left, marker(WL::kX),
         [=](const View& v) { return stay(on_one, v, v.work & ~(WL::kX | WL::kY)); });
    seek(ret0, Move::Left, marker(WL::kX),
         [=](const View& v) { return stay(on_zero, v, v.work & ~(WL::kX | WL::kY)); });
  }

  // After an accepting run: clear scratch and L over the visited interval, return to the origin.
  auto garbage = [](const View& v) { return !v.has(WL::kVisited) && v.work != 0; };
  b.define(acc_right, [=](const View& v) {
    if (v.has(WL::kVisited)) return go(acc_right, v, Move::Right);
    return garbage(v) ? fail(v) : go(acc_sweep, v, Move::Left);
  });
  b.define(acc_sweep, [=](const View& v) {
    if (v.has(WL::kVisited)) {
      return Act{acc_sweep, v.main, WL::with_scratch(v.work, 0) & ~WL::kL, Move::Left};
    }
    return garbage(v) ? fail(v) : go(acc_home, v, Move::Right);
  });
  b.define(acc_home, [=](const View& v) {
    return v.main.is_hash() ? go(acc_home, v, Move::Right) : stay(loop_test, v, v.work);
  });

  // Loop control: done once I sits on pair p+1.
  seek(loop_test, Move::Right, marker(WL::kP), [=](const View& v) { return go(loop_check, v, Move::Right); });
  b.define(loop_check, [=](const View& v) {
    if (!v.main.is_pair()) return fail(v);
    return v.has(WL::kI) ? go(commit, v, Move::Left) : go(next_find, v, Move::Left);
  });
  seek(next_find, Move::Left, marker(WL::kI),
       [=](const View& v) { return Act{next_set, v.main, v.work & ~WL::kI, Move::Right}; });
  b.define(next_set, [=](const View& v) { return stay(home_decode, v, v.work | WL::kI); });

  b.define(commit, [=](const View& v) {
    if (!v.main.is_pair() || !v.has(WL::kP)) return fail(v);
    const MainSymbol flipped = MainSymbol::pair(v.main.b, 1);
    if (variant == CheckerVariant::Unary) return Act{cu_right, flipped, v.work, Move::Stay};
    return Act{carry, flipped, v.work, Move::Left};
  });
  b.define(carry, [=](const View& v) {
    if (v.main.is_pair()) return Act{carry, MainSymbol::pair(v.main.b, 0), v.work, Move::Left};
    if (v.main.is_sep()) return stay(cu_right, v, v.work);
    return fail(v);
  });

  // CLEANUP: erase the whole visited interval, then walk to the origin and signal.
  b.define(cu_right, [=](const View& v) {
    if (v.has(WL::kVisited)) return go(cu_right, v, Move::Right);
    return garbage(v) ? fail(v) : go(cu_sweep, v, Move::Left);
  });
  b.define(cu_sweep, [=](const View& v) {
    if (v.has(WL::kVisited)) return Act{cu_sweep, v.main, 0, Move::Left};
    return garbage(v) ? fail(v) : go(cu_home, v, Move::Right);
  });
  b.define(cu_home, [=](const View& v) {
    if (v.main.is_hash()) return go(cu_home, v, Move::Right);
    return stay(q0, v, v.work);
  });

  CheckerMachine out;
  out.tm = b.finish();
  out.tm.q0 = q0;
  out.tm.dead = dead;
  out.tm.validate();
  out.layout = layout;
  out.variant = variant;
  out.q0 = q0;
  out.dead = dead;
  out.spread_trigger = trigger;
  out.commit = commit;
  return out;
}

}  // namespace sigca
