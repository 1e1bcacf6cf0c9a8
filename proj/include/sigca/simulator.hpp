#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sigca/compiler.hpp"
#include "sigca/configuration.hpp"
#include "sigca/local_rule.hpp"

namespace sigca {

/// One synchronous application of the rule. The result's window is the input
/// window widened by the radius; its tails evaluate the rule lazily on the
/// input's tails (constant and periodic tails stay constant and periodic).
inline Configuration step(const LocalRule& rule, const Configuration& config) {
  const int r = rule.radius();
  auto prev = std::make_shared<const Configuration>(config);
  const Position lo = config.lo() - r;
  const Position hi = config.hi() + r;
  std::vector<Cell> nb(rule.width());
  auto eval = [&rule, &nb, r](const Configuration& c, Position p) {
    for (int d = -r; d <= r; ++d) {
      const Position q = p + d;
      const Cell* w = c.peek(q);
      nb[std::size_t(d + r)] = w ? *w : c.original_at(q);
    }
    return rule(nb);
  };
  std::vector<Cell> cells;
  cells.reserve(std::size_t(hi - lo + 1));
  for (Position p = lo; p <= hi; ++p) cells.push_back(eval(*prev, p));

  auto stepped_tail = [&](const TailGenerator& tail, bool leftward) -> TailGenerator {
    auto apply_word = [&](const std::vector<Cell>& word) {
      // Periodic tail read in emission order; neighbours wrap around the period.
      const std::size_t n = word.size();
      std::vector<Cell> out(n), window(rule.width());
      for (std::size_t k = 0; k < n; ++k) {
        for (int d = -r; d <= r; ++d) {
          const std::int64_t off = std::int64_t(k) + (leftward ? -d : d);
          const std::size_t idx = std::size_t(((off % std::int64_t(n)) + std::int64_t(n)) % std::int64_t(n));
          window[std::size_t(d + r)] = word[idx];
        }
        out[k] = rule(window);
      }
      return out;
    };
    if (auto* c = std::get_if<TailGenerator::Constant>(&tail.kind())) {
      auto w = apply_word({c->cell});
      return TailGenerator::constant(w[0]);
    }
    if (auto* p = std::get_if<TailGenerator::Periodic>(&tail.kind()))
      return TailGenerator::periodic(apply_word(p->word));
    const auto& s = std::get<TailGenerator::Stream>(tail.kind());
    const Position base = leftward ? lo - 1 : hi + 1;
    // Memoized: stepping t times would otherwise re-evaluate (2r+1)^t cells.
    auto memo = std::make_shared<std::pair<std::mutex, std::unordered_map<std::uint64_t, Cell>>>();
    return TailGenerator::program(
        [prev, rule, base, leftward, r, memo](std::uint64_t k, Fuel&) {
          {
            std::lock_guard lock(memo->first);
            if (auto it = memo->second.find(k); it != memo->second.end()) return it->second;
          }
          const Position p = leftward ? base - Position(k) : base + Position(k);
          std::vector<Cell> w(rule.width());
          for (int d = -r; d <= r; ++d) w[std::size_t(d + r)] = prev->original_at(p + d);
          const Cell out = rule(w);
          std::lock_guard lock(memo->first);
          memo->second.emplace(k, out);
          return out;
        },
        s.emit_fuel);
  };
  // Tails as seen from the new window's edges.
  TailGenerator left = config.left_tail().dropped(std::uint64_t(config.left_base() - (lo - 1)));
  TailGenerator right = config.right_tail().dropped(std::uint64_t(hi + 1 - config.right_base()));
  return Configuration(lo, std::move(cells), stepped_tail(left, true), stepped_tail(right, false));
}

/// Read access to the cells of the configuration at the current time.
using CellReader = std::function<Cell(Position)>;

/// Fires on configurations in a cylinder: `signal` only inspects cells in [lo, hi].
struct SignalProbe {
  Position lo = 0;
  Position hi = 0;
  std::function<bool(const CellReader&)> signal;
};

/// True iff cells -1..|w| hold the cylinder [# w |] x [-> q0 <-^|w|].
inline bool detect_signaling(const CellCodec& codec, StateId q0, const std::vector<int>& w,
                             const CellReader& at) {
  auto matches = [&](Position p, MainSymbol m, HeadMark h) {
    const Cell c = at(p);
    return c != kSpreadCell && codec.main_of(c) == m && codec.head_of(c) == h;
  };
  if (!matches(-1, MainSymbol::hash(), HeadMark::right())) return false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!matches(Position(i), MainSymbol::input(w[i]), i == 0 ? HeadMark::head(q0) : HeadMark::left()))
      return false;
  }
  return matches(Position(w.size()), MainSymbol::sep(),
                 w.empty() ? HeadMark::head(q0) : HeadMark::left());
}

inline bool detect_signaling(const ReductionSystem& sys, Configuration& config, const std::string& word) {
  const auto w = parse_word(word);
  return detect_signaling(sys.codec, sys.q0(), w, [&config](Position p) { return config.at(p); });
}

inline SignalProbe signal_probe(const ReductionSystem& sys, const std::string& word) {
  auto w = parse_word(word);
  const CellCodec codec = sys.codec;
  const StateId q0 = sys.q0();
  return {-1, Position(w.size()),
          [codec, q0, w](const CellReader& at) { return detect_signaling(codec, q0, w, at); }};
}

inline constexpr Position kDefaultSpreadRadius = 64;

struct Probes {
  std::optional<SignalProbe> signal;
  /// Recurrence of the window [-k, k] to its time-0 contents.
  std::optional<Position> recurrence_k;
  /// Cell value counted as Spread; the probe watches [-spread_radius, spread_radius].
  std::optional<Cell> spread_cell;
  Position spread_radius = kDefaultSpreadRadius;
  bool stop_at_spread = false;
  std::optional<std::size_t> stop_after_signals;
  /// Called on every cell that changes; returning true ends the trace after that step.
  std::function<bool(Position, Cell)> stop_on_cell;
  /// Called at t = 0 and after every step.
  std::function<void(std::uint64_t, const CellReader&)> on_step;
  /// Extra region reported exactly in the final configuration.
  std::optional<std::pair<Position, Position>> track;
};

enum class StopReason { Fuel, Spread, Signals, Cell };

inline const char* to_string(StopReason s) {
  switch (s) {
    case StopReason::Fuel: return "fuel";
    case StopReason::Spread: return "spread";
    case StopReason::Signals: return "signals";
    case StopReason::Cell: return "cell";
  }
  return "?";
}

struct TraceReport {
  std::uint64_t steps_executed = 0;
  std::vector<std::uint64_t> signaling_times;
  std::optional<std::uint64_t> spread_detected_at;
  std::optional<Position> spread_position;
  std::optional<std::vector<std::uint64_t>> window_recurrence_times;
  /// First time from which nothing changes any more.
  std::optional<std::uint64_t> fixpoint_at;
  StopReason stop = StopReason::Fuel;
  /// Set when the run had to rescan the whole light cone of the probes.
  bool full_horizon = false;
  Configuration final;
};

namespace detail {

struct NeedFullHorizon {};

/// Materialized cells: time-0 values, current values and activity stamps.
class Strip {
 public:
  explicit Strip(const Configuration& cfg) : cfg_(&cfg) {}

  void ensure(Position lo, Position hi) {
    if (x0_.empty()) {
      origin_ = lo;
      append(lo, hi);
      return;
    }
    if (lo < origin_) {
      const Position new_origin = std::min(lo, origin_ - Position(x0_.size()));
      const std::size_t extra = std::size_t(origin_ - new_origin);
      std::vector<Cell> x0(extra), cur(extra);
      for (std::size_t i = 0; i < extra; ++i) x0[i] = cur[i] = cfg_->original_at(new_origin + Position(i));
      x0_.insert(x0_.begin(), x0.begin(), x0.end());
      cur_.insert(cur_.begin(), cur.begin(), cur.end());
      stamp_.insert(stamp_.begin(), extra, 0);
      origin_ = new_origin;
    }
    if (hi > this->hi()) append(this->hi() + 1, std::max(hi, this->hi() + Position(x0_.size())));
  }

  Position lo() const { return origin_; }
  Position hi() const { return origin_ + Position(x0_.size()) - 1; }
  bool contains(Position p) const { return !x0_.empty() && p >= lo() && p <= hi(); }

  Cell& cur(Position p) { return cur_[idx(p)]; }
  Cell x0(Position p) const { return x0_[idx(p)]; }
  std::uint64_t& stamp(Position p) { return stamp_[idx(p)]; }
  std::span<const Cell> cur_span(Position from, std::size_t n) const { return {&cur_[idx(from)], n}; }
  std::span<const Cell> x0_span(Position from, std::size_t n) const { return {&x0_[idx(from)], n}; }

 private:
  std::size_t idx(Position p) const { return std::size_t(p - origin_); }
  void append(Position from, Position to) {
    for (Position p = from; p <= to; ++p) {
      const Cell c = cfg_->original_at(p);
      x0_.push_back(c);
      cur_.push_back(c);
      stamp_.push_back(0);
    }
  }

  const Configuration* cfg_;
  Position origin_ = 0;
  std::vector<Cell> x0_, cur_;
  std::vector<std::uint64_t> stamp_;
};

class TraceEngine {
 public:
  TraceEngine(const LocalRule& rule, const Configuration& config, std::uint64_t fuel, const Probes& probes)
      : rule_(rule), cfg_(config), fuel_(fuel), probes_(probes), r_(rule.radius()) {
    lo_ = cfg_.lo();
    hi_ = cfg_.hi();
    auto cover = [this](Position a, Position b) {
      lo_ = std::min(lo_, a);
      hi_ = std::max(hi_, b);
    };
    if (probes_.signal) cover(probes_.signal->lo, probes_.signal->hi);
    if (probes_.recurrence_k) cover(-*probes_.recurrence_k, *probes_.recurrence_k);
    if (probes_.spread_cell) cover(-probes_.spread_radius, probes_.spread_radius);
    if (probes_.track) cover(probes_.track->first, probes_.track->second);
  }

  TraceReport run() {
    try {
      return run_mode(false);
    } catch (const NeedFullHorizon&) {
      return run_mode(true);
    }
  }

 private:
  struct Side {
    bool infinite = false;  // every cell beyond the scanned range is static
    Position scanned = 0;   // last scanned position on this side
  };

  bool is_static(Strip& s, Position p) const {
    s.ensure(p - r_, p + r_);
    return rule_(s.x0_span(p - r_, rule_.width())) == s.x0(p);
  }

  /// A constant or periodic tail is static iff one period of cells deep inside it is.
  bool tail_static(Strip& s, const TailGenerator& tail, Position first, int dir) const {
    if (tail.is_program()) return false;
    const Position start = first + dir * r_;
    for (std::size_t i = 0; i < tail.period(); ++i)
      if (!is_static(s, start + dir * Position(i))) return false;
    return true;
  }

  TraceReport run_mode(bool full) {
    Strip s(cfg_);
    TraceReport rep;
    rep.full_horizon = full;
    const Position width = Position(rule_.width());
    const Position cone = r_ * Position(fuel_ + 1) + r_;
    s.ensure(lo_ - 2 * r_, hi_ + 2 * r_);

    Side left, right;
    std::vector<Position> active;
    std::uint64_t stamp_gen = 1;
    auto activate = [&](Position p) {
      if (full && (p < lo_ - cone || p > hi_ + cone)) return;
      s.ensure(p - r_, p + r_);
      if (s.stamp(p) == stamp_gen) return;
      s.stamp(p) = stamp_gen;
      active.push_back(p);
    };
    // Returns false if a non-static cell was found after time 0.
    auto scan_to = [&](Side& side, Position target, int dir, bool at_start) {
      while ((target - side.scanned) * dir > 0) {
        side.scanned += dir;
        if (!is_static(s, side.scanned)) {
          if (!at_start) throw NeedFullHorizon{};
          activate(side.scanned);
        }
      }
    };

    // Time-0 scan.
    left.scanned = lo_ - r_ - 1;
    right.scanned = hi_ + r_ + 1;
    for (Position p = left.scanned + 1; p < right.scanned; ++p)
      if (!is_static(s, p)) activate(p);
    if (full) {
      scan_to(left, lo_ - cone, -1, true);
      scan_to(right, hi_ + cone, 1, true);
      left.infinite = right.infinite = true;
    } else {
      left.infinite = tail_static(s, cfg_.current_left_tail(), cfg_.lo() - 1, -1);
      right.infinite = tail_static(s, cfg_.current_right_tail(), cfg_.hi() + 1, 1);
      const bool left_ok = left.infinite || cfg_.current_left_tail().is_program();
      const bool right_ok = right.infinite || cfg_.current_right_tail().is_program();
      if (!left_ok || !right_ok) throw NeedFullHorizon{};
    }
    Position ext_lo = lo_, ext_hi = hi_;  // hull of the tracked region and all changes
    auto ensure_scanned = [&](std::uint64_t t, bool at_start) {
      if (full) return;
      const Position reach = r_ * Position(t + 2) + r_;
      if (!left.infinite) scan_to(left, ext_lo - reach, -1, at_start);
      if (!right.infinite) scan_to(right, ext_hi + reach, 1, at_start);
    };
    ensure_scanned(0, true);

    auto reader = [&s](Position p) {
      s.ensure(p, p);
      return s.cur(p);
    };
    const CellReader read = reader;

    // Probe state.
    bool signaling = probes_.signal && probes_.signal->signal(read);
    if (signaling) rep.signaling_times.push_back(0);
    std::int64_t mismatches = 0;
    if (probes_.recurrence_k) rep.window_recurrence_times.emplace();
    auto in_spread_region = [&](Position p) {
      return probes_.spread_cell && p >= -probes_.spread_radius && p <= probes_.spread_radius;
    };
    if (probes_.spread_cell) {
      for (Position p = -probes_.spread_radius; p <= probes_.spread_radius; ++p) {
        if (s.cur(p) == *probes_.spread_cell) {
          rep.spread_detected_at = 0;
          rep.spread_position = p;
          break;
        }
      }
    }
    if (probes_.on_step) probes_.on_step(0, read);

    auto finish = [&](std::uint64_t t) {
      rep.steps_executed = t;
      Position flo = lo_, fhi = hi_;
      if (!full) {
        flo = std::min(flo, ext_lo);
        fhi = std::max(fhi, ext_hi);
      }
      s.ensure(flo, fhi);
      std::vector<Cell> cells;
      for (Position p = flo; p <= fhi; ++p) cells.push_back(s.cur(p));
      TailGenerator lt = cfg_.left_tail().dropped(std::uint64_t(cfg_.left_base() - (flo - 1)));
      TailGenerator rt = cfg_.right_tail().dropped(std::uint64_t(fhi + 1 - cfg_.right_base()));
      rep.final = Configuration(flo, std::move(cells), std::move(lt), std::move(rt));
      return rep;
    };
    auto signals_done = [&] {
      return probes_.stop_after_signals && rep.signaling_times.size() >= *probes_.stop_after_signals;
    };
    if (signals_done()) {
      rep.stop = StopReason::Signals;
      return finish(0);
    }
    if (probes_.stop_at_spread && rep.spread_detected_at) {
      rep.stop = StopReason::Spread;
      return finish(0);
    }

    std::vector<std::pair<Position, Cell>> changes;
    for (std::uint64_t t = 0; t < fuel_; ++t) {
      ensure_scanned(t, t == 0);
      changes.clear();
      for (Position p : active) {
        s.ensure(p - r_, p + r_);
        const Cell v = rule_(s.cur_span(p - r_, std::size_t(width)));
        if (v != s.cur(p)) changes.emplace_back(p, v);
      }
      ++stamp_gen;
      active.clear();
      if (changes.empty()) {
        // x_{t+1} = x_t: a fixed point from time t on.
        ensure_scanned(fuel_, false);
        rep.fixpoint_at = t;
        for (std::uint64_t u = t + 1; u <= fuel_; ++u) {
          if (signaling) rep.signaling_times.push_back(u);
          if (rep.window_recurrence_times && mismatches == 0) rep.window_recurrence_times->push_back(u);
          if (signals_done()) {
            rep.stop = StopReason::Signals;
            return finish(u);
          }
        }
        return finish(fuel_);
      }
      std::sort(changes.begin(), changes.end());
      bool hit_signal = false, stop_cell = false;
      for (auto [p, v] : changes) {
        Cell& c = s.cur(p);
        if (probes_.recurrence_k && p >= -*probes_.recurrence_k && p <= *probes_.recurrence_k) {
          mismatches += (v != s.x0(p)) - (c != s.x0(p));
        }
        c = v;
        ext_lo = std::min(ext_lo, p);
        ext_hi = std::max(ext_hi, p);
        if (probes_.signal && p >= probes_.signal->lo && p <= probes_.signal->hi) hit_signal = true;
        if (!rep.spread_detected_at && in_spread_region(p) && v == *probes_.spread_cell) {
          rep.spread_detected_at = t + 1;
          rep.spread_position = p;
        }
        if (probes_.stop_on_cell && probes_.stop_on_cell(p, v)) stop_cell = true;
      }
      for (auto [p, v] : changes)
        for (Position q = p - r_; q <= p + r_; ++q) activate(q);
      const std::uint64_t now = t + 1;
      if (hit_signal) signaling = probes_.signal->signal(read);
      if (signaling) rep.signaling_times.push_back(now);
      if (rep.window_recurrence_times && mismatches == 0) rep.window_recurrence_times->push_back(now);
      if (probes_.on_step) probes_.on_step(now, read);
      if (stop_cell) {
        rep.stop = StopReason::Cell;
        return finish(now);
      }
      if (probes_.stop_at_spread && rep.spread_detected_at) {
        rep.stop = StopReason::Spread;
        return finish(now);
      }
      if (signals_done()) {
        rep.stop = StopReason::Signals;
        return finish(now);
      }
    }
    return finish(fuel_);
  }

  LocalRule rule_;
  Configuration cfg_;
  std::uint64_t fuel_;
  Probes probes_;
  Position r_;
  Position lo_ = 0, hi_ = 0;  // tracked region
};

}  // namespace detail

/// Exact event-driven trace: only cells near a change are recomputed. Cells
/// of program tails are checked for quiescence as the light cone reaches them.
inline TraceReport run_trace(const LocalRule& rule, const Configuration& config, std::uint64_t fuel,
                             const Probes& probes = {}) {
  return detail::TraceEngine(rule, config, fuel, probes).run();
}

/// Steps t in 1..fuel at which the cells [-k, k] equal their time-0 values.
inline std::vector<std::uint64_t> window_recurrences(const LocalRule& rule, const Configuration& config,
                                                     std::uint64_t fuel, Position k) {
  if (k < 1) throw Error("recurrence window needs k >= 1");
  Probes probes;
  probes.recurrence_k = k;
  return *run_trace(rule, config, fuel, probes).window_recurrence_times;
}

}  // namespace sigca
