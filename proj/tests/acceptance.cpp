// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sigca/sigca.hpp"
#include "test_support.hpp"

using namespace sigca;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

int failures = 0;

template <class F>
void criterion(const char* id, const char* title, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!r.pass) ++failures;
  char time[32];
  std::snprintf(time, sizeof time, "%.1fs", secs);
  std::cout << id << " " << (r.pass ? "PASS" : "FAIL") << "  " << title << ": " << r.detail << " (" << time << ")"
            << std::endl;
}

const ReductionSystem& sys(const std::string& family, CheckerVariant v = CheckerVariant::Unary) {
  static std::map<std::pair<std::string, CheckerVariant>, ReductionSystem> cache;
  auto key = std::make_pair(family, v);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_reduction_ca(bundled_predicate(family), v)).first;
  return it->second;
}

Configuration phi_default(const ReductionSystem& s, const std::string& w) {
  const Witness wt = default_witness(s.predicate.name, w);
  return phi(s, w, wt.c_set, wt.skolem, wt.c_track);
}

std::optional<Position> head_position(const CellReader& at, const CellCodec& codec, Position lo, Position hi) {
  for (Position p = lo; p <= hi; ++p) {
    const Cell c = at(p);
    if (c != kSpreadCell && codec.head_of(c).is_head()) return p;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

Result a1() {
  std::mt19937_64 rng(2024);
  int ok = 0;
  std::string first_error;
  for (int i = 0; i < 100; ++i) {
    const TMSpec tm = sigca::testing::random_tm(rng, 2 + std::uint32_t(rng() % 3), 2 + std::uint32_t(rng() % 5));
    std::vector<Symbol> input(1 + rng() % 8);
    for (auto& s : input) s = Symbol(rng() % tm.num_symbols());
    const std::string e = sigca::testing::compare_embedding(tm, input, 200);
    if (e.empty()) ++ok;
    else if (first_error.empty()) first_error = "machine " + std::to_string(i) + ": " + e;
  }
  return {ok == 100, std::to_string(ok) + "/100 machines step-identical for 200 steps" +
                         (first_error.empty() ? "" : "; " + first_error)};
}

std::vector<SampleRow> a2_rows(const std::string& family) {
  static std::map<std::string, std::vector<SampleRow>> cache;
  auto it = cache.find(family);
  if (it == cache.end())
    it = cache.emplace(family, sample_language(sys(family), all_words_up_to(6), WitnessMode{}, kDefaultFuel, 3)).first;
  return it->second;
}

Result a2() {
  Result r;
  std::ostringstream d;
  for (const std::string family : {"PARITY", "HALT-SEARCH"}) {
    int agree = 0, disagree = 0, undetermined = 0, unknown = 0, rec = 0;
    for (const auto& row : a2_rows(family)) {
      if (row.classification.verdict == Verdict::Undetermined) ++undetermined;
      if (row.classification.verdict == Verdict::Recurrent) ++rec;
      if (!row.agree) ++unknown;
      else if (*row.agree) ++agree;
      else ++disagree;
    }
    if (disagree || undetermined || unknown) r.pass = false;
    d << family << " " << agree << " agree (" << rec << " Recurrent), " << disagree << " disagree, " << undetermined
      << " Undetermined, " << unknown << " oracle-Unknown; ";
  }
  r.detail = d.str() + "words |w| <= 6, fuel 1e6, min 3";
  return r;
}

/// Steps at which the checker, run directly as a Turing machine, re-enters q0
/// after a completed pass (a commit followed by cleanup).
std::vector<std::uint64_t> direct_passes(const ReductionSystem& s, const std::string& word, std::uint64_t fuel,
                                         bool& consistent) {
  const CheckerMachine& m = *s.checker;
  const auto w = parse_word(word);
  const Position n = Position(w.size());
  const Witness wt = default_witness(s.predicate.name, word);
  const BitStream b = interleave(wt.c_set, wt.skolem);
  const BitStream c = wt.c_track;
  const WorkLayout layout = m.layout;
  Tape tape([=](Position p) {
    if (p < 0) return layout.symbol(MainSymbol::hash(), 0);
    if (p < n) return layout.symbol(MainSymbol::input(w[std::size_t(p)]), 0);
    if (p == n) return layout.symbol(MainSymbol::sep(), 0);
    const auto j = std::uint64_t(p - n - 1);
    return layout.symbol(MainSymbol::pair(b(j), c(j)), 0);
  });
  std::vector<std::uint64_t> entries;
  std::uint64_t commits = 0;
  consistent = true;
  tm_run(m.tm, TmConfig{m.q0, 0, tape}, fuel, [&](const TmConfig& cfg, std::uint64_t step) {
    if (cfg.state == m.commit) ++commits;
    if (cfg.state == m.q0) {
      entries.push_back(step);
      if (commits != entries.size() || cfg.head != 0) consistent = false;
    }
  });
  return entries;
}

Result a3() {
  int words = 0, ok = 0;
  std::string first_error;
  for (const std::string family : {"PARITY", "HALT-SEARCH"}) {
    const ReductionSystem& s = sys(family);
    for (const auto& row : a2_rows(family)) {
      if (row.oracle != OracleAnswer::True) continue;
      ++words;
      const std::uint64_t fuel = row.classification.fuel_used + 500;
      Probes probes;
      probes.signal = signal_probe(s, row.word);
      const TraceReport rep = run_trace(s.rule, phi_default(s, row.word), fuel, probes);
      bool consistent = false;
      const auto passes = direct_passes(s, row.word, fuel, consistent);
      std::vector<std::uint64_t> expected{0};
      expected.insert(expected.end(), passes.begin(), passes.end());
      if (consistent && rep.signaling_times == expected) {
        ++ok;
      } else if (first_error.empty()) {
        first_error = family + " '" + row.word + "': " + std::to_string(rep.signaling_times.size()) +
                      " signals vs 1+" + std::to_string(passes.size()) + " passes";
      }
    }
  }
  return {words > 0 && ok == words, std::to_string(ok) + "/" + std::to_string(words) +
                                        " P-true words: signaling times = {0} + direct pass completions" +
                                        (first_error.empty() ? "" : "; " + first_error)};
}

Result a4() {
  Result r;
  const ReductionSystem& s = sys("PARITY");
  int interval_checks = 0, interval_ok = 0;
  for (const std::string w : {"", "11", "0110"}) {
    for (std::uint64_t t0 : {0u, 60u, 250u}) {
      Probes keep;
      keep.track = std::make_pair(Position(-80), Position(120));
      const Configuration base = run_trace(s.rule, phi_default(s, w), t0, keep).final;
      for (Position i : {Position(-3), Position(0), Position(w.size()) + 1, Position(40)}) {
        Configuration x = base;
        x.set(i, kSpreadCell);
        for (std::uint64_t t : {1u, 5u, 25u}) {
          ++interval_checks;
          Probes probes;
          probes.track = std::make_pair(i - 60, i + 60);
          TraceReport rep = run_trace(s.rule, x, t, probes);
          bool exact = true;
          for (Position p = i - 60; p <= i + 60; ++p) {
            const bool inside = p >= i - Position(t) && p <= i + Position(t);
            if ((rep.final.at(p) == kSpreadCell) != inside) exact = false;
          }
          interval_ok += exact;
        }
      }
    }
  }
  std::ostringstream d;
  d << interval_ok << "/" << interval_checks << " injections exactly [i-t, i+t]; ";
  if (interval_ok != interval_checks) r.pass = false;

  // Violations at pair 20 of phi("11").
  const std::string w = "11";
  const Position x = Position(w.size()) + 1 + 20;
  const CellCodec& c = s.codec;
  struct Case {
    const char* name;
    Cell cell;
  };
  const std::vector<Case> cases{
      {"V1", c.encode(TrackedCell::of(MainSymbol::hash(), HeadMark::left()))},
      {"V2", c.encode(TrackedCell::of(MainSymbol::input(1), HeadMark::left()))},
      {"V3", c.encode(TrackedCell::of(MainSymbol::pair(false, true), HeadMark::left()))},
      {"V4", c.encode(TrackedCell::of(MainSymbol::pair(false, false), HeadMark::right()))},
  };
  // When the head of the undisturbed run first comes within the rule radius of x.
  std::optional<std::uint64_t> meet;
  {
    Probes probes;
    probes.track = std::make_pair(Position(-2), x + 4);
    probes.on_step = [&](std::uint64_t t, const CellReader& at) {
      if (meet) return;
      const auto h = head_position(at, c, -2, x + 4);
      if (h && *h >= x - s.rule.radius()) meet = t;
    };
    run_trace(s.rule, phi_default(s, w), 5000, probes);
  }
  const std::uint64_t bound = 2 * std::uint64_t(s.rule.radius()) + 1;
  for (const auto& cs : cases) {
    Configuration y = phi_default(s, w);
    y.set(x, cs.cell);
    if (validate_local(y, c, x - 1, x + 1, s.constraints).empty()) {
      r.pass = false;
      d << cs.name << " not a violation; ";
      continue;
    }
    Probes first;
    first.spread_cell = kSpreadCell;
    first.spread_radius = x + 10;
    first.stop_at_spread = true;
    const TraceReport a = run_trace(s.rule, y, 10000, first);
    Probes origin;
    origin.spread_cell = kSpreadCell;
    origin.spread_radius = 0;
    origin.stop_at_spread = true;
    const TraceReport b = run_trace(s.rule, y, 10000, origin);
    const bool prompt = a.spread_detected_at && (!meet || *a.spread_detected_at <= *meet + bound);
    const bool reaches = b.spread_detected_at.has_value();
    if (!prompt || !reaches) r.pass = false;
    d << cs.name << " spread@" << (a.spread_detected_at ? std::to_string(*a.spread_detected_at) : "never")
      << " origin@" << (b.spread_detected_at ? std::to_string(*b.spread_detected_at) : "never") << "; ";
  }
  d << "head meets x at t=" << (meet ? std::to_string(*meet) : "never") << ", bound +" << bound;
  r.detail = d.str();
  return r;
}

Result a5() {
  const ReductionSystem& s = sys("PARITY");
  const BinarySystem bin = recode_binary(s);
  const Position L = Position(bin.code.length());
  std::mt19937_64 rng(99);
  int ok = 0;
  std::string first_error;
  const int n = 1000;
  for (int k = 0; k < n; ++k) {
    std::string w;
    for (std::size_t i = rng() % 5; i-- > 0;) w.push_back(rng() % 2 ? '1' : '0');
    Configuration x = phi_default(s, w);
    if (k % 2 == 0) {
      // A reachable configuration part way through a pass.
      Probes keep;
      keep.track = std::make_pair(Position(-4), Position(w.size()) + 16);
      x = run_trace(s.rule, x, rng() % 600, keep).final;
    } else {
      // The head moved to a random cell in a random state, other cells' arrows adjusted.
      const Position h = Position(rng() % (w.size() + 8));
      const StateId q = StateId(rng() % s.checker->tm.num_states());
      for (Position p = -2; p <= Position(w.size()) + 10; ++p) {
        auto t = s.codec.decode(x.at(p));
        t.head = p == h ? HeadMark::head(q) : p < h ? HeadMark::right() : HeadMark::left();
        x.set(p, s.codec.encode(t));
      }
    }
    const Position lo = -2, hi = Position(w.size()) + 8;
    Configuration direct = step(s.rule, x);
    const Configuration bits = encode_config(x, bin.code);
    bool same = true;
    std::vector<Cell> nb(bin.rule.width());
    const Position R = bin.rule.radius();
    for (Position p = lo; p <= hi && same; ++p) {
      const Cell want = direct.at(p);
      for (Position i = 0; i < L; ++i) {
        const Position b = p * L + i;
        for (Position d = -R; d <= R; ++d) nb[std::size_t(d + R)] = bits.original_at(b + d);
        if (bin.rule(nb) != bin.code.bit(want, std::size_t(i))) {
          same = false;
          if (first_error.empty()) first_error = "window " + std::to_string(k) + " cell " + std::to_string(p);
          break;
        }
      }
    }
    ok += same;
  }
  const bool sync = sync_marker_unique(bin.code);
  return {ok == n && sync, std::to_string(ok) + "/" + std::to_string(n) + " windows conjugate (L=" +
                               std::to_string(L) + ", alphabet " + std::to_string(bin.code.alphabet_size()) +
                               "); sync marker unique: " + (sync ? "yes" : "no") +
                               (first_error.empty() ? "" : "; " + first_error)};
}

Result a6() {
  const std::string w = "1";
  const Position k = Position(w.size()) + 4;
  const ReductionSystem& counter = sys("MEMBER", CheckerVariant::Counter);
  const ReductionSystem& unary = sys("MEMBER", CheckerVariant::Unary);
  const auto rc = window_recurrences(counter.rule, phi_default(counter, w), kDefaultFuel, k);

  // First time the c-bit of pair 0 flips in the Unary run.
  const Position pair0 = Position(w.size()) + 1;
  Probes flip;
  const CellCodec codec = unary.codec;
  flip.stop_on_cell = [codec, pair0](Position p, Cell c) {
    return p == pair0 && c != kSpreadCell && codec.main_of(c).c;
  };
  const TraceReport f = run_trace(unary.rule, phi_default(unary, w), kDefaultFuel, flip);
  const auto ru = window_recurrences(unary.rule, phi_default(unary, w), kDefaultFuel, k);
  std::size_t after = 0;
  for (auto t : ru) after += t > f.steps_executed;
  const bool flipped = f.stop == StopReason::Cell;
  std::ostringstream d;
  d << "MEMBER w=" << w << " k=" << k << ": Counter " << rc.size() << " recurrences";
  if (!rc.empty()) d << " (first at t=" << rc.front() << ")";
  d << "; Unary first flip at t=" << (flipped ? std::to_string(f.steps_executed) : "never") << ", " << after
    << " recurrences after it, " << ru.size() << " in total";
  return {rc.size() >= 2 && flipped && after == 0, d.str()};
}

Result a7() {
  struct Case {
    std::string name;
    const ReductionSystem* s;
    std::string word;
    Configuration start;
  };
  std::vector<Case> cases;
  for (const auto& w : all_words_up_to(3)) cases.push_back({"PARITY", &sys("PARITY"), w, phi_default(sys("PARITY"), w)});
  for (const std::string w : {"11", "101"})
    cases.push_back({"HALT-SEARCH", &sys("HALT-SEARCH"), w, phi_default(sys("HALT-SEARCH"), w)});
  cases.push_back({"MEMBER counter", &sys("MEMBER", CheckerVariant::Counter), "01",
                   phi_default(sys("MEMBER", CheckerVariant::Counter), "01")});
  {
    Configuration x = phi_default(sys("PARITY"), "11");
    x.set(12, kSpreadCell);
    cases.push_back({"PARITY spread", &sys("PARITY"), "11", x});
  }
  cases.push_back({"PARITY far defect", &sys("PARITY"), "0",
                   phi(sys("PARITY"), "0", BitStream::constant(false), BitStream::unary_codes(1, 0),
                       BitStream([](std::uint64_t j) { return j >= 90; }, "step"))});
  int ok = 0;
  std::string first_error;
  for (auto& cs : cases) {
    const Position n = Position(cs.word.size());
    Probes probes;
    probes.signal = signal_probe(*cs.s, cs.word);
    probes.spread_cell = kSpreadCell;
    probes.recurrence_k = n + 4;
    probes.track = std::make_pair(Position(-60), n + 60);
    Configuration wide = cs.start;
    wide.widen_to(cs.start.lo() - 50);
    wide.widen_to(cs.start.hi() + 50);
    TraceReport a = run_trace(cs.s->rule, cs.start, 3000, probes);
    TraceReport b = run_trace(cs.s->rule, wide, 3000, probes);
    bool same = a.signaling_times == b.signaling_times && a.spread_detected_at == b.spread_detected_at &&
                a.spread_position == b.spread_position && a.window_recurrence_times == b.window_recurrence_times &&
                a.steps_executed == b.steps_executed && a.fixpoint_at == b.fixpoint_at;
    for (Position p = -60; p <= n + 60 && same; ++p) same = a.final.at(p) == b.final.at(p);
    ok += same;
    if (!same && first_error.empty()) first_error = cs.name + " '" + cs.word + "'";
  }
  return {ok == int(cases.size()), std::to_string(ok) + "/" + std::to_string(cases.size()) +
                                       " traces identical after widening the window by 50 cells" +
                                       (first_error.empty() ? "" : "; first difference: " + first_error)};
}

}  // namespace

int main() {
  criterion("A1", "embedding fidelity", a1);
  criterion("A2", "reduction correctness", a2);
  criterion("A3", "recurrence counting", a3);
  criterion("A4", "spreading dynamics", a4);
  criterion("A5", "binary recoding conjugacy", a5);
  criterion("A6", "nonwandering contrast", a6);
  criterion("A7", "determinism and laziness", a7);
  std::cout << (failures ? "FAILED " + std::to_string(failures) + " of 7" : std::string("ALL 7 PASSED")) << std::endl;
  return failures ? 1 : 0;
}
