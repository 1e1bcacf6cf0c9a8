#include <gtest/gtest.h>

#include <map>

#include "sigca/bitstream.hpp"
#include "sigca/checker.hpp"
#include "sigca/predicate_library.hpp"

using namespace sigca;

namespace {

struct CheckerRun {
  std::vector<std::uint64_t> q0_entries;  // steps at which the head re-entered q0 at the origin
  std::uint64_t commits = 0;
  std::vector<std::map<std::uint64_t, int>> c_at_q0;  // c-track snapshot at every q0 entry
  RunOutcome outcome;
};

Tape checker_tape(const WorkLayout& layout, const std::vector<int>& w, BitStream b, BitStream c) {
  const Position n = Position(w.size());
  return Tape([=](Position p) {
    if (p < 0) return layout.symbol(MainSymbol::hash(), 0);
    if (p < n) return layout.symbol(MainSymbol::input(w[std::size_t(p)]), 0);
    if (p == n) return layout.symbol(MainSymbol::sep(), 0);
    const auto j = std::uint64_t(p - n - 1);
    return layout.symbol(MainSymbol::pair(b(j), c(j)), 0);
  });
}

BitStream interleaved(BitStream c_set, BitStream skolem) {
  return BitStream([=](std::uint64_t j) { return j % 2 == 0 ? c_set(j / 2) : skolem((j - 1) / 2); }, "b");
}

CheckerRun run_checker(const CheckerMachine& m, const std::vector<int>& w, BitStream b, std::uint64_t fuel,
                BitStream c = BitStream::constant(false)) {
  CheckerRun out;
  const WorkLayout& layout = m.layout;
  const Position n = Position(w.size());
  TmConfig start{m.q0, 0, checker_tape(layout, w, b, c)};
  auto observe = [&](const TmConfig& cfg, std::uint64_t step) {
    if (cfg.state == m.commit) ++out.commits;
    if (cfg.state == m.q0) {
      EXPECT_EQ(cfg.head, 0);
      out.q0_entries.push_back(step);
      std::map<std::uint64_t, int> cs;
      for (const auto& [p, s] : cfg.tape.writes()) {
        if (p > n && layout.main_of(s).c) cs[std::uint64_t(p - n - 1)] = 1;
        EXPECT_EQ(layout.work_of(s), 0u) << "helper track not cleaned at q0";
      }
      out.c_at_q0.push_back(cs);
    }
  };
  out.outcome = tm_run(m.tm, start, fuel, observe);
  return out;
}

std::uint64_t counter_value(const std::map<std::uint64_t, int>& c) {
  std::uint64_t v = 0;
  for (const auto& [j, bit] : c)
    if (bit) v |= std::uint64_t(1) << j;
  return v;
}

}  // namespace

TEST(Checker, AcceptAllFirstPassFlipsC0) {
  const CheckerMachine m = build_checker(bundled_predicate("ACCEPT_ALL"), CheckerVariant::Unary);
  const CheckerRun r = run_checker(m, {1}, interleaved(BitStream::constant(false), BitStream::unary_codes(1, 0)), 100000);
  ASSERT_GE(r.q0_entries.size(), 1u);
  EXPECT_EQ(r.c_at_q0[0], (std::map<std::uint64_t, int>{{0, 1}}));
  ASSERT_GE(r.q0_entries.size(), 3u);
  EXPECT_EQ(r.c_at_q0[2], (std::map<std::uint64_t, int>{{0, 1}, {1, 1}, {2, 1}}));
}

TEST(Checker, RejectAllGoesDead) {
  const CheckerMachine m = build_checker(bundled_predicate("REJECT_ALL"), CheckerVariant::Unary);
  for (auto w : {std::vector<int>{}, std::vector<int>{0}, std::vector<int>{1, 1, 0}}) {
    const CheckerRun r = run_checker(m, w, interleaved(BitStream::constant(false), BitStream::unary_codes(1, 0)), 100000);
    EXPECT_EQ(r.outcome.status, RunStatus::Rejected);
    EXPECT_EQ(r.outcome.config.state, m.dead);
    EXPECT_TRUE(r.q0_entries.empty());
  }
}

TEST(Checker, ParityPassesGrow) {
  const CheckerMachine m = build_checker(bundled_predicate("PARITY"), CheckerVariant::Unary);
  const CheckerRun r = run_checker(m, {1, 1}, interleaved(BitStream::constant(false), BitStream::unary_codes(1, 0)), 200000);
  EXPECT_EQ(r.outcome.status, RunStatus::Running);
  EXPECT_GE(r.q0_entries.size(), 8u);
  EXPECT_EQ(r.q0_entries.size(), r.commits);
  const CheckerRun odd = run_checker(m, {1}, interleaved(BitStream::constant(false), BitStream::unary_codes(1, 0)), 200000);
  EXPECT_EQ(odd.outcome.status, RunStatus::Rejected);
}

TEST(Checker, PhaseSafetyAndUnaryMonotonicity) {
  const CheckerMachine m = build_checker(bundled_predicate("MEMBER"), CheckerVariant::Unary);
  const std::vector<int> w{1, 0, 1};
  BitStream c_set([](std::uint64_t j) { return j == 0 || j == 2; }, "C");
  const WorkLayout& L = m.layout;
  TmConfig cfg{m.q0, 0, checker_tape(L, w, interleaved(c_set, BitStream::unary_codes(1, 0)), BitStream::constant(false))};
  for (int step = 0; step < 50000; ++step) {
    const Symbol before = cfg.tape.get(cfg.head);
    const Position at = cfg.head;
    tm_step(m.tm, cfg);
    const Symbol after = cfg.tape.get(at);
    const MainSymbol mb = L.main_of(before), ma = L.main_of(after);
    ASSERT_EQ(mb.kind, ma.kind);
    ASSERT_EQ(mb.a, ma.a);
    ASSERT_EQ(mb.b, ma.b);
    ASSERT_GE(ma.c, mb.c) << "c-track may only flip 0 -> 1";
  }
}

TEST(Checker, CounterIncrementsByOne) {
  const CheckerMachine m = build_checker(bundled_predicate("PARITY"), CheckerVariant::Counter);
  const CheckerRun r = run_checker(m, {0, 1, 1}, interleaved(BitStream::constant(false), BitStream::unary_codes(1, 0)), 400000);
  ASSERT_GE(r.q0_entries.size(), 12u);
  for (std::size_t i = 0; i < r.c_at_q0.size(); ++i) EXPECT_EQ(counter_value(r.c_at_q0[i]), i + 1);
  EXPECT_EQ(r.q0_entries.size(), r.commits);
}

TEST(Checker, AllOnesSkolemStallsForever) {
  const CheckerMachine m = build_checker(bundled_predicate("ACCEPT_ALL"), CheckerVariant::Unary);
  const CheckerRun r = run_checker(m, {0}, interleaved(BitStream::constant(false), BitStream::constant(true)), 20000);
  EXPECT_EQ(r.outcome.status, RunStatus::Running);
  EXPECT_TRUE(r.q0_entries.empty());
}

TEST(Checker, Q0HasOneExit) {
  for (auto v : {CheckerVariant::Unary, CheckerVariant::Counter}) {
    const CheckerMachine m = build_checker(bundled_predicate("HALT-SEARCH"), v);
    EXPECT_NO_THROW(m.tm.validate());
    const Transition* exit = m.tm.lookup(m.q0, 0);
    ASSERT_NE(exit, nullptr);
    EXPECT_NE(exit->next, m.q0);
    EXPECT_TRUE(m.tm.halting(m.dead));
    EXPECT_TRUE(m.tm.halting(m.spread_trigger));
  }
}

TEST(Checker, ReentriesMatchDirectEvaluation) {
  // Pass p succeeds iff R holds for checks 1..p; the run stops at the first failing check.
  const PredicateProgram pred = bundled_predicate("MEMBER");
  const CheckerMachine m = build_checker(pred, CheckerVariant::Unary);
  const std::vector<int> w{0, 1, 1};
  BitStream c_set([](std::uint64_t j) { return j == 1; }, "C");  // wrong at m = 2
  const auto skolem = BitStream::unary_codes(1, 0);
  const CheckerRun r = run_checker(m, w, interleaved(c_set, skolem), 200000);
  std::size_t expected = 0;
  const BitOracle oracle = [&](std::uint64_t j) { return c_set(j); };
  for (std::uint64_t p = 1; p <= 10; ++p) {
    bool ok = true;
    for (std::uint64_t i = 1; i <= p; ++i)
      ok = ok && eval_predicate_direct(pred, oracle, i, i, w, 100000) == PredicateResult::Accept;
    if (!ok) break;
    ++expected;
  }
  EXPECT_EQ(expected, 1u);
  EXPECT_EQ(r.q0_entries.size(), expected);
  EXPECT_EQ(r.outcome.status, RunStatus::Rejected);
}
