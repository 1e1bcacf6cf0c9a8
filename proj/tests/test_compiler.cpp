#include <gtest/gtest.h>

#include "sigca/sigca.hpp"
#include "test_support.hpp"

using namespace sigca;

namespace {

const ReductionSystem& parity() {
  static const ReductionSystem sys = build_reduction_ca(bundled_predicate("PARITY"), CheckerVariant::Unary);
  return sys;
}

Cell enc(const ReductionSystem& s, MainSymbol m, HeadMark h, std::uint32_t w = 0) {
  return s.codec.encode(TrackedCell::of(m, h, w));
}

}  // namespace

TEST(EmbedTm, RandomMachinesMatchDirectRun) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const TMSpec tm = sigca::testing::random_tm(rng, 2 + i % 3, 2 + i % 4);
    std::vector<Symbol> input;
    for (int k = 0; k < 6; ++k) input.push_back(Symbol(rng() % tm.num_symbols()));
    EXPECT_EQ(sigca::testing::compare_embedding(tm, input, 100), "") << "machine " << i;
  }
}

TEST(EmbedTm, HeadMovesRightBySwappingArrows) {
  TMSpec tm(2, 0);
  const StateId a = tm.add_state("a");
  const StateId b = tm.add_state("b");
  for (Symbol s = 0; s < 2; ++s) {
    tm.set(a, s, {b, 1, Move::Right});
    tm.set(b, s, {a, kKeepSymbol, Move::Left});
  }
  const CellCodec c = codec_for(tm);
  const LocalRule r = embed_tm(std::make_shared<const TMSpec>(tm));
  EXPECT_EQ(r.radius(), 2);
  const std::vector<Cell> before{c.encode(0, HeadMark::right()), c.encode(0, HeadMark::right()),
                                 c.encode(0, HeadMark::head(a)), c.encode(0, HeadMark::left()),
                                 c.encode(0, HeadMark::left()), c.encode(0, HeadMark::left())};
  Configuration cfg(0, before, TailGenerator::constant(before[0]), TailGenerator::constant(before[5]));
  Configuration next = step(r, cfg);
  EXPECT_EQ(next.at(2), c.encode(1, HeadMark::right()));
  EXPECT_EQ(next.at(3), c.encode(0, HeadMark::head(b)));
  EXPECT_EQ(next.at(4), before[4]);
  EXPECT_EQ(next.at(0), before[0]);
}

TEST(EmbedTm, NoHeadMeansIdentity) {
  const ReductionSystem& s = parity();
  std::vector<Cell> nb{enc(s, MainSymbol::pair(0, 1), HeadMark::left(), 3), enc(s, MainSymbol::pair(1, 1), HeadMark::left()),
                       enc(s, MainSymbol::pair(1, 0), HeadMark::left(), 9), enc(s, MainSymbol::pair(0, 0), HeadMark::left()),
                       enc(s, MainSymbol::pair(0, 0), HeadMark::left())};
  EXPECT_EQ(s.embedding(nb), nb[2]);
  EXPECT_EQ(s.rule(nb), nb[2]);
}

TEST(EmbedTm, MissingTransitionRejected) {
  TMSpec tm(2, 0);
  const StateId a = tm.add_state("a");
  tm.set(a, 0, {a, kKeepSymbol, Move::Right});
  EXPECT_THROW(embed_tm(std::make_shared<const TMSpec>(tm)), IllFormedMachine);
}

TEST(AddSpreading, AbsorbingAndPatternTriggered) {
  const ReductionSystem& s = parity();
  const std::vector<Cell> all(5, kSpreadCell);
  EXPECT_EQ(s.rule(all), kSpreadCell);
  const Cell p00 = enc(s, MainSymbol::pair(1, 0), HeadMark::left());
  const Cell p01 = enc(s, MainSymbol::pair(0, 1), HeadMark::left());
  EXPECT_EQ(s.rule(std::vector<Cell>{p00, p00, p00, p01, p00}), kSpreadCell);  // V3 inside the neighborhood
  EXPECT_EQ(s.rule(std::vector<Cell>{p00, p00, p00, p00, p00}), p00);
  // Speed one: Spread two cells away does not reach the center yet.
  EXPECT_EQ(s.rule(std::vector<Cell>{kSpreadCell, p00, p00, p00, p00}), p00);
  EXPECT_EQ(s.rule(std::vector<Cell>{p00, kSpreadCell, p00, p00, p00}), kSpreadCell);
}

TEST(AddSpreading, PatternWidthChecked) {
  const LocalRule id = LocalRule::identity(4, 1);
  ForbiddenPattern wide{"wide", 4, [](std::span<const Cell>) { return false; }};
  EXPECT_THROW(add_spreading(id, {wide}), PatternWidth);
  ForbiddenPattern ok{"ok", 3, [](std::span<const Cell> p) { return p[0] == 3 && p[2] == 3; }};
  const LocalRule r = add_spreading(id, {ok});
  EXPECT_EQ(r(std::vector<Cell>{3, 1, 3}), 0u);
  EXPECT_EQ(r(std::vector<Cell>{3, 1, 2}), 1u);
}

TEST(Phi, WindowOfZeroOne) {
  const ReductionSystem& s = parity();
  Configuration x = phi(s, "01", BitStream::constant(true), BitStream::unary_codes(1, 0));
  EXPECT_EQ(x.at(-1), enc(s, MainSymbol::hash(), HeadMark::right()));
  EXPECT_EQ(x.at(-7), enc(s, MainSymbol::hash(), HeadMark::right()));
  EXPECT_EQ(x.at(0), enc(s, MainSymbol::input(0), HeadMark::head(s.q0())));
  EXPECT_EQ(x.at(1), enc(s, MainSymbol::input(1), HeadMark::left()));
  EXPECT_EQ(x.at(2), enc(s, MainSymbol::sep(), HeadMark::left()));
  EXPECT_EQ(x.at(3), enc(s, MainSymbol::pair(1, 0), HeadMark::left()));  // b_0 = chi_C(0) = 1
  EXPECT_EQ(x.at(4), enc(s, MainSymbol::pair(1, 0), HeadMark::left()));  // b_1 = first Skolem bit (l_1 = 1)
  EXPECT_EQ(x.at(6), enc(s, MainSymbol::pair(0, 0), HeadMark::left()));  // b_3 = 0 terminates l_1
}

TEST(Phi, EmptyWordPutsHeadOnSeparator) {
  const ReductionSystem& s = parity();
  Configuration x = phi(s, "", BitStream::constant(false), BitStream::unary_codes(1, 0));
  EXPECT_EQ(x.at(0), enc(s, MainSymbol::sep(), HeadMark::head(s.q0())));
  EXPECT_TRUE(detect_signaling(s, x, ""));
}

TEST(Phi, SignalingAndValid) {
  const ReductionSystem& s = parity();
  for (const auto& w : all_words_up_to(4)) {
    Configuration x = phi(s, w, BitStream::periodic("011"), BitStream::unary_codes(2, 1));
    EXPECT_TRUE(detect_signaling(s, x, w)) << w;
    EXPECT_TRUE(validate_local(x, s.codec, -5, Position(w.size()) + 40, s.constraints).empty()) << w;
  }
  EXPECT_THROW(phi(s, "012", BitStream::constant(false), BitStream::constant(false)), Error);
}

TEST(Phi, PeriodicTailMatchesStreams) {
  const ReductionSystem& s = parity();
  Configuration a = phi_periodic(s, "10", "0110", "10");
  Configuration b = phi_tracks(s, "10", BitStream::periodic("0110"), BitStream::periodic("10"));
  for (Position p = -4; p < 40; ++p) EXPECT_EQ(a.at(p), b.at(p)) << p;
}

TEST(BuildReductionCa, Shape) {
  const ReductionSystem& s = parity();
  EXPECT_EQ(s.rule.radius(), 2);
  EXPECT_EQ(s.codec.encode(TrackedCell::spreading()), 0u);
  EXPECT_EQ(s.rule.alphabet_size(), s.codec.alphabet_size());
  EXPECT_TRUE(s.constraints.c_track_monotone);
  const ReductionSystem c = build_reduction_ca(bundled_predicate("MEMBER"), CheckerVariant::Counter);
  EXPECT_FALSE(c.constraints.c_track_monotone);
  EXPECT_EQ(c.variant, CheckerVariant::Counter);
}

TEST(BuildReductionCa, SingleHeadPreserved) {
  const ReductionSystem& s = parity();
  Probes probes;
  int bad = 0;
  probes.track = std::make_pair(Position(-3), Position(40));
  probes.on_step = [&](std::uint64_t, const CellReader& at) {
    int heads = 0;
    for (Position p = -3; p <= 40; ++p) heads += s.codec.state_of(at(p)).has_value();
    if (heads != 1) ++bad;
  };
  run_trace(s.rule, phi(s, "11", BitStream::constant(false), BitStream::unary_codes(1, 0)), 500, probes);
  EXPECT_EQ(bad, 0);
}
