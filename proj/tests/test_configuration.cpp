#include <gtest/gtest.h>

#include "sigca/configuration.hpp"

using namespace sigca;

TEST(Configuration, WideningUsesTails) {
  Configuration c(0, {5, 6, 7}, TailGenerator::constant(1), TailGenerator::periodic({2, 3}));
  EXPECT_EQ(c.at(-1), 1u);
  EXPECT_EQ(c.at(-50), 1u);
  EXPECT_EQ(c.at(3), 2u);
  EXPECT_EQ(c.at(4), 3u);
  EXPECT_EQ(c.at(5), 2u);
  EXPECT_EQ(c.lo(), -50);
  EXPECT_EQ(c.hi(), 5);
  EXPECT_EQ(c.at(1), 6u);
}

TEST(Configuration, ObservedCellsNeverChangeOnWidening) {
  Configuration c(0, {9}, TailGenerator::periodic({1, 2, 3}), TailGenerator::periodic({4, 5}));
  std::vector<Cell> first;
  for (Position p = -7; p <= 7; ++p) first.push_back(c.at(p));
  c.widen_to(-100);
  c.widen_to(100);
  for (Position p = -7; p <= 7; ++p) EXPECT_EQ(c.at(p), first[std::size_t(p + 7)]);
  EXPECT_EQ(c.original_at(-1), 1u);
  EXPECT_EQ(c.original_at(-2), 2u);
}

TEST(Configuration, ProgramTailIsLazy) {
  int calls = 0;
  Configuration c(0, {0}, TailGenerator::constant(0),
                  TailGenerator::program([&calls](std::uint64_t k, Fuel& f) {
                    f.charge();
                    ++calls;
                    return Cell(k % 7);
                  }));
  EXPECT_EQ(calls, 0);
  EXPECT_EQ(c.at(10), 9u % 7);
  EXPECT_EQ(calls, 10);
}

TEST(Configuration, StuckGeneratorThrows) {
  auto tail = TailGenerator::program(
      [](std::uint64_t, Fuel& f) {
        for (;;) f.charge();
        return Cell(0);
      },
      1000);
  Configuration c(0, {0}, TailGenerator::constant(0), tail);
  EXPECT_THROW(c.at(1), GeneratorStuck);
}

TEST(Configuration, DroppedTails) {
  auto p = TailGenerator::periodic({1, 2, 3}).dropped(2);
  EXPECT_EQ(p.at(0), 3u);
  EXPECT_EQ(p.at(1), 1u);
  auto s = TailGenerator::program([](std::uint64_t k, Fuel&) { return Cell(k); }).dropped(5);
  EXPECT_EQ(s.at(0), 5u);
  Configuration c(0, {7, 7}, TailGenerator::periodic({1, 2}), TailGenerator::constant(0));
  c.widen_to(-3);
  EXPECT_EQ(c.current_left_tail().at(0), c.original_at(-4));
  EXPECT_EQ(c.current_left_tail().at(1), c.original_at(-5));
}
