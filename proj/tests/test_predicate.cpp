#include <gtest/gtest.h>

#include <string>

#include "sigca/predicate_library.hpp"
#include "sigca/json_io.hpp"

using namespace sigca;

namespace {

const BitOracle kEmpty = [](std::uint64_t) { return false; };

PredicateResult eval(const std::string& name, std::uint64_t m, std::uint64_t l, std::vector<int> w,
                     const BitOracle& c = kEmpty, std::uint64_t fuel = 100000) {
  return eval_predicate_direct(bundled_predicate(name), c, m, l, w, fuel);
}

}  // namespace

TEST(Predicate, ParityExamples) {
  EXPECT_EQ(eval("PARITY", 2, 3, {1, 1}), PredicateResult::Accept);
  EXPECT_EQ(eval("PARITY", 5, 3, {1, 1}), PredicateResult::Reject);
  EXPECT_EQ(eval("PARITY", 1, 1, {1}), PredicateResult::Reject);
  EXPECT_EQ(eval("PARITY", 1, 4, {}), PredicateResult::Accept);
}

TEST(Predicate, FuelZeroTimesOut) {
  for (const char* name : {"PARITY", "MEMBER", "HALT-SEARCH", "ACCEPT_ALL", "REJECT_ALL"})
    EXPECT_EQ(eval(name, 1, 1, {1}, kEmpty, 0), PredicateResult::Timeout) << name;
}

TEST(Predicate, ParityMatchesDefinition) {
  for (unsigned bits = 0; bits < 64; ++bits) {
    for (std::size_t len : {0u, 1u, 3u, 6u}) {
      std::vector<int> w;
      int ones = 0;
      for (std::size_t i = 0; i < len; ++i) {
        w.push_back((bits >> i) & 1);
        ones += w.back();
      }
      for (std::uint64_t m = 1; m <= 4; ++m) {
        for (std::uint64_t l = 0; l <= 6; ++l) {
          const bool expect = l >= m && ones % 2 == 0;
          ASSERT_EQ(eval("PARITY", m, l, w), expect ? PredicateResult::Accept : PredicateResult::Reject);
        }
      }
    }
  }
}

TEST(Predicate, MemberMatchesDefinition) {
  const std::vector<int> w{1, 0, 1, 1};
  for (unsigned cbits = 0; cbits < 64; ++cbits) {
    const BitOracle c = [cbits](std::uint64_t j) { return j < 6 && ((cbits >> j) & 1); };
    for (std::uint64_t m = 1; m <= 6; ++m) {
      for (std::uint64_t l = 0; l <= 7; ++l) {
        const bool bit_ok = m >= w.size() || c(m) == (w[m] != 0);
        const bool expect = l >= m && bit_ok;
        ASSERT_EQ(eval("MEMBER", m, l, w, c), expect ? PredicateResult::Accept : PredicateResult::Reject)
            << "m=" << m << " l=" << l << " C=" << cbits;
      }
    }
  }
}

TEST(Predicate, HaltSearchMatchesGuest) {
  // The guest halts on w iff w contains 11; it then needs (index of the second 1) + 1 steps.
  for (unsigned bits = 0; bits < 32; ++bits) {
    std::vector<int> w;
    for (int i = 0; i < 5; ++i) w.push_back((bits >> i) & 1);
    std::optional<std::uint64_t> steps;
    for (std::size_t i = 1; i < w.size() && !steps; ++i)
      if (w[i - 1] && w[i]) steps = i + 1;
    for (std::uint64_t m = 1; m <= 3; ++m) {
      for (std::uint64_t l = 0; l <= 8; ++l) {
        const bool expect = l >= m && steps && *steps <= l;
        ASSERT_EQ(eval("HALT-SEARCH", m, l, w), expect ? PredicateResult::Accept : PredicateResult::Reject)
            << "w=" << bits << " m=" << m << " l=" << l;
      }
    }
  }
}

TEST(Predicate, ConstantPredicates) {
  EXPECT_EQ(eval("ACCEPT_ALL", 3, 0, {0}), PredicateResult::Accept);
  EXPECT_EQ(eval("REJECT_ALL", 3, 9, {0}), PredicateResult::Reject);
}

TEST(Predicate, JsonRoundTrip) {
  for (const auto& p : bundled_library().at("predicates")) {
    const PredicateProgram a = parse_predicate(p);
    const PredicateProgram b = parse_predicate(json::parse(predicate_to_json(a).dump()));
    EXPECT_EQ(predicate_to_json(a).dump(), predicate_to_json(b).dump()) << a.name;
  }
}

TEST(Predicate, ParseErrors) {
  auto bad_state = json::parse(R"({"name":"x","start":"a","states":["a"],"rules":[{"in":"b","to":"ACCEPT"}]})");
  EXPECT_THROW(parse_predicate(bad_state), ParseError);
  auto bad_region = json::parse(
      R"({"name":"x","start":"a","states":["a"],"rules":[{"in":"a","if":{"region":"nowhere"},"to":"ACCEPT"}]})");
  EXPECT_THROW(parse_predicate(bad_region), ParseError);
  EXPECT_THROW(bundled_predicate("NOPE"), ParseError);
}

TEST(Predicate, BundledTextMatchesDataFile) {
  const char* dir = std::getenv("SIGCA_SOURCE_DIR");
  if (!dir) GTEST_SKIP() << "source directory not provided";
  EXPECT_EQ(json::parse(read_file(std::string(dir) + "/data/predicates.json")), bundled_library());
}

TEST(Predicate, RegionDisciplineViolations) {
  auto big_write = json::parse(
      R"({"name":"x","scratch":2,"start":"a","states":["a"],"rules":[{"in":"a","write":5,"to":"ACCEPT"}]})");
  EXPECT_THROW(parse_predicate(big_write), IllFormedMachine);
  auto partial = json::parse(
      R"({"name":"x","start":"a","states":["a"],"rules":[{"in":"a","if":{"region":"pair"},"to":"ACCEPT"}]})");
  EXPECT_THROW(parse_predicate(partial), IllFormedMachine);
}
