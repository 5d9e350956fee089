#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "iim/iim.hpp"
#include "oracles.hpp"

using namespace iim;
using fixtures::set;

TEST(Step, Mixed7FromA1) {
  const auto s = fixtures::mixed7();
  EXPECT_EQ(step(s, set(s, {"a1"})), set(s, {"a1", "b3"}));
}

TEST(Step, EmptyStaysEmpty) {
  const auto s = fixtures::mixed7();
  EXPECT_TRUE(step(s, s.empty_set()).empty());
}

TEST(Step, AllOfLayerBKillsEverything) {
  const auto s = fixtures::mixed7();
  const auto dead = set(s, {"b1", "b2", "b3"});
  const auto got = step(s, dead);
  const auto want = oracle::step(oracle::rules_of(s), {"b1", "b2", "b3"});
  EXPECT_EQ(s.names(got), std::vector<std::string>(want.begin(), want.end()));
  EXPECT_EQ(got.count(), 7u);
}

TEST(Step, ForeignSetRejected) {
  const auto s = fixtures::mixed7();
  try {
    step(s, EntitySet(3));
    FAIL();
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("entity not in universe"), std::string::npos);
  }
}

TEST(Simulate, Table2Trace) {
  const auto s = fixtures::mixed7();
  const auto trace = simulate(s, set(s, {"a1"}));
  ASSERT_EQ(trace.steps.size(), 5u);
  EXPECT_EQ(trace.fixed_point_step, 4u);
  EXPECT_EQ(trace.steps[0], set(s, {"a1"}));
  EXPECT_EQ(trace.steps[1], set(s, {"a1", "b3"}));
  EXPECT_EQ(trace.steps[2], set(s, {"a1", "b3", "a3"}));
  EXPECT_EQ(trace.steps[3], set(s, {"a1", "b3", "a3", "b1", "b2"}));
  EXPECT_EQ(trace.steps[4].count(), 7u);
  EXPECT_EQ(step(s, trace.steps[4]), trace.steps[4]);
}

TEST(Simulate, Table2Csv) {
  const auto s = fixtures::mixed7();
  EXPECT_EQ(trace_csv(s, simulate(s, set(s, {"a1"}))),
            "entity,t0,t1,t2,t3,t4\n"
            "a1,1,1,1,1,1\n"
            "a2,0,0,0,0,1\n"
            "a3,0,0,1,1,1\n"
            "a4,0,0,0,0,1\n"
            "b1,0,0,0,1,1\n"
            "b2,0,0,0,1,1\n"
            "b3,0,1,1,1,1\n");
}

TEST(Simulate, EmptyAttack) {
  const auto s = fixtures::mixed7();
  const auto trace = simulate(s, s.empty_set());
  ASSERT_EQ(trace.steps.size(), 1u);
  EXPECT_EQ(trace.fixed_point_step, 0u);
}

TEST(Simulate, B3OnlyBreaksA3) {
  const auto s = fixtures::mixed7();
  const auto trace = simulate(s, set(s, {"b3"}));
  EXPECT_EQ(trace.final_dead(), set(s, {"b3", "a3"}));
  EXPECT_EQ(trace.fixed_point_step, 1u);
  const auto want = oracle::final_dead(oracle::rules_of(s), {"b3"});
  EXPECT_EQ(want, (oracle::Names{"a3", "b3"}));
}

TEST(FinalDead, Examples) {
  const auto s = fixtures::mixed7();
  EXPECT_EQ(final_dead(s, set(s, {"a1"})).count(), 7u);
  auto all = s.empty_set();
  all.fill();
  EXPECT_EQ(final_dead(s, all), all);
  const auto c = parse_text("a1 <- b1\nb2 <- a1\n");
  EXPECT_EQ(final_dead(c, set(c, {"b1"})), set(c, {"b1", "a1", "b2"}));
}

TEST(Propagator, IncrementalMatchesFresh) {
  const auto s = fixtures::mixed7();
  Propagator p(s);
  const EntityIndex b3 = s.index_of("b3"), b1 = s.index_of("b1");
  const EntityIndex first[] = {b3};
  EXPECT_EQ(p.count(first), 2u);
  const EntityIndex more[] = {b1};
  EXPECT_EQ(p.extend(more), final_dead(s, set(s, {"b1", "b3"})).count());
}

// Invariants on random systems against the name-based oracle.
class CascadeProperties : public ::testing::TestWithParam<CaseClass> {};

TEST_P(CascadeProperties, AgreesWithOracleAndInvariantsHold) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto s = ingest::random_system(seed, 5, 5, GetParam());
    const auto rules = oracle::rules_of(s);
    const auto n = s.size();
    std::vector<EntitySet> finals;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      EntitySet seeds(n);
      oracle::Names names;
      for (EntityIndex i = 0; i < n; ++i)
        if (mask >> i & 1u) {
          seeds.set(i);
          names.insert(s.name(i));
        }
      const auto trace = simulate(s, seeds);
      const auto want = oracle::trace(rules, names);
      ASSERT_EQ(trace.steps.size(), want.size());
      for (std::size_t t = 0; t < want.size(); ++t) {
        const auto got = s.names(trace.steps[t]);
        ASSERT_EQ(oracle::Names(got.begin(), got.end()), want[t]);
        if (t > 0) EXPECT_TRUE(trace.steps[t - 1].is_subset_of(trace.steps[t]));
      }
      if (!seeds.empty()) EXPECT_LE(trace.fixed_point_step, n - 1);
      const auto fin = final_dead(s, seeds);
      EXPECT_EQ(fin, trace.final_dead());
      EXPECT_EQ(final_dead(s, fin), fin);
      // Each newly dead entity satisfies its death equation on the previous state.
      for (std::size_t t = 1; t < trace.steps.size(); ++t) {
        for (const auto& eq : s.equations()) {
          const bool became = trace.steps[t].test(eq.target) && !trace.steps[t - 1].test(eq.target);
          const bool forced = death_holds(negate(eq), trace.steps[t - 1]);
          if (!trace.steps[t - 1].test(eq.target)) EXPECT_EQ(became, forced);
        }
      }
      finals.push_back(fin);
    }
    // Monotone in seeds: every subset pair.
    for (std::uint32_t x = 0; x < finals.size(); ++x)
      for (std::uint32_t y = x; y; y = (y - 1) & x) EXPECT_TRUE(finals[y].is_subset_of(finals[x]));
  }
}

INSTANTIATE_TEST_SUITE_P(AllCases, CascadeProperties,
                         ::testing::Values(CaseClass::CaseI, CaseClass::CaseII, CaseClass::CaseIII,
                                           CaseClass::CaseIV));
