#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "iim/iim.hpp"
#include "oracles.hpp"

using namespace iim;

TEST(Validate, Mixed7StrictIsClean) {
  const auto r = validate(fixtures::mixed7(), true);
  EXPECT_TRUE(r.violations.empty());
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Validate, DuplicateLeftHandSide) {
  SystemBuilder b;
  b.add_entity("a1", Layer::A).add_entity("b1", Layer::B).add_entity("b2", Layer::B);
  b.add_equation("a1", {{"b1"}}).add_equation("a1", {{"b2"}});
  const auto r = validate(b.build(), true);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].reason, "duplicate left-hand side a1");
  EXPECT_EQ(r.violations[0].entity, "a1");
}

TEST(Validate, ReductionInstanceWarnsOnlyWhenNotStrict) {
  const auto inst = ingest::vc_reduction(ingest::make_graph(2, {{0, 1}}), 1);
  const auto loose = validate(inst.system, false);
  EXPECT_TRUE(loose.violations.empty());
  EXPECT_EQ(loose.warnings.size(), 2u);
  const auto strict = validate(inst.system, true);
  EXPECT_EQ(strict.violations.size(), 2u);
}

TEST(Validate, ReportsEveryBrokenInvariant) {
  SystemBuilder b;
  b.add_entity("a1", Layer::A).add_entity("b1", Layer::B).add_entity("b2", Layer::B).add_entity("9x", Layer::B);
  b.add_equation("a1", {{"b1", "b2"}, {"b2", "b1"}, {"a1"}});
  b.add_equation("b1", {});
  b.add_equation("b2", {{}});
  b.add_equation("9x", {{"a1", "a1"}});
  const auto r = validate(b.build(), false);
  std::vector<std::string> reasons;
  for (const auto& v : r.violations) reasons.push_back(v.reason);
  auto has = [&](const std::string& s) { return std::find(reasons.begin(), reasons.end(), s) != reasons.end(); };
  EXPECT_TRUE(has("invalid identifier '9x'"));
  EXPECT_TRUE(has("duplicate minterm b1*b2"));
  EXPECT_TRUE(has("target a1 supports itself"));
  EXPECT_TRUE(has("empty right-hand side"));
  EXPECT_TRUE(has("empty minterm"));
  EXPECT_TRUE(has("duplicate member in minterm a1*a1"));
  EXPECT_EQ(r.warnings.size(), 0u);
}

TEST(Validate, OverlappingMintermsAllowed) {
  const auto s = parse_text("a1 <- b1*b2 + b1*b3\n");
  EXPECT_TRUE(validate(s, true).ok());
}

TEST(Builder, UnknownNameThrows) {
  SystemBuilder b;
  b.add_entity("a1", Layer::A);
  EXPECT_THROW(b.add_equation("a1", {{"b9"}}), UnknownEntity);
  EXPECT_THROW(b.add_entity("a1", Layer::B), std::invalid_argument);
}

TEST(Classify, PaperAndTableExamples) {
  EXPECT_EQ(classify(fixtures::mixed7()), CaseClass::CaseIV);
  EXPECT_EQ(classify(parse_text("a1 <- b1\nb2 <- a2\n")), CaseClass::CaseI);
  EXPECT_EQ(classify(parse_text("a1 <- b1*b2\n")), CaseClass::CaseII);
  EXPECT_EQ(classify(parse_text("a1 <- b1 + b2\n")), CaseClass::CaseIII);
  EXPECT_EQ(classify(parse_text("A: a1\nB: b1\n")), CaseClass::CaseI);
  EXPECT_EQ(classify(DependencySystem{}), CaseClass::CaseI);
  EXPECT_EQ(to_string(CaseClass::CaseIII), "Case III");
}

TEST(Classify, InvariantUnderEquationOrder) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    for (auto c : {CaseClass::CaseI, CaseClass::CaseII, CaseClass::CaseIII, CaseClass::CaseIV}) {
      const auto s = ingest::random_system(seed, 5, 4, c);
      auto text = serialize_text(s);
      // Reverse the equation lines (declarations stay on top).
      auto split = text.find("\n\n");
      std::vector<std::string> lines;
      std::string rest = split == std::string::npos ? "" : text.substr(split + 2);
      std::string head = split == std::string::npos ? text : text.substr(0, split + 2);
      std::size_t pos = 0;
      while (pos < rest.size()) {
        auto nl = rest.find('\n', pos);
        lines.push_back(rest.substr(pos, nl - pos));
        pos = nl + 1;
      }
      std::reverse(lines.begin(), lines.end());
      std::string reordered = head;
      for (const auto& l : lines) reordered += l + "\n";
      const auto t = parse_text(reordered);
      EXPECT_EQ(classify(t), c);
      EXPECT_TRUE(semantically_equal(s, t));
    }
  }
}

TEST(Negate, DeMorganShape) {
  const auto s = parse_text("a1 <- b1*b2*b3\na2 <- b1 + b2\na3 <- b1\n");
  const auto d1 = negate(*s.equation_for(s.index_of("a1")));
  ASSERT_EQ(d1.clauses.size(), 1u);
  EXPECT_EQ(d1.clauses[0].size(), 3u);
  const auto d2 = negate(*s.equation_for(s.index_of("a2")));
  ASSERT_EQ(d2.clauses.size(), 2u);
  EXPECT_EQ(d2.clauses[0], std::vector<EntityIndex>{s.index_of("b1")});
  EXPECT_EQ(d2.clauses[1], std::vector<EntityIndex>{s.index_of("b2")});
  const auto d3 = negate(*s.equation_for(s.index_of("a3")));
  EXPECT_EQ(d3.target, s.index_of("a3"));
  EXPECT_EQ(d3.clauses, std::vector<std::vector<EntityIndex>>{{s.index_of("b1")}});
}

// Exhaustive over every assignment of the supporting entities.
TEST(Negate, SemanticInvolution) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto s = ingest::random_system(seed, 2, 4, CaseClass::CaseIV);
    const auto n = s.size();
    for (const auto& eq : s.equations()) {
      const auto death = negate(eq);
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        EntitySet dead(n);
        for (EntityIndex i = 0; i < n; ++i)
          if (mask >> i & 1u) dead.set(i);
        EntitySet alive(n);
        alive.fill();
        alive.subtract(dead);
        EXPECT_EQ(death_holds(death, dead), !live_holds(eq, alive));
      }
    }
  }
}

TEST(Roots, Examples) {
  EXPECT_TRUE(roots(fixtures::mixed7()).empty());
  const auto s = parse_text("a1 <- b1\n");
  EXPECT_EQ(s.names(roots(s)), std::vector<std::string>{"b1"});
}

TEST(Roots, GeneratedRegionRootsAreLoadsLinesAndLinks) {
  ingest::RegionSpec spec;
  spec.generators = 3;
  spec.loads = 2;
  spec.towers = 2;
  spec.buildings = 2;
  const auto net = ingest::synthetic_region(11, spec);
  const auto rules = ingest::generate_rules(net);
  const auto& s = rules.system;
  std::set<std::string> expected;
  for (const auto& l : net.loads) expected.insert(l.id);
  for (const auto& l : net.transmission_lines) expected.insert(l.id);
  for (const auto& l : net.fiber_links) expected.insert(l.id);
  const auto got = s.names(roots(s));
  EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), expected);
}

TEST(EntitySet, MixedUniversesRejected) {
  EntitySet a(3), b(4);
  EXPECT_THROW(a |= b, std::invalid_argument);
  EXPECT_THROW((void)a.is_subset_of(b), std::invalid_argument);
}

TEST(EntitySet, WordBoundaries) {
  EntitySet s(130);
  s.set(0);
  s.set(63);
  s.set(64);
  s.set(129);
  EXPECT_EQ(s.count(), 4u);
  EXPECT_EQ(s.indices(), (std::vector<EntityIndex>{0, 63, 64, 129}));
  s.fill();
  EXPECT_EQ(s.count(), 130u);
  EXPECT_TRUE(s.full());
}
