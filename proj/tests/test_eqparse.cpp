#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "iim/iim.hpp"

using namespace iim;

TEST(Parse, TwoEquations) {
  const auto s = parse_text("a1 <- b1 + b2\nb3 <- a1*a2");
  EXPECT_EQ(s.equations().size(), 2u);
  EXPECT_EQ(s.names(s.make_set({"a1", "a2", "b1", "b2", "b3"})).size(), s.size());
  EXPECT_EQ(s.size(), 5u);
  EXPECT_EQ(s.entity(s.index_of("a2")).layer, Layer::A);
  EXPECT_EQ(s.entity(s.index_of("b2")).layer, Layer::B);
  EXPECT_EQ(s.names(roots(s)), (std::vector<std::string>{"a2", "b1", "b2"}));
}

TEST(Parse, Mixed7RoundTripIsByteStable) {
  const auto s = fixtures::mixed7();
  EXPECT_EQ(s.size(), 7u);
  EXPECT_EQ(s.equations().size(), 7u);
  const auto text = serialize_text(s);
  EXPECT_EQ(text,
            "A: a1 a2 a3 a4\n"
            "B: b1 b2 b3\n"
            "\n"
            "a1 <- b1 + b2\n"
            "a2 <- b1*b3 + b2\n"
            "a3 <- b1*b2*b3\n"
            "a4 <- b1 + b2 + b3\n"
            "b1 <- a1 + a2*a3\n"
            "b2 <- a1 + a3\n"
            "b3 <- a1*a2\n");
  EXPECT_EQ(serialize_text(parse_text(text)), text);
  EXPECT_TRUE(semantically_equal(parse_text(text), s));
}

TEST(Parse, EmptyRightHandSide) {
  try {
    parse_text("a1 <- ");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.message(), "empty right-hand side");
  }
}

TEST(Parse, ErrorPositions) {
  struct Case {
    const char* text;
    std::size_t line, column;
    const char* message;
  };
  const Case cases[] = {
      {"a1 <- b1 +\n", 1, 10, "empty minterm"},
      {"a1 <- b1 * + b2\n", 1, 12, "expected identifier after '*'"},
      {"\na1 <- b1 b2\n", 2, 10, "expected '+' or '*' between identifiers"},
      {"a1 b1\n", 1, 4, "expected '<-' after target (juxtaposition is not conjunction)"},
      {"a1 <- b1\na1 <- b2\n", 2, 1, "duplicate left-hand side a1 (first on line 1)"},
      {"gen1 <- b1\n", 1, 1, "cannot determine layer of 'gen1'; declare it with A: or B:"},
      {"C: x1\n", 1, 1, "unknown layer 'C'"},
  };
  for (const auto& c : cases) {
    try {
      parse_text(c.text);
      ADD_FAILURE() << "no error for: " << c.text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), c.line) << c.text;
      EXPECT_EQ(e.column(), c.column) << c.text;
      EXPECT_EQ(e.message(), c.message) << c.text;
    }
  }
}

TEST(Parse, DeclarationsOverridePrefix) {
  const auto s = parse_text("B: a_tower\nA: gen_1 bq\n\ngen_1 <- a_tower\nbq <- a_tower # comment\r\n");
  EXPECT_EQ(s.entity(s.index_of("a_tower")).layer, Layer::B);
  EXPECT_EQ(s.entity(s.index_of("bq")).layer, Layer::A);
  EXPECT_TRUE(validate(s, true).ok());
}

TEST(Parse, DeclaredOnlyEntitiesAreRoots) {
  const auto s = parse_text("A: a1 a9\nB: b1\na1 <- b1\n");
  EXPECT_EQ(s.names(roots(s)), (std::vector<std::string>{"a9", "b1"}));
}

TEST(Parse, LineOrderIrrelevant) {
  const auto x = parse_text("a1 <- b1 + b2\nb1 <- a2\nb2 <- a1*a2\n");
  const auto y = parse_text("b2 <- a2*a1\nb1 <- a2\na1 <- b1 + b2\n");
  EXPECT_TRUE(semantically_equal(x, y));
  EXPECT_EQ(serialize_text(x), serialize_text(y));
  // Minterm order is kept in the text but carries no meaning.
  EXPECT_TRUE(semantically_equal(x, parse_text("b2 <- a2*a1\nb1 <- a2\na1 <- b2 + b1\n")));
}

TEST(Serialize, EmptySystem) {
  EXPECT_EQ(serialize_text(DependencySystem{}), "");
  EXPECT_TRUE(parse_text("").empty_set().empty());
}

TEST(Serialize, LongDeclarationsWrap) {
  SystemBuilder b;
  for (int i = 0; i < 60; ++i) b.add_entity("a_long_entity_" + std::to_string(i), Layer::A);
  const auto s = b.build();
  const auto text = serialize_text(s);
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    EXPECT_LE(nl - pos, 96u);
    pos = nl + 1;
  }
  EXPECT_TRUE(semantically_equal(parse_text(text), s));
}

TEST(RoundTrip, RandomSystems) {
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    for (auto c : {CaseClass::CaseI, CaseClass::CaseII, CaseClass::CaseIII, CaseClass::CaseIV}) {
      const auto s = ingest::random_system(seed, 3 + seed % 9, 2 + seed % 11, c);
      const auto text = serialize_text(s);
      const auto t = parse_text(text);
      ASSERT_TRUE(semantically_equal(s, t)) << text;
      EXPECT_EQ(serialize_text(t), text);
      ++checked;
    }
  }
  EXPECT_GE(checked, 500u);
}

TEST(RoundTrip, TwentyEntitySystem) {
  const auto s = ingest::random_system(20, 10, 10, CaseClass::CaseIV);
  EXPECT_EQ(s.size(), 20u);
  EXPECT_TRUE(semantically_equal(parse_text(serialize_text(s)), s));
}
