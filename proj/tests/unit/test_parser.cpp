#include <gtest/gtest.h>

#include <string>

#include "cefr/python/lexer.hpp"
#include "cefr/python/parser.hpp"

namespace {

using cefr::python::ParseError;
using cefr::python::parse_module;
using cefr::python::TokenType;

bool parses(const std::string& source) {
  try {
    parse_module(source);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

TEST(Lexer, IndentDedentBalance) {
  const auto tokens = cefr::python::tokenize("if x:\n    y = 1\n    if z:\n        w\nv\n");
  int depth = 0, max_depth = 0;
  for (const auto& t : tokens) {
    if (t.type == TokenType::Indent) max_depth = std::max(max_depth, ++depth);
    if (t.type == TokenType::Dedent) --depth;
  }
  EXPECT_EQ(depth, 0);
  EXPECT_EQ(max_depth, 2);
  EXPECT_EQ(tokens.back().type, TokenType::End);
}

TEST(Lexer, ImplicitLineJoiningInsideBrackets) {
  const auto tokens = cefr::python::tokenize("x = (1,\n     2)\n");
  int newlines = 0;
  for (const auto& t : tokens) newlines += t.type == TokenType::Newline;
  EXPECT_EQ(newlines, 1);
}

TEST(Lexer, FStringFieldsCarryLines) {
  const auto tokens = cefr::python::tokenize("s = f'{a} and {b!r:>{w}}'\n");
  const auto& s = tokens[2];
  ASSERT_EQ(s.type, TokenType::String);
  EXPECT_TRUE(s.is_fstring);
  ASSERT_GE(s.fields.size(), 2u);
  EXPECT_EQ(s.fields[0].expression, "a");
  EXPECT_EQ(s.fields[0].line, 1);
}

TEST(Parser, AcceptsModernSyntax) {
  EXPECT_TRUE(parses(""));
  EXPECT_TRUE(parses("x = 1\n"));
  EXPECT_TRUE(parses("async def f():\n    async with a as b, c:\n        await b\n"));
  EXPECT_TRUE(parses("if (n := len(a)) > 10:\n    pass\n"));
  EXPECT_TRUE(parses("def f(a, /, b, *, c):\n    pass\n"));
  EXPECT_TRUE(parses("match p:\n    case [x, *rest] if x:\n        pass\n    case _:\n        pass\n"));
  EXPECT_TRUE(parses("with (open(a) as f,\n      open(b) as g):\n    pass\n"));
  EXPECT_TRUE(parses("x: list[int] = []\n"));
  EXPECT_TRUE(parses("print(*a, **k)\n"));
  EXPECT_TRUE(parses("s = f'{x!r:>{width}}'\n"));
  EXPECT_TRUE(parses("try:\n    pass\nexcept* ValueError:\n    pass\n"));
  EXPECT_TRUE(parses("match = 1\ncase = 2\ntype = 3\n"));
  EXPECT_TRUE(parses("@a.b(c)\nclass K(Base, metaclass=M):\n    x = 1\n"));
  EXPECT_TRUE(parses("lambda *a, k=1, **kw: (a, k, kw)\n"));
  EXPECT_TRUE(parses("x = 1; y = 2\n"));
  EXPECT_TRUE(parses("x = [\n  1,\n  2,\n]\n"));
  EXPECT_TRUE(parses("def f():\n    return\n"));
  EXPECT_TRUE(parses("# only a comment"));
}

TEST(Parser, RejectsPython2) {
  EXPECT_FALSE(parses("print 'hello'\n"));
  EXPECT_FALSE(parses("exec 'code'\n"));
  EXPECT_FALSE(parses("x = `y`\n"));
  EXPECT_FALSE(parses("if a <> b:\n    pass\n"));
  EXPECT_FALSE(parses("n = 0777\n"));
  EXPECT_FALSE(parses("s = ur'x'\n"));
  EXPECT_FALSE(parses("try:\n    pass\nexcept ValueError, e:\n    pass\n"));
  EXPECT_FALSE(parses("raise ValueError, 'x'\n"));
  EXPECT_FALSE(parses("def f((a, b)):\n    pass\n"));
}

TEST(Parser, RejectsBrokenSource) {
  EXPECT_FALSE(parses("def f(:\n"));
  EXPECT_FALSE(parses("if x\n    pass\n"));
  EXPECT_FALSE(parses("x = (1, 2\n"));
  EXPECT_FALSE(parses("  x = 1\n"));
  EXPECT_FALSE(parses("if x:\npass\n"));
  EXPECT_FALSE(parses("x = 1 +\n"));
  EXPECT_FALSE(parses("f() = 1\n"));
  EXPECT_FALSE(parses("return = 3\n"));
  EXPECT_FALSE(parses("s = 'unterminated\n"));
}

TEST(Parser, InconsistentTabsRejected) {
  EXPECT_FALSE(parses("if x:\n        a = 1\n\tb = 2\n"));
}

TEST(Parser, ErrorCarriesLine) {
  try {
    parse_module("x = 1\ny = 2\nz = (\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GE(e.line(), 3);
  }
}

TEST(Parser, DeepNestingDoesNotCrash) {
  std::string source = "x = " + std::string(2000, '(') + "1" + std::string(2000, ')') + "\n";
  try {
    parse_module(source);
  } catch (const ParseError&) {
    SUCCEED();
  }
  std::string chain = "x = 1";
  for (int i = 0; i < 20000; ++i) chain += " + 1";
  EXPECT_TRUE(parses(chain + "\n"));
}

}  // namespace
