#include <gtest/gtest.h>

#include <random>

#include "ast_gen.hpp"

namespace tbl {
namespace {

constexpr int kAsts = 10000;

TEST(NetlistFuzz, FormatParseRoundTrip) {
  oracle::AstGenerator gen(0x7b1u);
  for (int i = 0; i < kAsts; ++i) {
    const CircuitAst ast = gen.next();
    const std::string text = format(ast);
    CircuitAst back;
    ASSERT_NO_THROW(back = parse(text)) << "case " << i << ":\n" << text;
    ASSERT_EQ(back, ast) << "case " << i << ":\n" << text;
    // Canonical text is a fixed point.
    ASSERT_EQ(format(back), text) << "case " << i;
  }
}

TEST(NetlistFuzz, MutatedTextOnlyRaisesLocatedErrors) {
  oracle::AstGenerator gen(0xbadu);
  std::mt19937_64 rng(99);
  static constexpr std::string_view kNoise = "=,#.-+eE \t0123456789kPamLcs\n\"x";
  for (int i = 0; i < kAsts; ++i) {
    std::string text = format(gen.next());
    if (text.empty()) continue;
    const int edits = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int e = 0; e < edits; ++e) {
      const auto pos = std::uniform_int_distribution<std::size_t>(0, text.size() - 1)(rng);
      const char c = kNoise[std::uniform_int_distribution<std::size_t>(0, kNoise.size() - 1)(rng)];
      switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: text[pos] = c; break;
        case 1: text.insert(pos, 1, c); break;
        default: text.erase(pos, 1); break;
      }
    }
    try {
      const CircuitAst ast = parse(text);
      ASSERT_EQ(parse(format(ast)), ast) << text;
    } catch (const Error& e) {
      ASSERT_TRUE(e.where().has_value()) << e.what();
      ASSERT_GE(e.where()->line, 1);
      ASSERT_GE(e.where()->column, 1);
    }
  }
}

}  // namespace
}  // namespace tbl
