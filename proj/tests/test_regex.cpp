#include "fibwalk/error.hpp"
#include "fibwalk/regex.hpp"

#include <gtest/gtest.h>

#include <regex>

using namespace fibwalk;

namespace {

const Alphabet kBin({1});
const Alphabet kTer({2});
const Alphabet kPair({1, 1});

std::string word_string(std::size_t bits, std::size_t len) {
    std::string s;
    for (std::size_t i = 0; i < len; ++i) {
        s.push_back(((bits >> i) & 1U) ? '1' : '0');
    }
    return s;
}

std::vector<Symbol> symbols(const std::string& s) {
    std::vector<Symbol> out;
    for (char c : s) {
        out.push_back(static_cast<Symbol>(c - '0'));
    }
    return out;
}

std::size_t error_position(std::string_view pattern, const Alphabet& alpha) {
    try {
        regex_parse(pattern, alpha);
    } catch (const ParseError& e) {
        return e.position();
    }
    return std::string::npos;
}

}  // namespace

TEST(Regex, AgreesWithStdRegexOnSingleTrack) {
    // std::regex with ECMAScript syntax serves as the reference matcher.
    const std::vector<std::string> patterns{"(00)*1(0|1)*", "0(00)*1(0|1)*", "1(0|1)*", "00(0|1)*",
                                            "(0|10)*", "(1|01)*0*", "0*"};
    for (const auto& p : patterns) {
        const Dfa dfa = compile_regex(p, kBin);
        const std::regex ref(p);
        for (std::size_t len = 0; len <= 10; ++len) {
            for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
                const std::string w = word_string(bits, len);
                ASSERT_EQ(dfa.accepts(symbols(w)), std::regex_match(w, ref)) << p << " on " << w;
            }
        }
    }
}

TEST(Regex, DigitClasses) {
    const Dfa b2 = compile_regex("[1|2][0|1|2]*", kTer);
    EXPECT_TRUE(b2.accepts(std::vector<Symbol>{2, 0}));
    EXPECT_TRUE(b2.accepts(std::vector<Symbol>{1}));
    EXPECT_FALSE(b2.accepts(std::vector<Symbol>{0, 1}));
    EXPECT_FALSE(b2.accepts(std::vector<Symbol>{}));
}

TEST(Regex, Tuples) {
    const Dfa shift = compile_regex("([0,0]|([1,0][1,1]*[0,1]))*", kPair);
    const std::vector<Digits> yes{{1, 0, 1, 0}, {0, 1, 0, 1}};
    const std::vector<Digits> no{{1, 0}, {1, 0}};
    EXPECT_TRUE(accepts_digits(shift, yes));
    EXPECT_FALSE(accepts_digits(shift, no));
}

TEST(Regex, RenderingIsFullyParenthesized) {
    EXPECT_EQ(to_string(regex_parse("(00)*1(0|1)*", kBin), kBin), "((0.0)*.1.(0|1)*)");
    EXPECT_EQ(to_string(regex_parse("[1,0]", kPair), kPair), "[1,0]");
}

TEST(Regex, RenderingReparsesToSameLanguage) {
    for (const char* p : {"(00)*1(0|1)*", "1|0*", "((1))", "0(1|00)*"}) {
        const std::string printed = to_string(regex_parse(p, kBin), kBin);
        std::string stripped;
        for (char c : printed) {
            if (c != '.') {
                stripped.push_back(c);
            }
        }
        EXPECT_TRUE(equivalent(compile_regex(p, kBin), compile_regex(stripped, kBin))) << p;
    }
}

TEST(Regex, ErrorsReportPositions) {
    EXPECT_EQ(error_position("(01", kBin), 0u);
    EXPECT_EQ(error_position("01)", kBin), 2u);
    EXPECT_EQ(error_position("2", kBin), 0u);
    EXPECT_EQ(error_position("0[1,0]", kBin), 1u);
    EXPECT_EQ(error_position("[1,2]", kPair), 0u);
    EXPECT_EQ(error_position("0x", kBin), 1u);
    EXPECT_EQ(error_position("*", kBin), 0u);
}

TEST(Regex, StateBudget) {
    // (0|1)*1(0|1)^n needs 2^(n+1) subset states.
    std::string p = "(0|1)*1";
    for (int i = 0; i < 14; ++i) {
        p += "(0|1)";
    }
    EXPECT_THROW(compile_regex(p, kBin, 1000), StateBudgetExceeded);
    EXPECT_NO_THROW(compile_regex(p, kBin, 100000));
}
