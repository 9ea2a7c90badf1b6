#pragma once

// Regular expressions over tuple alphabets, as used by "reg" definitions:
//   digits            0 1 2          (single-track alphabets)
//   digit classes     [1|2] [0|1|2]  (single-track alphabets)
//   tuples            [1,0] [0,2]    (arity = number of tracks)
//   grouping ( ), alternation |, Kleene star *
// Concatenation binds tighter than alternation; * binds tightest.

#include "fibwalk/automata.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace fibwalk {

struct RegexAst {
    enum class Kind { Empty, Symbol, Alt, Concat, Star };

    Kind kind = Kind::Empty;
    Symbol symbol = 0;
    std::vector<RegexAst> children;

    static RegexAst empty() { return {}; }
    static RegexAst sym(Symbol s) { return {Kind::Symbol, s, {}}; }
};

/// Throws ParseError with the offending character position.
RegexAst regex_parse(std::string_view pattern, const Alphabet& alphabet);

/// Fully parenthesized rendering, e.g. "((0.0)*.1.(0|1)*)"; tuple symbols
/// print as "[d1,d2]".
std::string to_string(const RegexAst& ast, const Alphabet& alphabet);

/// Thompson construction, subset construction, minimization.
Dfa regex_to_dfa(const RegexAst& ast, const Alphabet& alphabet, std::size_t max_states = kDefaultStateBudget);

/// regex_parse followed by regex_to_dfa.
Dfa compile_regex(std::string_view pattern, const Alphabet& alphabet, std::size_t max_states = kDefaultStateBudget);

}  // namespace fibwalk
