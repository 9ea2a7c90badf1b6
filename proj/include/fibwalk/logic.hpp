#pragma once

// First-order formulas over natural-number variables, compiled to automata.
//
// Surface syntax:
//   ?lsd_fib / ?lsd_cg      leading tag sets the default system; before a
//                           variable it tags that variable
//   E x,y ...  A x ...      quantifiers; the body extends as far right as possible
//   ~  &  |  =>  <=>        precedence from tightest to loosest
//   = != < <= > >=          comparisons between linear terms
//   x + 2*y - 3, (n+1)      linear terms over N
//   $name(t1, ..., tk)      call of a named automaton

#include "fibwalk/relations.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fibwalk::logic {

/// sum coefficients[v] * v + constant.
struct LinearTerm {
    std::map<std::string, std::int64_t> coefficients;
    std::int64_t constant = 0;

    bool is_variable() const;
    friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

/// A parsed term: its value plus the intermediate results of subtractions,
/// each of which must be a natural number.
struct Term {
    LinearTerm value;
    std::vector<LinearTerm> guards;
};

enum class Compare { Eq, Ne, Lt, Le, Gt, Ge };

struct Node {
    enum class Kind { Compare, Call, Not, And, Or, Implies, Iff, Exists, Forall };

    Kind kind = Kind::Compare;
    std::size_t position = 0;

    Compare op = Compare::Eq;
    Term lhs;
    Term rhs;

    std::string name;
    std::vector<Term> args;

    std::vector<std::string> variables;
    std::vector<Node> children;
};

struct Formula {
    Node root;
    System default_system = System::Zeck;
    /// Variables carrying an explicit system tag.
    std::map<std::string, System> tags;
    std::string source;

    System system_of(const std::string& variable) const;
    /// Free variables in order of first appearance.
    std::vector<std::string> free_variables() const;
};

/// Throws ParseError with the offending character position.
Formula parse(std::string_view source);

/// Immutable map of named automata; define() returns an extended copy.
/// Builtins are visible unless the environment was created without them.
class Environment {
public:
    explicit Environment(bool with_builtins = true, std::size_t max_states = kDefaultStateBudget);

    const NamedAutomaton* find(std::string_view name) const;
    bool contains(std::string_view name) const { return find(name) != nullptr; }
    /// Throws NameError if the name is already taken.
    Environment define(const std::string& name, NamedAutomaton automaton) const;

    std::size_t max_states() const noexcept { return max_states_; }
    Environment with_max_states(std::size_t max_states) const;
    std::vector<std::string> local_names() const;

private:
    using Map = std::map<std::string, std::shared_ptr<const NamedAutomaton>, std::less<>>;

    std::shared_ptr<const Map> defs_;
    bool builtins_;
    std::size_t max_states_;
};

/// Automaton over the free variables (first-appearance order), or a truth
/// value when the formula is closed.
struct Compiled {
    std::vector<std::string> variables;
    std::vector<Domain> domains;
    std::optional<Dfa> dfa;
    bool truth = false;

    NamedAutomaton named() const;
};

Compiled compile(const Formula& f, const Environment& env);
Compiled compile(std::string_view source, const Environment& env);

/// Throws Error if the formula has free variables.
bool eval_closed(const Formula& f, const Environment& env);
bool eval_closed(std::string_view source, const Environment& env);

/// "reg" definition: tracks given as domains.
Environment define_regex(const Environment& env, const std::string& name, std::string_view pattern,
                         const std::vector<Domain>& tracks);
/// "def" definition: compiles the formula over its free variables.
Environment define_formula(const Environment& env, const std::string& name, std::string_view source);

/// One line of a suite file.
struct SuiteResult {
    std::string name;
    std::string source;
    bool value = false;
    std::size_t line = 0;
};

/// Processes a suite: one statement per line, '#' comments.
///   reg NAME TRACK... "PATTERN"   TRACK is lsd_fib, lsd_cg, {0,1} or {0,1,2}
///   def NAME "FORMULA"
///   eval NAME "FORMULA"
/// A trailing ':' is allowed. Returns the extended environment and the
/// results of eval statements in order.
std::pair<Environment, std::vector<SuiteResult>> run_suite(const std::string& text, const Environment& env);

}  // namespace fibwalk::logic
