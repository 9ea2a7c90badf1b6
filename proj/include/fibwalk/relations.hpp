#pragma once

// Synchronized relation automata: numeration validity, linear equations over
// mixed Zeckendorf/Chung-Graham tracks, and the named builtin library.

#include "fibwalk/automata.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fibwalk {

/// What a track carries: a valid word of one system (Zeck, Cg) or unchecked
/// digit strings over that system's alphabet (Binary, Ternary).
enum class Domain { Zeck, Cg, Binary, Ternary };

System system_of(Domain d);
int max_digit(Domain d);
bool is_checked(Domain d);
Domain checked_domain(System s);
Domain raw_domain(System s);
std::string_view to_string(Domain d);

Alphabet alphabet_of(std::span<const Domain> domains);

/// Single-track validity automata.
Dfa zeck_valid();
Dfa cg_valid();

/// Tuples whose checked tracks carry valid words; raw tracks are free.
Dfa domain_universe(std::span<const Domain> domains);

/// sum_t coefficients[t] * val(track t) = constant.
struct LinearRelation {
    std::vector<std::int64_t> coefficients;
    std::int64_t constant = 0;
    std::vector<System> systems;
};

/// Carry of the most-significant-first synthesis: after reading a prefix,
/// `value` is the weighted value of the prefix read as a complete number and
/// `shifted` is the same prefix shifted down one place. Reading a column
/// with weighted digit sum s maps (value, shifted) to
/// (value + shifted + s, value + s).
struct DiffState {
    std::int64_t value = 0;
    std::int64_t shifted = 0;

    friend bool operator==(const DiffState&, const DiffState&) = default;
};

DiffState step(DiffState state, std::int64_t column_sum);

/// 2 * (sum_t |c_t| * max_digit_t + |c0|) + 4.
std::int64_t pruning_bound(const LinearRelation& rel);

/// LSD automaton accepting exactly the padded tuples of valid words whose
/// values satisfy the relation. `extra_bound` enlarges the pruning bound.
Dfa linear_eq(const LinearRelation& rel, std::int64_t extra_bound = 0,
              std::size_t max_states = kDefaultStateBudget);

/// Two-track relation (Zeckendorf u, Chung-Graham x) with u = x.
Dfa fibcg();

/// A named automaton together with what each of its tracks carries.
struct NamedAutomaton {
    Dfa dfa;
    std::vector<Domain> tracks;
};

/// Compiled once per process and cached; throws NameError for unknown names.
const NamedAutomaton& builtin(std::string_view name);
bool is_builtin(std::string_view name);
std::vector<std::string> builtin_names();

/// How a builtin is defined: "regex", "formula" or "native", plus its source text.
struct BuiltinSource {
    std::string_view kind;
    std::string_view source;
};
BuiltinSource builtin_source(std::string_view name);

}  // namespace fibwalk
