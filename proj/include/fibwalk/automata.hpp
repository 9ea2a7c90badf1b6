#pragma once

// Multi-track finite automata over LSD-first digit columns.
//
// A symbol is one column of digits, one per track, flattened to a single
// mixed-radix index (track 0 is the least significant place). The all-zero
// column is always symbol 0.

#include "fibwalk/numeration.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace fibwalk {

using State = std::uint32_t;
using Symbol = std::uint32_t;

inline constexpr std::size_t kDefaultStateBudget = 1'000'000;

class Alphabet {
public:
    /// One entry per track: the largest digit on that track (1 or 2).
    explicit Alphabet(std::vector<int> max_digits);

    std::size_t tracks() const noexcept { return max_.size(); }
    int max_digit(std::size_t track) const { return max_.at(track); }
    const std::vector<int>& max_digits() const noexcept { return max_; }
    /// Number of tuple symbols.
    std::size_t size() const noexcept { return size_; }

    Symbol encode(std::span<const std::uint8_t> column) const;
    std::uint8_t digit(Symbol s, std::size_t track) const {
        return static_cast<std::uint8_t>((s / stride_[track]) % static_cast<Symbol>(max_[track] + 1));
    }
    std::vector<std::uint8_t> decode(Symbol s) const;
    /// "d1,d2,...,dk"
    std::string label(Symbol s) const;

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.max_ == b.max_; }

private:
    std::vector<int> max_;
    std::vector<Symbol> stride_;
    std::size_t size_ = 1;
};

/// Total deterministic automaton. Immutable once built.
class Dfa {
public:
    /// `transitions` is row-major: transitions[q * alphabet.size() + s].
    Dfa(Alphabet alphabet, std::size_t states, State initial, std::vector<char> accepting,
        std::vector<State> transitions);

    /// Accepts every word.
    static Dfa universal(const Alphabet& alphabet);
    /// Accepts nothing.
    static Dfa empty(const Alphabet& alphabet);

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t states() const noexcept { return states_; }
    State initial() const noexcept { return initial_; }
    bool accepting(State q) const { return accepting_[q] != 0; }
    const std::vector<char>& accepting_flags() const noexcept { return accepting_; }
    State next(State q, Symbol s) const { return table_[static_cast<std::size_t>(q) * alphabet_.size() + s]; }
    const std::vector<State>& table() const noexcept { return table_; }

    State run(std::span<const Symbol> word) const;
    bool accepts(std::span<const Symbol> word) const { return accepting(run(word)); }

    /// Structural equality (same numbering); isomorphism for canonical forms.
    friend bool operator==(const Dfa& a, const Dfa& b);

private:
    Alphabet alphabet_;
    std::size_t states_;
    State initial_;
    std::vector<char> accepting_;
    std::vector<State> table_;
};

/// Nondeterministic automaton with epsilon moves and several initial states.
class Nfa {
public:
    explicit Nfa(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}

    State add_state(bool accepting = false);
    void set_accepting(State q, bool value = true) { accepting_.at(q) = value ? 1 : 0; }
    void add_initial(State q) { initial_.push_back(q); }
    void add_transition(State from, Symbol s, State to);
    void add_epsilon(State from, State to) { epsilon_.at(from).push_back(to); }

    const Alphabet& alphabet() const noexcept { return alphabet_; }
    std::size_t states() const noexcept { return accepting_.size(); }
    const std::vector<State>& initial() const noexcept { return initial_; }
    bool accepting(State q) const { return accepting_[q] != 0; }
    const std::vector<State>& successors(State q, Symbol s) const { return delta_[q][s]; }
    const std::vector<State>& epsilon(State q) const { return epsilon_[q]; }

private:
    Alphabet alphabet_;
    std::vector<char> accepting_;
    std::vector<State> initial_;
    std::vector<std::vector<std::vector<State>>> delta_;
    std::vector<std::vector<State>> epsilon_;
};

enum class BoolOp { And, Or, Xor, Implies, Iff };

/// Subset construction over reachable subsets; throws StateBudgetExceeded.
Dfa determinize(const Nfa& nfa, std::size_t max_states = kDefaultStateBudget);

/// Reverses every edge; initial and accepting states swap roles.
Nfa reverse(const Dfa& a);

Dfa complement(const Dfa& a);

/// Reachable synchronous product; throws AlphabetMismatch.
Dfa product(const Dfa& a, const Dfa& b, BoolOp op, std::size_t max_states = kDefaultStateBudget);

/// Canonical minimal automaton: unreachable states removed, Hopcroft
/// refinement, states numbered in BFS order from the initial state.
Dfa minimize(const Dfa& a);

bool is_empty(const Dfa& a);
bool is_universal(const Dfa& a);

/// Same language; decided by comparing canonical minimal forms.
bool equivalent(const Dfa& a, const Dfa& b);

/// Closes the language under adding and removing trailing all-zero columns:
/// the result accepts w iff some w' that differs from w only in trailing
/// zero columns is accepted.
Dfa pad_close(const Dfa& a, std::size_t max_states = kDefaultStateBudget);

/// Existential quantification of one track: drop it, determinize, minimize,
/// then pad-close so a shorter witness is not lost.
Dfa project(const Dfa& a, std::size_t track, std::size_t max_states = kDefaultStateBudget);

/// Re-expresses `a` over `target`, where track t of `a` becomes track
/// track_map[t] of the result. Unmapped target tracks are unconstrained.
Dfa remap_tracks(const Dfa& a, const Alphabet& target, std::span<const std::size_t> track_map);

/// Runs `a` on one digit word per track, padded with zeros to a common length.
bool accepts_digits(const Dfa& a, std::span<const Digits> tracks);

/// Encodes one value per track in its system and runs the automaton.
bool member_int(const Dfa& a, std::span<const Natural> values, std::span<const System> systems);

/// Ascending values accepted on `track` (other tracks projected away first),
/// scanning n = 0, 1, ... until `limit` hits or `max_scan` candidates.
std::vector<Natural> enumerate(const Dfa& a, std::size_t track, System system, std::size_t limit,
                               Natural max_scan = 10'000'000);

/// Line-oriented text format:
///   tracks k m1 .. mk / states n / initial i / accepting i1 i2 .. /
///   one "src d1,..,dk dst" line per (state, symbol).
std::string serialize(const Dfa& a);
/// Throws FormatError carrying the offending line number.
Dfa deserialize(const std::string& text);

/// Graphviz digraph; accepting states are double circles, one edge per (state, symbol).
std::string to_dot(const Dfa& a, const std::string& name = "dfa");

}  // namespace fibwalk
