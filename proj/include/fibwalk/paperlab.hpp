#pragma once

// Re-verification harness: each statement is checked by brute-force scans
// over representations and, where a first-order form exists, by the
// automaton engine.

#include "fibwalk/logic.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fibwalk::paperlab {

enum class Mode { Oracle, Automata, Both };
enum class Verdict { Pass, Fail, PassVacuous };

std::string_view to_string(Mode m);
std::string_view to_string(Verdict v);

struct CheckReport {
    std::string id;
    Mode mode = Mode::Oracle;
    std::string range;
    Verdict verdict = Verdict::Pass;
    /// Present whenever verdict is Fail.
    std::optional<std::string> counterexample;
    double seconds = 0.0;
    std::string notes;

    bool ok() const { return verdict != Verdict::Fail; }
};

struct Config {
    Natural max_n = 50'000;
    /// Bound for exhaustive pair scans.
    Natural max_pair = 2'000;
    std::size_t max_k = 12;
    /// Prefix length for the gamma identity.
    std::size_t max_len = 18;
    /// Prefix length for the prefix-set theorem.
    std::size_t max_prefix = 14;
    std::size_t max_m = 25;
    Natural max_shift_n = 10'000;
    std::size_t eq5_max_m = 40;
    std::size_t threads = 0;  // 0: hardware concurrency
    std::size_t max_states = kDefaultStateBudget;
};

/// A transcribed closed formula and the truth value asserted for it.
struct Proposition {
    std::string id;
    std::string source;
    bool expected;
};

/// Definitions the propositions rely on beyond the builtins.
const std::vector<std::pair<std::string, std::string>>& proposition_definitions();
const std::vector<Proposition>& propositions();
/// Builtins plus proposition_definitions().
logic::Environment proposition_environment(std::size_t max_states = kDefaultStateBudget);

/// Evaluates one proposition. For a universal statement that fails, the
/// smallest value of its first quantified variable violating the body is
/// reported.
CheckReport check_proposition(const Proposition& p, const logic::Environment& env);

/// Compares two predicates on lo..hi; the counterexample is the smallest
/// disagreeing value. An empty range gives PassVacuous.
CheckReport compare_sets(std::string id, const std::function<bool(Natural)>& lhs,
                         const std::function<bool(Natural)>& rhs, Natural lo, Natural hi);

CheckReport check_kimberling(Natural max_n, const logic::Environment& env);
CheckReport check_griffiths(std::size_t max_k, Natural max_n, const logic::Environment& env);
CheckReport check_U(std::size_t max_k, Natural max_n, const logic::Environment& env);
CheckReport check_avoid_Fk(std::size_t max_k, Natural max_n);
CheckReport check_dekking(std::size_t max_len, Natural max_n);
CheckReport check_gamma(std::size_t max_len);
std::vector<CheckReport> check_shifts(std::size_t max_m, Natural max_n);
std::vector<CheckReport> check_cg_suite(std::size_t max_k, Natural max_n, Natural max_pair,
                                        const logic::Environment& env);
CheckReport check_eq5(std::size_t max_m);

/// Every check, run concurrently, reported in a fixed order.
std::vector<CheckReport> verify_all(const Config& config);

/// Aligned human-readable table.
std::string format_table(const std::vector<CheckReport>& reports);
/// One "id<TAB>verdict<TAB>range<TAB>counterexample" line per report.
std::string format_machine(const std::vector<CheckReport>& reports);

}  // namespace fibwalk::paperlab
