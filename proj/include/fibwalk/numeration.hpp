#pragma once

// Integer-side ground truth for the two Fibonacci numeration systems:
// Fibonacci numbers, Beatty floors, Zeckendorf and Chung-Graham codecs,
// shift operators and representation-based set membership.
//
// All digit words are LSD-first: digit i carries weight F_{i+2}.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <deque>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fibwalk {

using Natural = std::uint64_t;
using BigInt = boost::multiprecision::cpp_int;
using Digits = std::vector<std::uint8_t>;

/// Extend-only cache of F_0, F_1, ... in arbitrary precision.
/// Readers share a lock; growth takes it exclusively. Entries never move.
class FibCache {
public:
    FibCache();

    BigInt get(std::size_t m) const;

    /// Process-wide instance used by fib().
    static FibCache& global();

private:
    mutable std::shared_mutex mutex_;
    mutable std::deque<BigInt> values_;
};

BigInt fib(std::size_t m);

/// F_m as a 64-bit value; throws InvalidInput for m > 93.
Natural fib64(std::size_t m);

/// Largest r with r*r <= x.
Natural isqrt(unsigned __int128 x);

/// floor(n*phi), computed as floor((n + isqrt(5 n^2)) / 2).
Natural floor_phi(Natural n);
/// floor(n/phi) = floor(n*phi) - n.
Natural floor_inv_phi(Natural n);
/// floor(n*phi^2) = floor(n*phi) + n.
Natural floor_phi2(Natural n);

enum class System { Zeck, Cg };

std::string_view to_string(System s);
/// Largest digit of the system's alphabet (1 for Zeckendorf, 2 for Chung-Graham).
int max_digit(System s);

bool is_zeck_valid(std::span<const std::uint8_t> digits);
bool is_cg_valid(std::span<const std::uint8_t> digits);
bool is_valid(System s, std::span<const std::uint8_t> digits);

/// Value sum_i d_i F_{i+2}; throws InvalidInput on 64-bit overflow.
Natural digit_value(std::span<const std::uint8_t> digits);

/// Zeckendorf digit word. May carry trailing zeros; canonical() strips them.
class ZeckWord {
public:
    ZeckWord() = default;
    explicit ZeckWord(Digits digits);

    /// Parses a string of '0'/'1' characters, LSD-first.
    static ZeckWord parse(std::string_view text);

    const Digits& digits() const noexcept { return digits_; }
    std::size_t size() const noexcept { return digits_.size(); }
    bool is_canonical() const noexcept { return digits_.empty() || digits_.back() != 0; }
    ZeckWord canonical() const;
    std::string str() const;

    friend bool operator==(const ZeckWord&, const ZeckWord&) = default;

private:
    Digits digits_;
};

/// Chung-Graham digit word over {0,1,2}; odd positions are zero and two 2s
/// are always separated by a 0 at an even position.
class CGWord {
public:
    CGWord() = default;
    explicit CGWord(Digits digits);

    static CGWord parse(std::string_view text);

    const Digits& digits() const noexcept { return digits_; }
    std::size_t size() const noexcept { return digits_.size(); }
    bool is_canonical() const noexcept { return digits_.empty() || digits_.back() != 0; }
    CGWord canonical() const;
    std::string str() const;

    friend bool operator==(const CGWord&, const CGWord&) = default;

private:
    Digits digits_;
};

/// Greedy largest-Fibonacci-first encoding.
ZeckWord zeck_encode(Natural n);
Natural zeck_decode(const ZeckWord& w);

/// Pruned exhaustive MSD-first search; asserts the solution is unique.
CGWord cg_encode(Natural n);
Natural cg_decode(const CGWord& w);

/// Canonical digits of n in the given system.
Digits encode(System s, Natural n);
Natural decode(System s, std::span<const std::uint8_t> digits);

/// One zero prepended to the Zeckendorf word of n.
Natural shift_f(Natural n);
/// Two zeros prepended to the Zeckendorf word of n.
Natural shift_f2(Natural n);
/// Two zeros prepended to the Chung-Graham word of n.
Natural shift_cg2(Natural n);

enum class Parity { Even, Odd };

/// Index k of the smallest Fibonacci number F_k in the Zeckendorf sum of n >= 1.
std::size_t least_zeck_index(Natural n);
/// Index 2k of the smallest Fibonacci number in the Chung-Graham sum of n >= 1.
std::size_t least_cg_index(Natural n);

/// EVEN iff the smallest Fibonacci index in the Zeckendorf word of n is even.
/// Rejects n = 0.
Parity parity_class(Natural n);

/// sc(n) = 2 floor(n phi) + n + 1.
Natural sums_complement(Natural n);

/// Identifier of a named integer set.
class SetId {
public:
    enum class Kind { A, U, B, R, FEven, FOdd, SC };
    enum class Subclass { Any, One, Two };

    static SetId a(std::size_t k);
    static SetId u(std::size_t k);
    static SetId b(std::size_t two_k, Subclass sub = Subclass::Any);
    static SetId r(ZeckWord prefix);
    static SetId feven();
    static SetId fodd();
    static SetId sc();

    /// "A:k", "U:k", "B:2k", "B:2k:1", "B:2k:2", "R:word", "feven", "fodd", "sc".
    static SetId parse(std::string_view text);

    Kind kind() const noexcept { return kind_; }
    std::size_t index() const noexcept { return index_; }
    Subclass subclass() const noexcept { return subclass_; }
    const ZeckWord& prefix() const noexcept { return prefix_; }
    std::string str() const;

private:
    SetId(Kind kind, std::size_t index, Subclass sub, ZeckWord prefix)
        : kind_(kind), index_(index), subclass_(sub), prefix_(std::move(prefix)) {}

    Kind kind_;
    std::size_t index_ = 0;
    Subclass subclass_ = Subclass::Any;
    ZeckWord prefix_;
};

/// Representation-based membership (formula-based for SC).
bool member(const SetId& set, Natural n);

/// First `count` members of the set in ascending order.
std::vector<Natural> first_members(const SetId& set, std::size_t count);

/// Both evaluations of gamma_b for a prefix word b without "11", plus the
/// auxiliary sums X_b (over T_00) and Y_b (digit value of b).
struct GammaForms {
    std::int64_t dekking = 0;
    std::int64_t t00 = 0;
    std::int64_t x_b = 0;
    std::int64_t y_b = 0;
};

GammaForms gamma_b(const ZeckWord& b);

}  // namespace fibwalk
