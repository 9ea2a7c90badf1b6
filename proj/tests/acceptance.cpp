// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include "fibwalk/error.hpp"
#include "fibwalk/logic.hpp"
#include "fibwalk/paperlab.hpp"
#include "fibwalk/quad.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace fibwalk;

namespace {

// Pinned limits. All value comparisons are exact.
constexpr Natural kRoundtripMax = 1'000'000;
constexpr Natural kUniqueMax = 10'000;
constexpr double kCodecSeconds = 60.0;
constexpr double kPropositionSeconds = 10.0;
constexpr Natural kOracleN = 50'000;
constexpr std::size_t kOracleK = 12;
constexpr std::size_t kPrefixLen = 14;
constexpr Natural kPairMax = 2'000;
constexpr double kOracleSeconds = 300.0;
constexpr std::size_t kShiftM = 25;
constexpr Natural kShiftN = 10'000;
constexpr std::size_t kGammaLen = 18;
constexpr Natural kAddMax = 2'000;
constexpr Natural kFibcgMax = 100'000;
constexpr Natural kUnequalMax = 300;
constexpr Natural kGraphMax = 10'000;
constexpr Natural kProjectMax = 300;
constexpr std::size_t kWitnessPad = 4;
constexpr long long kEq5Max = 40;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) {
            detail = why;
        }
        pass = false;
    }
};

int failures = 0;

void criterion(int number, const std::string& title, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2fs", since(t0));
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << number << "] " << title << "  (" << secs
              << (o.detail.empty() ? "" : "; " + o.detail) << ")" << std::endl;
    failures += o.pass ? 0 : 1;
}

std::vector<System> systems_of(const NamedAutomaton& a) {
    std::vector<System> s;
    for (Domain d : a.tracks) {
        s.push_back(system_of(d));
    }
    return s;
}

// Words of the given length accepted by a digit-by-digit validity rule,
// visited with their value. Values use a locally computed Fibonacci table.
void walk_words(std::size_t len, int max_d, const std::function<bool(const Digits&, std::size_t)>& extend_ok,
                const std::function<void(const Digits&, Natural)>& visit) {
    std::vector<Natural> f{0, 1};
    while (f.size() < len + 3) {
        f.push_back(f[f.size() - 1] + f[f.size() - 2]);
    }
    Digits d;
    std::function<void(Natural)> rec = [&](Natural value) {
        visit(d, value);
        if (d.size() == len) {
            return;
        }
        for (int x = 0; x <= max_d; ++x) {
            d.push_back(static_cast<std::uint8_t>(x));
            if (extend_ok(d, d.size() - 1)) {
                rec(value + static_cast<Natural>(x) * f[d.size() + 1]);
            }
            d.pop_back();
        }
    };
    rec(0);
}

Outcome codec_soundness() {
    Outcome o;
    const auto t0 = Clock::now();
    for (Natural n = 0; n <= kRoundtripMax; ++n) {
        const ZeckWord z = zeck_encode(n);
        const CGWord c = cg_encode(n);
        if (!is_zeck_valid(z.digits()) || zeck_decode(z) != n || !z.is_canonical()) {
            o.fail("zeckendorf roundtrip n=" + std::to_string(n));
            return o;
        }
        if (!is_cg_valid(c.digits()) || cg_decode(c) != n || !c.is_canonical()) {
            o.fail("chung-graham roundtrip n=" + std::to_string(n));
            return o;
        }
    }
    // Uniqueness: count canonical valid words (no trailing zero) per value.
    const std::size_t len = 22;
    std::vector<int> zeck_count(kUniqueMax + 1, 0);
    std::vector<int> cg_count(kUniqueMax + 1, 0);
    walk_words(
        len, 1, [](const Digits& d, std::size_t i) { return i == 0 || !(d[i] == 1 && d[i - 1] == 1); },
        [&](const Digits& d, Natural v) {
            if ((d.empty() || d.back() != 0) && v <= kUniqueMax) {
                ++zeck_count[v];
            }
        });
    walk_words(
        len, 2,
        [](const Digits& d, std::size_t i) {
            if (i % 2 == 1) {
                return d[i] == 0;
            }
            if (d[i] != 2) {
                return true;
            }
            for (std::size_t j = i; j-- > 0;) {
                if (j % 2 == 0 && d[j] == 0) {
                    return true;
                }
                if (d[j] == 2) {
                    return false;
                }
            }
            return true;
        },
        [&](const Digits& d, Natural v) {
            if ((d.empty() || d.back() != 0) && v <= kUniqueMax) {
                ++cg_count[v];
            }
        });
    for (Natural n = 0; n <= kUniqueMax; ++n) {
        if (zeck_count[n] != 1 || cg_count[n] != 1) {
            o.fail("uniqueness n=" + std::to_string(n) + " zeck=" + std::to_string(zeck_count[n]) +
                   " cg=" + std::to_string(cg_count[n]));
            return o;
        }
    }
    const double s = since(t0);
    if (s >= kCodecSeconds) {
        o.fail("runtime " + std::to_string(s) + "s over limit");
    }
    o.detail = "roundtrip n<=" + std::to_string(kRoundtripMax) + ", unique n<=" + std::to_string(kUniqueMax);
    return o;
}

Outcome propositions() {
    Outcome o;
    const logic::Environment env = paperlab::proposition_environment();
    std::size_t matched = 0;
    std::string wrong;
    for (const auto& p : paperlab::propositions()) {
        const auto t0 = Clock::now();
        const bool value = logic::eval_closed(p.source, env);
        const double s = since(t0);
        if (value == p.expected && s < kPropositionSeconds) {
            ++matched;
            continue;
        }
        const paperlab::CheckReport r = paperlab::check_proposition(p, env);
        wrong += (wrong.empty() ? "" : ", ") + p.id + " got " + (value ? "TRUE" : "FALSE") +
                 (r.counterexample ? " [" + *r.counterexample + "]" : "");
        if (s >= kPropositionSeconds) {
            wrong += " too slow";
        }
    }
    const std::size_t total = paperlab::propositions().size();
    o.detail = std::to_string(matched) + "/" + std::to_string(total) + " match asserted values";
    if (!wrong.empty()) {
        o.fail(o.detail + "; " + wrong);
    }
    return o;
}

Outcome merge(const std::vector<paperlab::CheckReport>& reports, const std::string& summary) {
    Outcome o;
    o.detail = std::to_string(reports.size()) + " checks, " + summary;
    for (const auto& r : reports) {
        if (!r.ok()) {
            o.fail(r.id + " " + r.counterexample.value_or("-"));
        }
    }
    return o;
}

Outcome oracle_suite() {
    const auto t0 = Clock::now();
    const logic::Environment env = paperlab::proposition_environment();
    std::vector<paperlab::CheckReport> reports;
    reports.push_back(paperlab::check_kimberling(kOracleN, env));
    reports.push_back(paperlab::check_griffiths(kOracleK, kOracleN, env));
    reports.push_back(paperlab::check_U(kOracleK, kOracleN, env));
    reports.push_back(paperlab::check_avoid_Fk(kOracleK, kOracleN));
    reports.push_back(paperlab::check_dekking(kPrefixLen, kOracleN));
    for (auto& r : paperlab::check_cg_suite(kOracleK, kOracleN, kPairMax, env)) {
        reports.push_back(std::move(r));
    }
    Outcome o = merge(reports, "n<=" + std::to_string(kOracleN) + " k<=" + std::to_string(kOracleK) +
                                   " |b|<=" + std::to_string(kPrefixLen));
    const double s = since(t0);
    if (s >= kOracleSeconds) {
        o.fail("runtime " + std::to_string(s) + "s over limit");
    }
    return o;
}

Outcome shifts() {
    return merge(paperlab::check_shifts(kShiftM, kShiftN),
                 "m<=" + std::to_string(kShiftM) + " n<=" + std::to_string(kShiftN));
}

Outcome gamma_forms() {
    Outcome o = merge({paperlab::check_gamma(kGammaLen)}, "|b|<=" + std::to_string(kGammaLen));
    // Independent count of the prefix words: non-empty words without "11".
    std::size_t words = 0;
    std::size_t agree = 0;
    walk_words(
        kGammaLen, 1, [](const Digits& d, std::size_t i) { return i == 0 || !(d[i] == 1 && d[i - 1] == 1); },
        [&](const Digits& d, Natural) {
            if (d.empty()) {
                return;
            }
            ++words;
            const GammaForms g = gamma_b(ZeckWord(d));
            agree += g.dekking == g.t00 ? 1 : 0;
        });
    o.detail += ", " + std::to_string(agree) + "/" + std::to_string(words) + " words agree";
    if (agree != words) {
        o.fail(std::to_string(words - agree) + " words disagree");
    }
    return o;
}

Outcome synthesis() {
    Outcome o;
    const std::vector<System> zzz{System::Zeck, System::Zeck, System::Zeck};
    const Dfa add = linear_eq({{1, 1, -1}, 0, zzz});
    for (Natural x = 0; x <= kAddMax; ++x) {
        for (Natural y = 0; y <= kAddMax; ++y) {
            const std::vector<Natural> yes{x, y, x + y};
            const std::vector<Natural> no{x, y, x + y + 1};
            if (!member_int(add, yes, zzz) || member_int(add, no, zzz)) {
                o.fail("x+y=z at x=" + std::to_string(x) + " y=" + std::to_string(y));
                return o;
            }
        }
    }
    const Dfa fc = fibcg();
    const std::vector<System> zc{System::Zeck, System::Cg};
    for (Natural n = 0; n <= kFibcgMax; ++n) {
        const std::vector<Digits> tracks{zeck_encode(n).digits(), cg_encode(n).digits()};
        if (!accepts_digits(fc, tracks)) {
            o.fail("fibcg rejects n=" + std::to_string(n));
            return o;
        }
    }
    for (Natural u = 0; u <= kUnequalMax; ++u) {
        for (Natural x = 0; x <= kUnequalMax; ++x) {
            const std::vector<Natural> v{u, x};
            if (u != x && member_int(fc, v, zc)) {
                o.fail("fibcg accepts " + std::to_string(u) + "!=" + std::to_string(x));
                return o;
            }
        }
    }
    const logic::Environment env(true);
    for (const char* name : {"phinlsd", "noverphilsd"}) {
        const std::string total = std::string("An Ey $") + name + "(n,y)";
        const std::string single = std::string("An,y,z ($") + name + "(n,y) & $" + name + "(n,z)) => y=z";
        if (!logic::eval_closed(total, env) || !logic::eval_closed(single, env)) {
            o.fail(std::string(name) + " is not a function graph");
            return o;
        }
        const Dfa& d = builtin(name).dfa;
        const std::vector<System> zz{System::Zeck, System::Zeck};
        for (Natural n = 0; n <= kGraphMax; ++n) {
            const Natural y = std::string(name) == "phinlsd" ? floor_phi(n) : floor_inv_phi(n);
            const std::vector<Natural> at{n, y};
            const std::vector<Natural> above{n, y + 1};
            if (!member_int(d, at, zz) || member_int(d, above, zz)) {
                o.fail(std::string(name) + " disagrees at n=" + std::to_string(n));
                return o;
            }
        }
    }
    o.detail = "add x,y<=" + std::to_string(kAddMax) + ", fibcg n<=" + std::to_string(kFibcgMax) +
               ", graphs n<=" + std::to_string(kGraphMax);
    return o;
}

// Whether some digit string on the other track of a two-track automaton,
// of length at most |word| + kWitnessPad, completes `word` (zero padded) to
// an accepted pair. Explicit search over all digit choices.
bool has_witness(const Dfa& d, std::size_t keep, const Digits& word) {
    const Alphabet& alpha = d.alphabet();
    const std::size_t other = 1 - keep;
    std::vector<char> current(d.states(), 0);
    current[d.initial()] = 1;
    for (std::size_t i = 0; i < word.size() + kWitnessPad; ++i) {
        if (i >= word.size()) {
            for (State q = 0; q < d.states(); ++q) {
                if (current[q] && d.accepting(q)) {
                    return true;
                }
            }
        }
        std::vector<char> next(d.states(), 0);
        for (State q = 0; q < d.states(); ++q) {
            if (!current[q]) {
                continue;
            }
            for (int digit = 0; digit <= alpha.max_digit(other); ++digit) {
                std::vector<std::uint8_t> column(2);
                column[keep] = i < word.size() ? word[i] : 0;
                column[other] = static_cast<std::uint8_t>(digit);
                next[d.next(q, alpha.encode(column))] = 1;
            }
        }
        current = std::move(next);
    }
    for (State q = 0; q < d.states(); ++q) {
        if (current[q] && d.accepting(q)) {
            return true;
        }
    }
    return false;
}

Outcome engine_algebra() {
    Outcome o;
    std::size_t projections = 0;
    for (const auto& name : builtin_names()) {
        const NamedAutomaton& a = builtin(name);
        const Dfa& d = a.dfa;
        const Dfa u = domain_universe(a.tracks);
        if (!(minimize(minimize(d)) == minimize(d))) {
            o.fail(name + ": minimize not idempotent");
        }
        if (!equivalent(complement(product(d, u, BoolOp::And)),
                        product(complement(d), complement(u), BoolOp::Or)) ||
            !equivalent(complement(product(d, u, BoolOp::Or)),
                        product(complement(d), complement(u), BoolOp::And))) {
            o.fail(name + ": De Morgan");
        }
        if (!equivalent(pad_close(d), d)) {
            o.fail(name + ": not closed under padding");
        }
        if (a.tracks.size() != 2) {
            continue;
        }
        const std::vector<System> sys = systems_of(a);
        for (std::size_t drop = 0; drop < 2; ++drop) {
            const std::size_t keep = 1 - drop;
            const Dfa p = project(d, drop);
            const std::vector<System> keep_sys{sys[keep]};
            for (Natural v = 0; v <= kProjectMax; ++v) {
                const Digits word = encode(sys[keep], v);
                const std::vector<Natural> one{v};
                if (member_int(p, one, keep_sys) != has_witness(d, keep, word)) {
                    o.fail(name + ": projection of track " + std::to_string(drop) + " at " + std::to_string(v));
                    break;
                }
            }
            ++projections;
        }
    }
    if (o.pass) {
        o.detail = std::to_string(builtin_names().size()) + " builtins, " + std::to_string(projections) +
                   " projections checked to " + std::to_string(kProjectMax);
    }
    return o;
}

Outcome eq5() {
    Outcome o = merge({paperlab::check_eq5(static_cast<std::size_t>(kEq5Max))}, "1<=m<=" + std::to_string(kEq5Max));
    // Independent: F_m phi^j + (-phi)^(-m) = F_{m+j} for j = 1, 2.
    const QuadExact phi = QuadExact::phi();
    const QuadExact minus_phi = -phi;
    for (long long m = 1; m <= kEq5Max; ++m) {
        const QuadExact fm(static_cast<long long>(fib64(static_cast<std::size_t>(m))));
        const QuadExact tail = minus_phi.pow(-m);
        const QuadExact f1(static_cast<long long>(fib64(static_cast<std::size_t>(m + 1))));
        const QuadExact f2(static_cast<long long>(fib64(static_cast<std::size_t>(m + 2))));
        if (!(fm * phi + tail == f1) || !(fm * phi * phi + tail == f2)) {
            o.fail("identity fails at m=" + std::to_string(m));
        }
    }
    return o;
}

Outcome serialization() {
    Outcome o;
    const std::regex header(R"(digraph "[^"]*" \{)");
    const std::regex line(
        R"(  (rankdir=LR|node \[shape=circle\]|__start \[shape=point\]|__start -> \d+|\d+ \[shape=doublecircle\]|\d+ -> \d+ \[label="[0-9,]+"\]);)");
    for (const auto& name : builtin_names()) {
        const Dfa& d = builtin(name).dfa;
        const Dfa back = deserialize(serialize(d));
        if (!(back == d) || !equivalent(back, d)) {
            o.fail(name + ": serialization roundtrip");
        }
        std::istringstream in(to_dot(d, name));
        std::string l;
        std::size_t edges = 0;
        bool ok = std::getline(in, l) && std::regex_match(l, header);
        bool closed = false;
        while (ok && std::getline(in, l)) {
            if (closed) {
                ok = false;
            } else if (l == "}") {
                closed = true;
            } else if (std::regex_match(l, line)) {
                edges += l.find("[label=") != std::string::npos ? 1 : 0;
            } else {
                ok = false;
            }
        }
        if (!ok || !closed || edges != d.states() * d.alphabet().size()) {
            o.fail(name + ": malformed DOT");
        }
    }
    if (o.pass) {
        o.detail = std::to_string(builtin_names().size()) + " builtins";
    }
    return o;
}

}  // namespace

int main() {
    criterion(1, "codec roundtrip and uniqueness", codec_soundness);
    criterion(2, "propositions evaluate to asserted values", propositions);
    criterion(3, "oracle theorem suite", oracle_suite);
    criterion(4, "shift identities", shifts);
    criterion(5, "gamma_b forms agree", gamma_forms);
    criterion(6, "relation synthesis vs oracle", synthesis);
    criterion(7, "engine algebra on builtins", engine_algebra);
    criterion(8, "phi power identities in Q(sqrt 5)", eq5);
    criterion(9, "serialization and DOT export", serialization);
    std::cout << (9 - failures) << "/9 criteria pass" << std::endl;
    return failures;
}
