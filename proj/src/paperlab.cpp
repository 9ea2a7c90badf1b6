#include "fibwalk/paperlab.hpp"

#include "fibwalk/error.hpp"
#include "fibwalk/quad.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <iomanip>
#include <map>
#include <mutex>
#include <regex>
#include <sstream>
#include <thread>

namespace fibwalk::paperlab {

std::string_view to_string(Mode m) {
    switch (m) {
    case Mode::Oracle:
        return "ORACLE";
    case Mode::Automata:
        return "AUTOMATA";
    case Mode::Both:
        return "BOTH";
    }
    return "?";
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Pass:
        return "PASS";
    case Verdict::Fail:
        return "FAIL";
    case Verdict::PassVacuous:
        return "PASS_VACUOUS";
    }
    return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::int64_t F(std::size_t m) { return static_cast<std::int64_t>(fib64(m)); }

std::string str(Natural n) { return std::to_string(n); }

// Representations of 0..max_n computed once per bound.
struct Tables {
    std::vector<std::uint64_t> zeck;  // bit i = digit at position i
    std::vector<Digits> cg;

    bool zeck_digit(Natural n, std::size_t pos) const { return pos < 64 && ((zeck[n] >> pos) & 1U) != 0; }
    int cg_digit(Natural n, std::size_t pos) const { return pos < cg[n].size() ? cg[n][pos] : 0; }
    /// Index k of the least Fibonacci term (0 for n = 0).
    std::size_t zeck_least(Natural n) const {
        return zeck[n] == 0 ? 0 : static_cast<std::size_t>(std::countr_zero(zeck[n])) + 2;
    }
    std::size_t cg_least(Natural n) const {
        for (std::size_t i = 0; i < cg[n].size(); ++i) {
            if (cg[n][i] != 0) {
                return i + 2;
            }
        }
        return 0;
    }
};

const Tables& tables(Natural max_n) {
    static std::mutex mu;
    static std::map<Natural, std::unique_ptr<Tables>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[max_n];
    if (!slot) {
        auto t = std::make_unique<Tables>();
        t->zeck.resize(max_n + 1);
        t->cg.resize(max_n + 1);
        for (Natural n = 0; n <= max_n; ++n) {
            const Digits d = zeck_encode(n).digits();
            std::uint64_t mask = 0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                mask |= static_cast<std::uint64_t>(d[i]) << i;
            }
            t->zeck[n] = mask;
            t->cg[n] = cg_encode(n).digits();
        }
        slot = std::move(t);
    }
    return *slot;
}

// Marks generated values that land in 0..max_n.
class Marks {
public:
    explicit Marks(Natural max_n) : flags_(max_n + 1, 0) {}

    /// Returns false once the value exceeds the bound (callers stop a monotone loop).
    bool add(std::int64_t v) {
        if (v < 0) {
            negative_ = true;
            return true;
        }
        if (static_cast<Natural>(v) >= flags_.size()) {
            return false;
        }
        flags_[static_cast<std::size_t>(v)] = 1;
        return true;
    }
    bool operator()(Natural n) const { return flags_[n] != 0; }
    bool negative() const { return negative_; }

private:
    std::vector<char> flags_;
    bool negative_ = false;
};

// Accumulates a multi-part scan: the first failing part fixes the counterexample.
struct Scan {
    Natural checked = 0;
    std::optional<std::string> counterexample;

    bool failed() const { return counterexample.has_value(); }

    void compare(const std::string& label, const std::function<bool(Natural)>& lhs,
                 const std::function<bool(Natural)>& rhs, Natural lo, Natural hi, std::string_view lhs_name = "lhs",
                 std::string_view rhs_name = "rhs") {
        for (Natural n = lo; n <= hi && !failed(); ++n) {
            ++checked;
            const bool a = lhs(n);
            const bool b = rhs(n);
            if (a != b) {
                counterexample = label + (label.empty() ? "" : ", ") + "n=" + str(n) + ": " +
                                 std::string(a ? lhs_name : rhs_name) + " only";
            }
        }
    }

    void require(bool condition, const std::string& what) {
        ++checked;
        if (!condition && !failed()) {
            counterexample = what;
        }
    }

    CheckReport report(std::string id, Mode mode, std::string range, Clock::time_point t0, std::string notes = {}) {
        CheckReport r;
        r.id = std::move(id);
        r.mode = mode;
        r.range = std::move(range);
        r.verdict = failed() ? Verdict::Fail : checked == 0 ? Verdict::PassVacuous : Verdict::Pass;
        r.counterexample = counterexample;
        r.notes = std::move(notes);
        r.seconds = since(t0);
        return r;
    }
};

// Folds automaton-mode proposition reports into an oracle report.
CheckReport with_automata(CheckReport oracle, const std::vector<std::string>& ids, const logic::Environment& env) {
    const auto t0 = Clock::now();
    std::vector<std::string> passed;
    for (const auto& id : ids) {
        const auto& all = propositions();
        const auto it = std::find_if(all.begin(), all.end(), [&](const Proposition& p) { return p.id == id; });
        const CheckReport r = check_proposition(*it, env);
        if (r.verdict == Verdict::Fail) {
            if (oracle.verdict != Verdict::Fail) {
                oracle.verdict = Verdict::Fail;
                oracle.counterexample = id + ": " + r.counterexample.value_or("");
                oracle.notes += (oracle.notes.empty() ? "" : "; ") + std::string("oracle and automata modes disagree");
            }
        } else {
            passed.push_back(id);
        }
    }
    oracle.mode = Mode::Both;
    if (!passed.empty()) {
        std::string list;
        for (const auto& p : passed) {
            list += (list.empty() ? "" : ",") + p;
        }
        oracle.notes += (oracle.notes.empty() ? "" : "; ") + ("automata agree: " + list);
    }
    oracle.seconds += since(t0);
    return oracle;
}

std::string range_nk(Natural max_n, std::size_t max_k, std::string_view k_name = "k") {
    return "n<=" + str(max_n) + " " + std::string(k_name) + "<=" + std::to_string(max_k);
}

// Valid Zeckendorf words (no "11") of lengths 1..max_len, shortest first.
std::vector<Digits> valid_words(std::size_t max_len) {
    std::vector<Digits> out;
    std::vector<Digits> layer{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Digits> next;
        for (const Digits& w : layer) {
            for (std::uint8_t d : {0, 1}) {
                if (d == 1 && !w.empty() && w.back() == 1) {
                    continue;
                }
                Digits v = w;
                v.push_back(d);
                next.push_back(v);
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

std::string word_str(const Digits& d) {
    std::string s;
    for (auto x : d) {
        s.push_back(static_cast<char>('0' + x));
    }
    return s;
}

}  // namespace

// ------------------------------------------------------------------ propositions

const std::vector<std::pair<std::string, std::string>>& proposition_definitions() {
    static const std::vector<std::pair<std::string, std::string>> defs = {
        {"shdiff",
         "?lsd_fib En,r,w,x $fibcg(m,?lsd_cg w) & $fibsh2(m,n) & $cgsh2(?lsd_cg w,?lsd_cg x) & "
         "$fibcg(r, ?lsd_cg x) & r = n + z"},
        {"thm161",
         "?lsd_fib Ex,y,z $noverphilsd(n,y) & x = (n+1) + y & $fibcg(x, ?lsd_cg z) & $b21(?lsd_cg z)"},
        {"thm162",
         "?lsd_fib Ex,y,z $noverphilsd(n,y) & x = (3*n+3) + 2*y & $fibcg(x, ?lsd_cg z) & $b41(?lsd_cg z)"},
    };
    return defs;
}

const std::vector<Proposition>& propositions() {
    static const std::vector<Proposition> props = {
        {"tcf_even", "?lsd_fib Am ($fibeven(m) <=> $shdiff(m,0))", true},
        {"tcf_odd", "?lsd_fib Am ($fibodd(m) <=> $shdiff(m,1))", true},
        {"griffiths", "?lsd_fib Ay $a2(y) <=> (En,x $noverphilsd(n+1,x) & y=x+1+2*n)", true},
        {"bklem", "?lsd_fib Ax (En,y $phinlsd(n,y) & x = y+n-2) <=> $u2(x)", true},
        {"diff_lt",
         "?lsd_fib Aw,x,y,z ($a2k(x) & $b2k(?lsd_cg y) & $samek(x, ?lsd_cg y) & $mk(w,x) & "
         "$fibcg(z, ?lsd_cg y) & x<z) => z>=w+x",
         true},
        {"diff_gt",
         "?lsd_fib Aw,x,y,z ($a2k(x) & $b2k(?lsd_cg y) & $samek(x, ?lsd_cg y) & $mk(w,x) & "
         "$fibcg(z, ?lsd_cg y)  & x>z) => x>z+w",
         true},
        {"feunion_disjoint", "?lsd_fib Ex,y $sc(x) & $fibcg(x, ?lsd_cg y) & $cg0(?lsd_cg y)", false},
        {"feunion_union",
         "?lsd_fib Ax (x>0 & $fibeven(x)) <=> (x>0 & ($sc(x)|(Ey $fibcg(x, ?lsd_cg y) & $cg0(?lsd_cg y))))", true},
        {"inclusion",
         "?lsd_fib Ax (Ey $fibcg(x, ?lsd_cg y) & $cg0(?lsd_cg y)) => (Em,n $noverphilsd(m,n) & (x=n+m))", true},
        {"ckv43_k1",
         "?lsd_fib Ax (En,y $noverphilsd(n,y) & x = n+1+y) <=> (Ez $fibcg(x, ?lsd_cg z) & $b2(?lsd_cg z) )", true},
        {"ckv43_k2",
         "?lsd_fib Ax (En,y $noverphilsd(n,y) & x = 3*n+3+2*y) <=> (Ez $fibcg(x, ?lsd_cg z) & $b4(?lsd_cg z))",
         true},
        {"bsplit_k1", "?lsd_fib An $thm161(n) <=> (n=0|(Em (m>0) & $phinlsd(m,n-1)))", true},
        {"bsplit_k2", "?lsd_fib An $thm162(n) <=> (n=0|(Em (m>0) & $phinlsd(m,n-1)))", true},
        {"abinter",
         "?lsd_fib Ax (Ey $a2(x) & $fibcg(x,?lsd_cg y) & $b21(?lsd_cg y)) <=> (En,z n>0 & $phinlsd(n-1,z) & "
         "x=n+2*z)",
         true},
    };
    return props;
}

logic::Environment proposition_environment(std::size_t max_states) {
    logic::Environment env(true, max_states);
    for (const auto& [name, source] : proposition_definitions()) {
        env = logic::define_formula(env, name, source);
    }
    return env;
}

CheckReport check_proposition(const Proposition& p, const logic::Environment& env) {
    const auto t0 = Clock::now();
    CheckReport r;
    r.id = "prop." + p.id;
    r.mode = Mode::Automata;
    r.range = "all n";
    bool value = false;
    try {
        value = logic::eval_closed(p.source, env);
    } catch (const Error& e) {
        r.verdict = Verdict::Fail;
        r.counterexample = std::string("error: ") + e.what();
        r.seconds = since(t0);
        return r;
    }
    r.notes = std::string("evaluates ") + (value ? "TRUE" : "FALSE") + ", expected " + (p.expected ? "TRUE" : "FALSE");
    if (value == p.expected) {
        r.verdict = Verdict::Pass;
        r.seconds = since(t0);
        return r;
    }
    r.verdict = Verdict::Fail;
    r.counterexample = std::string("evaluated ") + (value ? "TRUE" : "FALSE");
    // Witness: smallest violating value of the first quantified variable.
    static const std::regex quantified(R"(^\?lsd_fib\s+([AE])([a-z](?:,[a-z])*)\s+([\s\S]*)$)");
    std::smatch m;
    const std::string source = p.source;
    if (std::regex_match(source, m, quantified)) {
        const bool universal = m[1] == "A";
        const std::string first = m[2].str().substr(0, 1);
        const std::string witness = universal ? "?lsd_fib ~(" + m[3].str() + ")" : "?lsd_fib " + m[3].str();
        try {
            const logic::Compiled c = logic::compile(witness, env);
            const auto it = std::find(c.variables.begin(), c.variables.end(), first);
            if (c.dfa && it != c.variables.end()) {
                const std::size_t track = static_cast<std::size_t>(it - c.variables.begin());
                const auto values = enumerate(*c.dfa, track, system_of(c.domains[track]), 1, 1'000'000);
                if (!values.empty()) {
                    *r.counterexample += "; " + first + "=" + str(values.front());
                }
            }
        } catch (const Error&) {
        }
    }
    r.seconds = since(t0);
    return r;
}

CheckReport compare_sets(std::string id, const std::function<bool(Natural)>& lhs,
                         const std::function<bool(Natural)>& rhs, Natural lo, Natural hi) {
    const auto t0 = Clock::now();
    Scan scan;
    if (lo <= hi) {
        scan.compare("", lhs, rhs, lo, hi);
    }
    return scan.report(std::move(id), Mode::Oracle, "n in [" + str(lo) + "," + str(hi) + "]", t0);
}

// ------------------------------------------------------------------ Zeckendorf

CheckReport check_kimberling(Natural max_n, const logic::Environment& env) {
    const auto t0 = Clock::now();
    const Tables& t = tables(max_n);
    Marks gen(max_n);
    for (Natural n = 2; gen.add(static_cast<std::int64_t>(floor_phi(n)) - 1); ++n) {
    }
    Scan scan;
    scan.compare("", [&](Natural n) { return t.zeck_least(n) != 2; }, gen, 1, max_n, "complement of A_2",
                 "floor(n phi)-1");
    CheckReport r = scan.report("kimberling", Mode::Oracle, "n in [1," + str(max_n) + "]", t0);
    // Automaton form of the same statement, over the positive integers.
    const auto t1 = Clock::now();
    const Proposition p{"kimberling",
                        "?lsd_fib Ax x>0 => (~$a2(x) <=> (En,y n>=2 & $phinlsd(n,y) & x+1=y))", true};
    const CheckReport a = check_proposition(p, env);
    r.mode = Mode::Both;
    if (a.verdict == Verdict::Fail && r.verdict != Verdict::Fail) {
        r.verdict = Verdict::Fail;
        r.counterexample = "automata: " + a.counterexample.value_or("");
        r.notes = "oracle and automata modes disagree";
    } else {
        r.notes = "automata agree";
    }
    r.seconds += since(t1);
    return r;
}

CheckReport check_griffiths(std::size_t max_k, Natural max_n, const logic::Environment& env) {
    const auto t0 = Clock::now();
    const Tables& t = tables(max_n);
    Scan scan;
    for (std::size_t k = 2; k <= max_k && !scan.failed(); ++k) {
        Marks gen(max_n);
        for (Natural n = 0;; ++n) {
            // floor((n + phi^2)/phi) = floor((n+1) phi) - n
            const std::int64_t c = static_cast<std::int64_t>(floor_phi(n + 1)) - static_cast<std::int64_t>(n);
            if (!gen.add(c * F(k) + static_cast<std::int64_t>(n) * F(k + 1))) {
                break;
            }
        }
        scan.compare("k=" + std::to_string(k), [&](Natural n) { return t.zeck_least(n) == k; }, gen, 0, max_n,
                     "A_k", "formula");
    }
    return with_automata(scan.report("griffiths", Mode::Oracle, range_nk(max_n, max_k), t0), {"griffiths"}, env);
}

CheckReport check_U(std::size_t max_k, Natural max_n, const logic::Environment& env) {
    const auto t0 = Clock::now();
    const Tables& t = tables(max_n);
    Scan scan;
    for (std::size_t k = 1; k <= max_k && !scan.failed(); ++k) {
        Marks gen(max_n);
        for (Natural n = 1;; ++n) {
            const std::int64_t v = static_cast<std::int64_t>(floor_phi(n)) * F(k) +
                                   static_cast<std::int64_t>(n) * F(k - 1) - F(k + 1);
            if (!gen.add(v)) {
                break;
            }
        }
        scan.compare("k=" + std::to_string(k),
                     [&](Natural n) { return n == 0 || t.zeck_least(n) >= k + 2; }, gen, 0, max_n, "U_k",
                     "formula");
    }
    return with_automata(scan.report("bklem", Mode::Oracle, range_nk(max_n, max_k), t0,
                                     "0 is in U_k (n=1 gives 0)"),
                         {"bklem"}, env);
}

CheckReport check_avoid_Fk(std::size_t max_k, Natural max_n) {
    const auto t0 = Clock::now();
    const Tables& t = tables(max_n);
    Scan scan;
    for (std::size_t k = 2; k <= max_k && !scan.failed(); ++k) {
        Marks gen(max_n);
        for (Natural n = 1;; ++n) {
            const std::int64_t base = static_cast<std::int64_t>(floor_phi(n)) * F(k - 1) +
                                      static_cast<std::int64_t>(n) * F(k - 2) - F(k);
            if (base > static_cast<std::int64_t>(max_n)) {
                break;
            }
            for (std::int64_t j = 0; j < F(k); ++j) {
                if (!gen.add(j + base)) {
                    break;
                }
            }
        }
        scan.compare("k=" + std::to_string(k), [&](Natural n) { return !t.zeck_digit(n, k - 2); }, gen, 0, max_n,
                     "no F_k", "formula");
    }
    return scan.report("avoid_fk", Mode::Oracle, range_nk(max_n, max_k), t0, "includes 0 (j=0, n=1)");
}

CheckReport check_dekking(std::size_t max_len, Natural max_n) {
    const auto t0 = Clock::now();
    const Tables& t = tables(max_n);
    Scan scan;
    std::size_t ends0 = 0;
    std::size_t ends1 = 0;
    for (const Digits& b : valid_words(max_len)) {
        if (scan.failed()) {
            break;
        }
        const std::size_t m = b.size();
        std::uint64_t bmask = 0;
        for (std::size_t i = 0; i < m; ++i) {
            bmask |= static_cast<std::uint64_t>(b[i]) << i;
        }
        const std::uint64_t low = (std::uint64_t{1} << m) - 1;
        std::int64_t gamma = 0;
        std::int64_t a = 0;
        std::int64_t c = 0;
        if (b.back() == 0) {
            ++ends0;
            for (std::size_t i = 0; i + 2 <= m; ++i) {
                gamma += b[i] * F(i + 2);
            }
            gamma -= F(m + 1);
            a = F(m);
            c = F(m - 1);
        } else {
            ++ends1;
            for (std::size_t i = 0; i < m; ++i) {
                gamma += b[i] * F(i + 2);
            }
            gamma -= F(m + 2);
            a = F(m + 1);
            c = F(m);
        }
        Marks gen(max_n);
        for (Natural n = 1; gen.add(a * static_cast<std::int64_t>(floor_phi(n)) + c * static_cast<std::int64_t>(n) +
                                    gamma);
             ++n) {
        }
        const std::string label = "b=" + word_str(b);
        if (gen.negative()) {
            scan.require(false, label + ": formula produces a negative value");
            break;
        }
        scan.compare(label, [&](Natural n) { return (t.zeck[n] & low) == bmask; }, gen, 0, max_n, "R_b", "formula");
    }
    return scan.report("dekking", Mode::Oracle, "|b|<=" + std::to_string(max_len) + " n<=" + str(max_n), t0,
                       std::to_string(ends0) + " words ending 0, " + std::to_string(ends1) + " ending 1");
}

CheckReport check_gamma(std::size_t max_len) {
    const auto t0 = Clock::now();
    Scan scan;
    for (const Digits& b : valid_words(max_len)) {
        const std::size_t m = b.size();
        std::int64_t theorem = -(b.back() == 0 ? F(m + 1) : F(m + 2));
        for (std::size_t i = 0; i < (b.back() == 0 ? m - 1 : m); ++i) {
            theorem += b[i] * F(i + 2);
        }
        std::int64_t t00 = -1;
        for (std::size_t k = 1; k < m; ++k) {
            if (b[k - 1] == 0 && b[k] == 0) {
                t00 -= F(k);
            }
        }
        const GammaForms g = gamma_b(ZeckWord(b));
        scan.require(theorem == t00 && g.dekking == theorem && g.t00 == t00,
                     "b=" + word_str(b) + ": " + std::to_string(theorem) + " vs " + std::to_string(t00));
        if (scan.failed()) {
            break;
        }
    }
    return scan.report("gamma", Mode::Oracle, "|b|<=" + std::to_string(max_len), t0,
                       std::to_string(scan.checked) + " words");
}

// ------------------------------------------------------------------ shifts

std::vector<CheckReport> check_shifts(std::size_t max_m, Natural max_n) {
    std::vector<CheckReport> out;
    const std::string range = "m<=" + std::to_string(max_m) + " n<=" + str(max_n);
    {
        const auto t0 = Clock::now();
        Scan scan;
        std::vector<char> image(max_n + 1, 0);
        for (Natural n = 1; n <= max_n && !scan.failed(); ++n) {
            const std::size_t k = least_zeck_index(n);
            const Natural s = shift_f(n);
            scan.require(least_zeck_index(s) == k + 1, "n=" + str(n) + ": shift leaves A_" + std::to_string(k + 1));
            if (s <= max_n) {
                image[s] = 1;
            }
        }
        for (Natural y = 1; y <= max_n && !scan.failed(); ++y) {
            if (least_zeck_index(y) >= 3) {
                scan.require(image[y] != 0, "n=" + str(y) + ": not a shift of a smaller-index element");
            }
        }
        out.push_back(scan.report("shift.eq4", Mode::Oracle, "n<=" + str(max_n), t0));
    }
    {
        const auto t0 = Clock::now();
        Scan scan;
        for (Natural n = 0; n <= max_n && !scan.failed(); ++n) {
            scan.require(shift_f(n) == floor_phi(n + 1) - 1, "n=" + str(n));
        }
        out.push_back(scan.report("shift.eq6", Mode::Oracle, "n<=" + str(max_n), t0));
    }
    {
        const auto t0 = Clock::now();
        Scan scan;
        for (Natural n = 0; n <= max_n && !scan.failed(); ++n) {
            scan.require(shift_f2(n) == floor_phi2(n + 1) - 2, "n=" + str(n));
        }
        out.push_back(scan.report("shift.eq7", Mode::Oracle, "n<=" + str(max_n), t0));
    }
    struct Lemma {
        const char* id;
        std::size_t min_m;
        Natural min_n;
        std::function<std::int64_t(std::size_t, Natural)> form;
    };
    const auto fl = [](Natural n) { return static_cast<std::int64_t>(floor_phi(n)); };
    const auto fi = [](Natural n) { return static_cast<std::int64_t>(floor_inv_phi(n)); };
    const auto N = [](Natural n) { return static_cast<std::int64_t>(n); };
    const std::vector<Lemma> lemmas = {
        {"shift.sh1", 4, 0, [&](std::size_t m, Natural n) { return (N(n) + 1) * F(m) + F(m - 1) * fi(n); }},
        {"shift.sh2", 2, 0,
         [&](std::size_t m, Natural n) { return (fl(n + 1) - N(n)) * F(m) + N(n) * F(m + 1); }},
        {"shift.sh3", 1, 1,
         [&](std::size_t m, Natural n) { return fl(n) * F(m) + N(n) * F(m - 1) - F(m + 1); }},
        {"shift.sh4", 2, 0, [&](std::size_t m, Natural n) { return (N(n) + 1) * F(m) + fl(n) * F(m + 1); }},
    };
    for (const Lemma& lemma : lemmas) {
        const auto t0 = Clock::now();
        Scan scan;
        for (std::size_t m = lemma.min_m; m <= max_m && !scan.failed(); ++m) {
            for (Natural n = lemma.min_n; n <= max_n && !scan.failed(); ++n) {
                const std::int64_t x = lemma.form(m, n);
                const std::int64_t want = lemma.form(m + 1, n);
                scan.require(x >= 0 && static_cast<std::int64_t>(shift_f(static_cast<Natural>(x))) == want,
                             "m=" + std::to_string(m) + ", n=" + str(n));
            }
        }
        out.push_back(scan.report(lemma.id, Mode::Oracle, range, t0));
    }
    {
        const auto t0 = Clock::now();
        Scan scan;
        scan.require(shift_cg2(0) == shift_f2(0), "n=0");
        for (Natural n = 1; n <= max_n && !scan.failed(); ++n) {
            const Natural extra = parity_class(n) == Parity::Odd ? 1 : 0;
            scan.require(shift_cg2(n) == shift_f2(n) + extra, "n=" + str(n));
        }
        out.push_back(scan.report("shift.fibcgsh", Mode::Oracle, "n<=" + str(max_n), t0));
    }
    return out;
}

// ------------------------------------------------------------------ Chung-Graham

std::vector<CheckReport> check_cg_suite(std::size_t max_k, Natural max_n, Natural max_pair,
                                        const logic::Environment& env) {
    const Tables& t = tables(std::max(max_n, max_pair));
    std::vector<CheckReport> out;
    const auto fl = [](Natural n) { return static_cast<std::int64_t>(floor_phi(n)); };
    const auto fi = [](Natural n) { return static_cast<std::int64_t>(floor_inv_phi(n)); };
    const auto N = [](Natural n) { return static_cast<std::int64_t>(n); };
    const auto in_b = [&](Natural n, std::size_t k) { return n > 0 && t.cg_least(n) == 2 * k; };
    const auto in_b1 = [&](Natural n, std::size_t k) { return in_b(n, k) && t.cg_digit(n, 2 * k - 2) == 1; };
    const auto in_b2 = [&](Natural n, std::size_t k) { return in_b(n, k) && t.cg_digit(n, 2 * k - 2) == 2; };

    {  // B_2k = {(n+1) F_2k + floor(n/phi) F_2k-1}
        const auto t0 = Clock::now();
        Scan scan;
        for (std::size_t k = 1; k <= max_k && !scan.failed(); ++k) {
            Marks gen(max_n);
            for (Natural n = 0; gen.add((N(n) + 1) * F(2 * k) + fi(n) * F(2 * k - 1)); ++n) {
            }
            scan.compare("k=" + std::to_string(k), [&](Natural n) { return in_b(n, k); }, gen, 1, max_n, "B_2k",
                         "formula");
        }
        out.push_back(with_automata(scan.report("ckv43", Mode::Oracle, range_nk(max_n, max_k), t0),
                                    {"ckv43_k1", "ckv43_k2"}, env));
    }
    {  // positives without F_2k or 2F_2k
        const auto t0 = Clock::now();
        Scan scan;
        for (std::size_t k = 1; k <= max_k && !scan.failed(); ++k) {
            Marks gen(max_n);
            for (std::int64_t j = 1; j < F(2 * k); ++j) {
                gen.add(j);
            }
            for (std::size_t m = k + 1; F(2 * m) <= static_cast<std::int64_t>(max_n); ++m) {
                for (Natural n = 0;; ++n) {
                    const std::int64_t base = (N(n) + 1) * F(2 * m) + fi(n) * F(2 * m - 1);
                    if (base > static_cast<std::int64_t>(max_n)) {
                        break;
                    }
                    for (std::int64_t j = 0; j < F(2 * k) && gen.add(j + base); ++j) {
                    }
                }
            }
            scan.compare("k=" + std::to_string(k), [&](Natural n) { return t.cg_digit(n, 2 * k - 2) == 0; }, gen, 1,
                         max_n, "no F_2k term", "formula");
        }
        out.push_back(scan.report("ckv13", Mode::Oracle, range_nk(max_n, max_k), t0));
    }
    {  // which n land in B^(1) and B^(2)
        const auto t0 = Clock::now();
        Scan scan;
        std::vector<char> lower(max_n + 2, 0);
        std::vector<char> upper(max_n + 2, 0);
        for (Natural m = 1; floor_phi(m) <= max_n + 1; ++m) {
            lower[floor_phi(m)] = 1;
        }
        for (Natural m = 0; floor_phi2(m) <= max_n + 1; ++m) {
            upper[floor_phi2(m)] = 1;
        }
        Natural checked_two = 0;
        for (std::size_t k = 1; k <= max_k && !scan.failed(); ++k) {
            for (Natural n = 0; !scan.failed(); ++n) {
                const std::int64_t v = (N(n) + 1) * F(2 * k) + fi(n) * F(2 * k - 1);
                if (v > static_cast<std::int64_t>(max_n)) {
                    break;
                }
                const Natural x = static_cast<Natural>(v);
                const bool one = n == 0 || lower[n - 1] != 0;
                const bool two = n > 0 && upper[n - 1] != 0;
                const std::string where = "k=" + std::to_string(k) + ", n=" + str(n);
                scan.require(one != two, where + ": index sets overlap or miss");
                scan.require(!one || in_b1(x, k), where + ": expected B^(1)");
                scan.require(!two || in_b2(x, k), where + ": expected B^(2)");
                checked_two += two ? 1 : 0;
            }
        }
        out.push_back(with_automata(scan.report("bsplit", Mode::Oracle, range_nk(max_n, max_k), t0,
                                                "B^(2) case checked directly on " + str(checked_two) + " values"),
                                    {"bsplit_k1", "bsplit_k2"}, env));
    }
    {  // x in A_2k, y in B^(1)_2k: x = y or |x - y| >= F_2k
        const auto t0 = Clock::now();
        Scan scan;
        for (std::size_t k = 1; k <= max_k && !scan.failed(); ++k) {
            std::vector<Natural> xs;
            std::vector<Natural> ys;
            for (Natural n = 1; n <= max_pair; ++n) {
                if (t.zeck_least(n) == 2 * k) {
                    xs.push_back(n);
                }
                if (in_b1(n, k)) {
                    ys.push_back(n);
                }
            }
            for (Natural x : xs) {
                for (Natural y : ys) {
                    const Natural gap = x > y ? x - y : y - x;
                    scan.require(gap == 0 || gap >= fib64(2 * k),
                                 "k=" + std::to_string(k) + ", x=" + str(x) + ", y=" + str(y));
                }
            }
        }
        out.push_back(with_automata(
            scan.report("diff", Mode::Oracle, "x,y<=" + str(max_pair) + " k<=" + std::to_string(max_k), t0),
            {"diff_lt", "diff_gt"}, env));
    }
    {  // F_even = (N \ B_2) disjoint-union sc, on the positives
        const auto t0 = Clock::now();
        Scan scan;
        for (Natural n = 1; n <= max_n && !scan.failed(); ++n) {
            const bool even = t.zeck_least(n) % 2 == 0;
            const bool not_b2 = t.cg_digit(n, 0) == 0;
            const bool sc = member(SetId::sc(), n);
            scan.require(!(not_b2 && sc), "n=" + str(n) + ": in both parts");
            scan.require(even == (not_b2 || sc), "n=" + str(n) + ": union differs from F_even");
        }
        out.push_back(with_automata(scan.report("feunion", Mode::Oracle, "n in [1," + str(max_n) + "]", t0),
                                    {"feunion_disjoint", "feunion_union"}, env));
    }
    {  // N \ B_2 within {floor(n/phi) + n : n >= 1}
        const auto t0 = Clock::now();
        Marks gen(max_n);
        for (Natural n = 1; gen.add(fi(n) + N(n)); ++n) {
        }
        Scan scan;
        std::optional<Natural> extra;
        for (Natural n = 1; n <= max_n && !scan.failed(); ++n) {
            const bool not_b2 = t.cg_digit(n, 0) == 0;
            scan.require(!not_b2 || gen(n), "n=" + str(n) + ": outside the Beatty set");
            if (!extra && gen(n) && !not_b2) {
                extra = n;
            }
        }
        const std::string notes = extra ? "proper: " + str(*extra) + " is in the Beatty set and in B_2"
                                        : "no proper witness in range";
        out.push_back(with_automata(scan.report("inclusion", Mode::Oracle, "n in [1," + str(max_n) + "]", t0, notes),
                                    {"inclusion"}, env));
    }
    {  // F_2k in both representations
        const auto t0 = Clock::now();
        Scan scan;
        std::optional<std::string> loose;
        for (std::size_t k = 1; k <= max_k && !scan.failed(); ++k) {
            Marks gen(max_n);
            for (Natural n = 1;; ++n) {
                const std::int64_t base = N(n) * F(2 * k) + fl(n - 1) * F(2 * k + 1);
                if (base > static_cast<std::int64_t>(max_n)) {
                    break;
                }
                for (std::int64_t j = 0; j < F(2 * k - 1) && gen.add(j + base); ++j) {
                }
            }
            const std::size_t pos = 2 * k - 2;
            scan.compare("k=" + std::to_string(k),
                         [&](Natural n) { return t.zeck_digit(n, pos) && t.cg_digit(n, pos) == 1; }, gen, 1, max_n,
                         "digit reading", "formula");
            if (!loose) {
                for (Natural n = 1; n <= max_n; ++n) {
                    if ((t.zeck_digit(n, pos) && t.cg_digit(n, pos) >= 1) != gen(n)) {
                        loose = "k=" + std::to_string(k) + ", n=" + str(n);
                        break;
                    }
                }
            }
        }
        const std::string notes = "CG term read as digit exactly 1; the digit>=1 reading " +
                                  (loose ? "differs first at " + *loose : std::string("also agrees"));
        out.push_back(scan.report("bustos", Mode::Oracle, range_nk(max_n, max_k), t0, notes));
    }
    {  // A_2k cap B^(1)_2k = {n F_2k + floor((n-1) phi) F_2k+1}
        const auto t0 = Clock::now();
        Scan scan;
        for (std::size_t k = 1; k <= max_k && !scan.failed(); ++k) {
            Marks gen(max_n);
            for (Natural n = 1; gen.add(N(n) * F(2 * k) + fl(n - 1) * F(2 * k + 1)); ++n) {
            }
            scan.compare("k=" + std::to_string(k), [&](Natural n) { return t.zeck_least(n) == 2 * k && in_b1(n, k); },
                         gen, 1, max_n, "intersection", "formula");
        }
        out.push_back(with_automata(scan.report("abinter", Mode::Oracle, range_nk(max_n, max_k), t0), {"abinter"},
                                    env));
    }
    return out;
}

CheckReport check_eq5(std::size_t max_m) {
    const auto t0 = Clock::now();
    Scan scan;
    const QuadExact phi = QuadExact::phi();
    const QuadExact minus_phi = -phi;
    for (std::size_t m = 1; m <= max_m; ++m) {
        const QuadExact fm(static_cast<long long>(fib64(m)));
        const QuadExact tail = minus_phi.pow(-static_cast<long long>(m));
        scan.require(fm * phi == QuadExact(static_cast<long long>(fib64(m + 1))) - tail,
                     "m=" + std::to_string(m) + ": F_m phi");
        scan.require(fm * phi * phi == QuadExact(static_cast<long long>(fib64(m + 2))) - tail,
                     "m=" + std::to_string(m) + ": F_m phi^2");
    }
    return scan.report("eq5", Mode::Oracle, "1<=m<=" + std::to_string(max_m), t0, "exact in Q(sqrt5)");
}

// ------------------------------------------------------------------ runner

std::vector<CheckReport> verify_all(const Config& c) {
    const logic::Environment env = proposition_environment(c.max_states);
    tables(std::max(c.max_n, c.max_pair));
    using Task = std::function<std::vector<CheckReport>()>;
    std::vector<Task> tasks = {
        [&] { return std::vector{check_kimberling(c.max_n, env)}; },
        [&] { return std::vector{check_griffiths(c.max_k, c.max_n, env)}; },
        [&] { return std::vector{check_U(c.max_k, c.max_n, env)}; },
        [&] { return std::vector{check_avoid_Fk(c.max_k, c.max_n)}; },
        [&] { return std::vector{check_dekking(c.max_prefix, c.max_n)}; },
        [&] { return std::vector{check_gamma(c.max_len)}; },
        [&] { return check_shifts(c.max_m, c.max_shift_n); },
        [&] { return check_cg_suite(c.max_k, c.max_n, c.max_pair, env); },
        [&] { return std::vector{check_eq5(c.eq5_max_m)}; },
    };
    for (const Proposition& p : propositions()) {
        tasks.push_back([&env, &p] { return std::vector{check_proposition(p, env)}; });
    }
    std::vector<std::vector<CheckReport>> results(tasks.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers =
        std::max<std::size_t>(1, std::min(tasks.size(), c.threads ? c.threads : std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    std::mutex error_mu;
    std::exception_ptr error;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < tasks.size(); i = next++) {
                try {
                    results[i] = tasks[i]();
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
    std::vector<CheckReport> out;
    for (auto& r : results) {
        out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    return out;
}

std::string format_table(const std::vector<CheckReport>& reports) {
    std::size_t w_id = 5;
    std::size_t w_range = 5;
    for (const auto& r : reports) {
        w_id = std::max(w_id, r.id.size());
        w_range = std::max(w_range, r.range.size());
    }
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(w_id)) << "check" << "  " << std::setw(9) << "mode" << "  "
        << std::setw(12) << "verdict" << "  " << std::setw(static_cast<int>(w_range)) << "range" << "  "
        << std::right << std::setw(8) << "seconds" << "  details\n";
    for (const auto& r : reports) {
        std::ostringstream secs;
        secs.imbue(std::locale::classic());
        secs << std::fixed << std::setprecision(3) << r.seconds;
        std::string details = r.counterexample ? "counterexample " + *r.counterexample : "";
        if (!r.notes.empty()) {
            details += (details.empty() ? "" : "; ") + r.notes;
        }
        out << std::left << std::setw(static_cast<int>(w_id)) << r.id << "  " << std::setw(9) << to_string(r.mode)
            << "  " << std::setw(12) << to_string(r.verdict) << "  " << std::setw(static_cast<int>(w_range))
            << r.range << "  " << std::right << std::setw(8) << secs.str() << "  " << details << "\n";
    }
    return out.str();
}

std::string format_machine(const std::vector<CheckReport>& reports) {
    std::string out;
    for (const auto& r : reports) {
        out += r.id + "\t" + std::string(to_string(r.verdict)) + "\t" + r.range + "\t" +
               r.counterexample.value_or("-") + "\n";
    }
    return out;
}

}  // namespace fibwalk::paperlab
