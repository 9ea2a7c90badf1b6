#include "fibwalk/error.hpp"
#include "fibwalk/relations.hpp"

#include <gtest/gtest.h>

using namespace fibwalk;

namespace {

const std::vector<System> kZZZ{System::Zeck, System::Zeck, System::Zeck};
const std::vector<System> kZZ{System::Zeck, System::Zeck};
const std::vector<System> kZC{System::Zeck, System::Cg};

bool holds(const Dfa& a, std::vector<Natural> values, const std::vector<System>& systems) {
    return member_int(a, values, systems);
}

}  // namespace

TEST(Validity, Zeckendorf) {
    const Dfa z = zeck_valid();
    EXPECT_EQ(z.states(), 3u);
    for (std::size_t len = 0; len <= 12; ++len) {
        for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
            Digits d(len);
            std::vector<Symbol> w(len);
            for (std::size_t i = 0; i < len; ++i) {
                d[i] = static_cast<std::uint8_t>((bits >> i) & 1U);
                w[i] = d[i];
            }
            ASSERT_EQ(z.accepts(w), is_zeck_valid(d));
        }
    }
}

TEST(Validity, ChungGraham) {
    const Dfa c = cg_valid();
    EXPECT_FALSE(c.accepts(std::vector<Symbol>{0, 1}));
    EXPECT_FALSE(c.accepts(std::vector<Symbol>{2, 0, 2}));
    EXPECT_TRUE(c.accepts(std::vector<Symbol>{2, 0, 0, 0, 2}));
    std::vector<Symbol> w;
    Digits d;
    std::function<void(std::size_t)> rec = [&](std::size_t left) {
        ASSERT_EQ(c.accepts(w), is_cg_valid(d));
        if (left == 0) {
            return;
        }
        for (std::uint8_t x = 0; x <= 2; ++x) {
            w.push_back(x);
            d.push_back(x);
            rec(left - 1);
            w.pop_back();
            d.pop_back();
        }
    };
    rec(8);
}

TEST(DiffState, StepRecurrence) {
    // Reading MSD-first digits d_k..d_0 and ending with value == c0 means sum d_i F_{i+2} = c0.
    for (Natural n = 0; n <= 500; ++n) {
        const Digits d = zeck_encode(n).digits();
        DiffState s;
        for (auto it = d.rbegin(); it != d.rend(); ++it) {
            s = step(s, *it);
        }
        ASSERT_EQ(s.value, static_cast<std::int64_t>(n));
    }
    EXPECT_EQ(pruning_bound({{1, 1, -1}, 0, kZZZ}), 2 * 3 + 4);
    EXPECT_EQ(pruning_bound({{1, -1}, 0, kZC}), 2 * 3 + 4);
}

TEST(LinearEq, AdditionAgainstIntegers) {
    const Dfa add = linear_eq({{1, 1, -1}, 0, kZZZ});
    const std::vector<Digits> sample{{1, 0}, {1, 0}, {0, 1}};
    EXPECT_TRUE(accepts_digits(add, sample));
    for (Natural x = 0; x <= 150; ++x) {
        for (Natural y = 0; y <= 150; ++y) {
            ASSERT_TRUE(holds(add, {x, y, x + y}, kZZZ));
            ASSERT_FALSE(holds(add, {x, y, x + y + 1}, kZZZ));
            if (x + y > 0) {
                ASSERT_FALSE(holds(add, {x, y, x + y - 1}, kZZZ));
            }
        }
    }
}

TEST(LinearEq, ConstantsAndCoefficients) {
    const Dfa r = linear_eq({{2, -3}, 1, kZZ});
    for (Natural x = 0; x <= 120; ++x) {
        for (Natural y = 0; y <= 120; ++y) {
            ASSERT_EQ(holds(r, {x, y}, kZZ), 2 * static_cast<std::int64_t>(x) - 3 * static_cast<std::int64_t>(y) == 1)
                << x << "," << y;
        }
    }
}

TEST(LinearEq, ExtraBoundDoesNotChangeLanguage) {
    const LinearRelation rel{{1, 1, -1}, 0, kZZZ};
    EXPECT_TRUE(equivalent(linear_eq(rel), linear_eq(rel, 40)));
    const LinearRelation mixed{{1, 2, -1}, 3, {System::Zeck, System::Cg, System::Zeck}};
    EXPECT_TRUE(equivalent(linear_eq(mixed), linear_eq(mixed, 25)));
}

TEST(LinearEq, RejectsBadShapes) {
    EXPECT_THROW(linear_eq({{1, 1}, 0, kZZZ}), Error);
    EXPECT_THROW(linear_eq({{}, 0, {}}), Error);
}

TEST(Fibcg, MatchesCodecs) {
    const Dfa f = fibcg();
    EXPECT_EQ(f.states(), 10u);
    for (Natural n = 0; n <= 20000; ++n) {
        const std::vector<Digits> tracks{zeck_encode(n).digits(), cg_encode(n).digits()};
        ASSERT_TRUE(accepts_digits(f, tracks)) << n;
    }
    for (Natural u = 0; u <= 120; ++u) {
        for (Natural x = 0; x <= 120; ++x) {
            ASSERT_EQ(holds(f, {u, x}, kZC), u == x);
        }
    }
}

TEST(Builtins, FunctionGraphs) {
    const Dfa& phin = builtin("phinlsd").dfa;
    const Dfa& nphi = builtin("noverphilsd").dfa;
    EXPECT_EQ(phin.states(), 9u);
    for (Natural n = 0; n <= 400; ++n) {
        const Natural fy = floor_phi(n);
        const Natural gy = floor_inv_phi(n);
        for (Natural y = 0; y <= 700; ++y) {
            ASSERT_EQ(holds(phin, {n, y}, kZZ), y == fy) << n << "," << y;
            ASSERT_EQ(holds(nphi, {n, y}, kZZ), y == gy) << n << "," << y;
        }
    }
}

TEST(Builtins, ShiftRelations) {
    for (Natural n = 0; n <= 2000; ++n) {
        const Digits z = zeck_encode(n).digits();
        Digits shifted{0};
        shifted.insert(shifted.end(), z.begin(), z.end());
        ASSERT_TRUE(accepts_digits(builtin("fibshift").dfa, std::vector<Digits>{z, shifted}));
        ASSERT_TRUE(holds(builtin("fibsh2").dfa, {n, shift_f2(n)}, kZZ));
        ASSERT_FALSE(holds(builtin("fibsh2").dfa, {n, shift_f2(n) + 1}, kZZ));
        const std::vector<System> cc{System::Cg, System::Cg};
        ASSERT_TRUE(holds(builtin("cgsh2").dfa, {n, shift_cg2(n)}, cc));
    }
}

TEST(Builtins, SetsAgainstOracle) {
    struct Case {
        const char* name;
        SetId set;
        System system;
    };
    const std::vector<Case> cases{
        {"a2", SetId::a(2), System::Zeck},        {"a2k", SetId::feven(), System::Zeck},
        {"fibeven", SetId::feven(), System::Zeck}, {"fibodd", SetId::fodd(), System::Zeck},
        {"u2", SetId::u(2), System::Zeck},        {"b2", SetId::b(2), System::Cg},
        {"b4", SetId::b(4), System::Cg},          {"b21", SetId::b(2, SetId::Subclass::One), System::Cg},
        {"b41", SetId::b(4, SetId::Subclass::One), System::Cg},
    };
    for (const auto& c : cases) {
        const Dfa& d = builtin(c.name).dfa;
        const std::vector<System> sys{c.system};
        for (Natural n = 1; n <= 5000; ++n) {
            ASSERT_EQ(holds(d, {n}, sys), member(c.set, n)) << c.name << " " << n;
        }
    }
    EXPECT_TRUE(holds(builtin("u2").dfa, {0}, {System::Zeck}));
    EXPECT_TRUE(holds(builtin("cg0").dfa, {0}, {System::Cg}));
}

TEST(Builtins, SameLeastIndex) {
    // samek(u, x): Zeckendorf u and Chung-Graham x share their least nonzero position,
    // where x carries the digit 1.
    const Dfa& d = builtin("samek").dfa;
    for (Natural u = 1; u <= 300; ++u) {
        for (Natural x = 1; x <= 300; ++x) {
            const bool expected = least_zeck_index(u) == least_cg_index(x) && member(SetId::b(least_cg_index(x), SetId::Subclass::One), x);
            ASSERT_EQ(holds(d, {u, x}, kZC), expected) << u << "," << x;
        }
    }
    // mk(u, v): u is a single Fibonacci number F_k and v has least index k.
    const Dfa& mk = builtin("mk").dfa;
    for (Natural u = 1; u <= 300; ++u) {
        for (Natural v = 1; v <= 300; ++v) {
            const std::size_t k = least_zeck_index(u);
            const bool expected = u == fib64(k) && least_zeck_index(v) == k;
            ASSERT_EQ(holds(mk, {u, v}, kZZ), expected) << u << "," << v;
        }
    }
}

TEST(Builtins, PaddingClosureAndSerialization) {
    for (const auto& name : builtin_names()) {
        const NamedAutomaton& a = builtin(name);
        EXPECT_EQ(minimize(a.dfa), a.dfa) << name;
        EXPECT_TRUE(equivalent(pad_close(a.dfa), a.dfa)) << name;
        EXPECT_EQ(deserialize(serialize(a.dfa)), a.dfa) << name;
        EXPECT_EQ(a.tracks.size(), a.dfa.alphabet().tracks()) << name;
        EXPECT_FALSE(builtin_source(name).source.empty()) << name;
    }
    EXPECT_THROW(builtin("nosuch"), NameError);
    EXPECT_FALSE(is_builtin("nosuch"));
    EXPECT_TRUE(is_builtin("fibcg"));
}

TEST(Domains, UniverseRespectsCheckedTracks) {
    const std::vector<Domain> doms{Domain::Zeck, Domain::Ternary};
    const Dfa u = domain_universe(doms);
    EXPECT_TRUE(accepts_digits(u, std::vector<Digits>{{1, 0, 1}, {2, 2, 2}}));
    EXPECT_FALSE(accepts_digits(u, std::vector<Digits>{{1, 1}, {0, 0}}));
    EXPECT_EQ(to_string(Domain::Zeck), "lsd_fib");
    EXPECT_EQ(to_string(Domain::Ternary), "{0,1,2}");
    EXPECT_EQ(alphabet_of(doms), Alphabet({1, 2}));
}
