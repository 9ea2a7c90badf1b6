#include "fibwalk/error.hpp"
#include "fibwalk/logic.hpp"

#include <gtest/gtest.h>

#include <functional>

using namespace fibwalk;
using namespace fibwalk::logic;

namespace {

const Environment& env() {
    static const Environment e(true);
    return e;
}

std::size_t error_position(std::string_view source) {
    try {
        parse(source);
    } catch (const ParseError& e) {
        return e.position();
    }
    return std::string::npos;
}

// Checks a one- or two-variable formula against an integer predicate on 0..bound.
void check_against(std::string_view source, std::size_t arity, Natural bound,
                   const std::function<bool(Natural, Natural)>& oracle) {
    const Compiled c = compile(source, env());
    ASSERT_EQ(c.variables.size(), arity) << source;
    ASSERT_TRUE(c.dfa.has_value());
    std::vector<System> systems;
    for (Domain d : c.domains) {
        systems.push_back(system_of(d));
    }
    for (Natural a = 0; a <= bound; ++a) {
        for (Natural b = 0; b <= (arity == 2 ? bound : 0); ++b) {
            std::vector<Natural> v{a};
            if (arity == 2) {
                v.push_back(b);
            }
            ASSERT_EQ(member_int(*c.dfa, v, systems), oracle(a, b)) << source << " at " << a << "," << b;
        }
    }
}

}  // namespace

TEST(Parse, StructureAndPrecedence) {
    const Formula f = parse("?lsd_fib Ex x = y & y < 3 | ~z >= 1 => w = 0");
    EXPECT_EQ(f.default_system, System::Zeck);
    EXPECT_EQ(f.root.kind, Node::Kind::Exists);
    const Node& body = f.root.children.at(0);
    EXPECT_EQ(body.kind, Node::Kind::Implies);
    EXPECT_EQ(body.children.at(0).kind, Node::Kind::Or);
    EXPECT_EQ(body.children.at(0).children.at(0).kind, Node::Kind::And);
    EXPECT_EQ(f.free_variables(), (std::vector<std::string>{"y", "z", "w"}));

    const Formula g = parse("a = 0 => b = 0 => c = 0");
    EXPECT_EQ(g.root.kind, Node::Kind::Implies);
    EXPECT_EQ(g.root.children.at(1).kind, Node::Kind::Implies);
}

TEST(Parse, TagsAndTerms) {
    const Formula f = parse("?lsd_cg $fibcg(?lsd_fib u, x) & 2*u + 3 = x - 1");
    EXPECT_EQ(f.default_system, System::Cg);
    EXPECT_EQ(f.system_of("u"), System::Zeck);
    EXPECT_EQ(f.system_of("x"), System::Cg);
    const Node& cmp = f.root.children.at(1);
    EXPECT_EQ(cmp.lhs.value.coefficients.at("u"), 2);
    EXPECT_EQ(cmp.lhs.value.constant, 3);
    EXPECT_EQ(cmp.rhs.guards.size(), 1u);
}

TEST(Parse, ParenthesizedTermVersusFormula) {
    EXPECT_EQ(parse("(n+1) = 2").root.kind, Node::Kind::Compare);
    EXPECT_EQ(parse("(n = 1 | n = 2)").root.kind, Node::Kind::Or);
}

TEST(Parse, ErrorsReportPositions) {
    EXPECT_EQ(error_position("x = "), 4u);
    EXPECT_EQ(error_position("x # 1"), 2u);
    EXPECT_EQ(error_position("?lsd_foo x = 1"), 0u);
    EXPECT_EQ(error_position("x = 1 &"), 7u);
    EXPECT_EQ(error_position("(x = 1"), 6u);
    EXPECT_EQ(error_position("x*y = 1"), 2u);
    EXPECT_EQ(error_position("Ex,x x = 1"), 0u);
}

TEST(Eval, ClosedSentences) {
    EXPECT_TRUE(eval_closed("Ax x = x", env()));
    EXPECT_TRUE(eval_closed("Ax,y x + y = y + x", env()));
    EXPECT_TRUE(eval_closed("Ax Ey y = x + 1", env()));
    EXPECT_FALSE(eval_closed("Ax Ey x = y + 1", env()));
    EXPECT_TRUE(eval_closed("Ax x = 0 | (Ey x = y + 1)", env()));
    EXPECT_TRUE(eval_closed("?lsd_cg Ax,y x + y = y + x", env()));
    EXPECT_TRUE(eval_closed("Ax (Ey x = 2*y) | (Ey x = 2*y + 1)", env()));
    EXPECT_FALSE(eval_closed("Ex 3*x = 7", env()));
    EXPECT_TRUE(eval_closed("1 + 1 = 2", env()));
    EXPECT_FALSE(eval_closed("2 < 1", env()));
}

TEST(Eval, QuantifierDuality) {
    const std::vector<std::string> bodies{"x + 2 = 2*y", "$a2(x) => x + 1 != y", "$phinlsd(x, y) & y < 10"};
    for (const auto& body : bodies) {
        const bool forall = eval_closed("Ay Ax " + body, env());
        const bool not_exists_not = eval_closed("~(Ey Ex ~(" + body + "))", env());
        EXPECT_EQ(forall, not_exists_not) << body;
    }
}

TEST(Eval, FreeVariablesRejected) {
    EXPECT_THROW(eval_closed("x = 1", env()), Error);
}

TEST(Compile, UniversalEquality) {
    const Compiled c = compile("x = x", env());
    ASSERT_TRUE(c.dfa.has_value());
    EXPECT_TRUE(equivalent(*c.dfa, domain_universe(c.domains)));
}

TEST(Compile, MembershipAgainstIntegers) {
    check_against("x + y = 7", 2, 40, [](Natural x, Natural y) { return x + y == 7; });
    check_against("x < y", 2, 40, [](Natural x, Natural y) { return x < y; });
    check_against("2*x >= y + 3", 2, 40, [](Natural x, Natural y) { return 2 * x >= y + 3; });
    check_against("x != y", 2, 40, [](Natural x, Natural y) { return x != y; });
    check_against("Ey x = 3*y", 1, 200, [](Natural x, Natural) { return x % 3 == 0; });
    check_against("?lsd_cg Ey x = 2*y + 1", 1, 200, [](Natural x, Natural) { return x % 2 == 1; });
    check_against("$phinlsd(x, y)", 2, 60, [](Natural x, Natural y) { return y == floor_phi(x); });
    check_against("Ey $phinlsd(x + 1, y) & z = y - 1", 2, 60, [](Natural x, Natural z) {
        return z + 1 == floor_phi(x + 1);
    });
}

TEST(Compile, SubtractionStaysInNaturals) {
    // x - 3 = y needs x >= 3; it must not hold via wrap-around or negative values.
    check_against("x - 3 = y", 2, 40, [](Natural x, Natural y) { return x >= 3 && x - 3 == y; });
    check_against("x - y = y", 2, 40, [](Natural x, Natural y) { return x >= y && x - y == y; });
    EXPECT_FALSE(eval_closed("Ex x - 1 = 0 & x = 0", env()));
    EXPECT_TRUE(eval_closed("Ax x - x = 0", env()));
}

TEST(Compile, MembershipSoundnessAgainstSets) {
    const Compiled c = compile("?lsd_fib Ey $fibcg(x, ?lsd_cg y) & $b21(?lsd_cg y)", env());
    ASSERT_EQ(c.variables, (std::vector<std::string>{"x"}));
    for (Natural n = 0; n <= 2000; ++n) {
        const std::vector<Natural> v{n};
        const std::vector<System> s{System::Zeck};
        ASSERT_EQ(member_int(*c.dfa, v, s), member(SetId::b(2, SetId::Subclass::One), n)) << n;
    }
}

TEST(Compile, MixedSystemCallRejected) {
    // x is Zeckendorf by default and cannot fill the Chung-Graham track of fibcg.
    EXPECT_THROW(compile("?lsd_fib $fibcg(u, x)", env()), Error);
    EXPECT_THROW(compile("$nosuch(x)", env()), NameError);
    EXPECT_THROW(compile("$a2(x, y)", env()), Error);
}

TEST(Compile, ExpressionArguments) {
    check_against("$a2(x + 1)", 1, 300, [](Natural x, Natural) { return member(SetId::a(2), x + 1); });
    check_against("$fibshift(x, x)", 1, 50, [](Natural x, Natural) { return x == 0; });
}

TEST(Definitions, ShiftDifference) {
    const Environment e = define_formula(env(), "shdiff",
                                         "?lsd_fib En,r,w,x $fibcg(m,?lsd_cg w) & $fibsh2(m,n) & "
                                         "$cgsh2(?lsd_cg w,?lsd_cg x) & $fibcg(r, ?lsd_cg x) & r = n + z");
    const NamedAutomaton* d = e.find("shdiff");
    ASSERT_NE(d, nullptr);
    const std::vector<System> zz{System::Zeck, System::Zeck};
    EXPECT_TRUE(member_int(d->dfa, std::vector<Natural>{2, 1}, zz));
    for (Natural m = 0; m <= 2000; ++m) {
        const Natural diff = shift_cg2(m) - shift_f2(m);
        for (Natural z = 0; z <= 2; ++z) {
            ASSERT_EQ(member_int(d->dfa, std::vector<Natural>{m, z}, zz), z == diff) << m << "," << z;
        }
    }
}

TEST(Definitions, FormulaBuiltinsMatchTheirSources) {
    for (const char* name : {"sc", "fibsh2", "cgsh2", "phinlsd", "noverphilsd"}) {
        const BuiltinSource src = builtin_source(name);
        ASSERT_EQ(src.kind, "formula") << name;
        const Environment e = define_formula(env(), std::string("my_") + name, src.source);
        EXPECT_TRUE(equivalent(e.find(std::string("my_") + name)->dfa, builtin(name).dfa)) << name;
    }
}

TEST(Definitions, RegexDefinitionsAreValidityChecked) {
    const Environment e = define_regex(env(), "lead1", "1(0|1)*", {Domain::Zeck});
    const Dfa& d = e.find("lead1")->dfa;
    EXPECT_TRUE(equivalent(d, builtin("a2").dfa));
    EXPECT_TRUE(eval_closed("Ax $lead1(x) <=> $a2(x)", e));
}

TEST(Definitions, NameClashes) {
    const Environment e = define_formula(env(), "evenish", "Ey x = 2*y");
    EXPECT_THROW(define_formula(e, "evenish", "x = 1"), NameError);
    EXPECT_THROW(define_formula(e, "a2", "x = 1"), NameError);
    EXPECT_THROW(define_formula(e, "closed", "1 = 1"), Error);
    EXPECT_FALSE(env().contains("evenish"));
    EXPECT_EQ(e.local_names(), (std::vector<std::string>{"evenish"}));
    const Environment bare(false);
    EXPECT_FALSE(bare.contains("a2"));
    EXPECT_THROW(compile("$a2(x)", bare), NameError);
}

TEST(Suite, RunsStatementsInOrder) {
    const std::string text = R"suite(# parity of Zeckendorf sets
reg lead lsd_fib "1(0|1)*":
def twice "?lsd_fib Ey x = 2*y";
eval same "Ax $lead(x) <=> $a2(x)"
eval notall "Ax $twice(x)"
)suite";
    const auto [e, results] = run_suite(text, env());
    ASSERT_EQ(results.size(), 2u);
    EXPECT_EQ(results[0].name, "same");
    EXPECT_TRUE(results[0].value);
    EXPECT_EQ(results[0].line, 4u);
    EXPECT_FALSE(results[1].value);
    EXPECT_TRUE(e.contains("twice"));
}

TEST(Suite, ErrorsCarryLineNumbers) {
    try {
        run_suite("def ok \"x = 1\"\nbogus line\n", env());
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
    try {
        run_suite("\n\neval bad \"x = \"\n", env());
        FAIL() << "expected FormatError";
    } catch (const FormatError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
}
