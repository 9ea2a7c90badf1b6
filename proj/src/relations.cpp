#include "fibwalk/relations.hpp"

#include "fibwalk/error.hpp"
#include "fibwalk/logic.hpp"
#include "fibwalk/regex.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace fibwalk {

System system_of(Domain d) {
    return d == Domain::Zeck || d == Domain::Binary ? System::Zeck : System::Cg;
}

int max_digit(Domain d) { return max_digit(system_of(d)); }

bool is_checked(Domain d) { return d == Domain::Zeck || d == Domain::Cg; }

Domain checked_domain(System s) { return s == System::Zeck ? Domain::Zeck : Domain::Cg; }

Domain raw_domain(System s) { return s == System::Zeck ? Domain::Binary : Domain::Ternary; }

std::string_view to_string(Domain d) {
    switch (d) {
    case Domain::Zeck:
        return "lsd_fib";
    case Domain::Cg:
        return "lsd_cg";
    case Domain::Binary:
        return "{0,1}";
    case Domain::Ternary:
        return "{0,1,2}";
    }
    return "?";
}

Alphabet alphabet_of(std::span<const Domain> domains) {
    std::vector<int> maxes;
    maxes.reserve(domains.size());
    for (Domain d : domains) {
        maxes.push_back(max_digit(d));
    }
    return Alphabet(std::move(maxes));
}

Dfa zeck_valid() {
    // 0: previous digit 0, 1: previous digit 1, 2: dead
    return Dfa(Alphabet({1}), 3, 0, {1, 1, 0}, {0, 1, 0, 2, 2, 2});
}

Dfa cg_valid() {
    // 2 * parity + pending; 4 is dead. "pending" means a 2 was seen on an
    // even position with no even-position 0 after it.
    std::vector<State> table(5 * 3, 4);
    for (State pending = 0; pending < 2; ++pending) {
        const State even = pending;
        const State odd = 2 + pending;
        table[even * 3 + 0] = 2 + 0;
        table[even * 3 + 1] = 2 + pending;
        table[even * 3 + 2] = pending ? 4 : 2 + 1;
        table[odd * 3 + 0] = pending;
    }
    return Dfa(Alphabet({2}), 5, 0, {1, 1, 1, 1, 0}, std::move(table));
}

Dfa domain_universe(std::span<const Domain> domains) {
    const Alphabet alpha = alphabet_of(domains);
    Dfa result = Dfa::universal(alpha);
    for (std::size_t t = 0; t < domains.size(); ++t) {
        if (!is_checked(domains[t])) {
            continue;
        }
        const Dfa single = domains[t] == Domain::Zeck ? zeck_valid() : cg_valid();
        const std::size_t map[1] = {t};
        result = minimize(product(result, remap_tracks(single, alpha, map), BoolOp::And));
    }
    return result;
}

DiffState step(DiffState state, std::int64_t column_sum) {
    return {state.value + state.shifted + column_sum, state.value + column_sum};
}

std::int64_t pruning_bound(const LinearRelation& rel) {
    std::int64_t total = std::llabs(rel.constant);
    for (std::size_t t = 0; t < rel.coefficients.size(); ++t) {
        total += std::llabs(rel.coefficients[t]) * max_digit(rel.systems.at(t));
    }
    return 2 * total + 4;
}

Dfa linear_eq(const LinearRelation& rel, std::int64_t extra_bound, std::size_t max_states) {
    if (rel.coefficients.size() != rel.systems.size() || rel.coefficients.empty()) {
        throw InvalidInput("linear relation needs one system per coefficient and at least one track");
    }
    std::vector<Domain> domains;
    std::vector<int> maxes;
    for (System s : rel.systems) {
        domains.push_back(checked_domain(s));
        maxes.push_back(max_digit(s));
    }
    const Alphabet alpha(maxes);
    std::vector<std::int64_t> column_sum(alpha.size());
    for (Symbol s = 0; s < alpha.size(); ++s) {
        std::int64_t sum = 0;
        for (std::size_t t = 0; t < alpha.tracks(); ++t) {
            sum += rel.coefficients[t] * alpha.digit(s, t);
        }
        column_sum[s] = sum;
    }
    const std::int64_t bound = pruning_bound(rel) + extra_bound;

    // Most-significant-first synthesis; state 0 is the sink for pruned carries.
    struct Hash {
        std::size_t operator()(const DiffState& d) const noexcept {
            return std::hash<std::int64_t>()(d.value * 1000003 + d.shifted);
        }
    };
    std::unordered_map<DiffState, State, Hash> index;
    std::deque<DiffState> queue;
    std::vector<DiffState> states{{}};
    std::vector<State> table(alpha.size(), 0);
    std::vector<char> accepting{0};
    auto intern = [&](DiffState d) {
        auto [it, inserted] = index.emplace(d, static_cast<State>(states.size()));
        if (inserted) {
            if (states.size() >= max_states) {
                throw StateBudgetExceeded(max_states);
            }
            states.push_back(d);
            accepting.push_back(d.value == rel.constant ? 1 : 0);
            table.resize(table.size() + alpha.size());
            queue.push_back(d);
        }
        return it->second;
    };
    const State start = intern({});
    while (!queue.empty()) {
        const DiffState d = queue.front();
        queue.pop_front();
        const State q = index.at(d);
        for (Symbol s = 0; s < alpha.size(); ++s) {
            const DiffState n = step(d, column_sum[s]);
            State target = 0;
            if (std::llabs(n.value) <= bound && std::llabs(n.shifted) <= bound) {
                target = intern(n);
            }
            table[static_cast<std::size_t>(q) * alpha.size() + s] = target;
        }
    }
    const Dfa msd(alpha, states.size(), start, std::move(accepting), std::move(table));
    const Dfa lsd = minimize(determinize(reverse(msd), max_states));
    return minimize(product(lsd, domain_universe(domains), BoolOp::And, max_states));
}

Dfa fibcg() {
    static const Dfa cached = linear_eq({{1, -1}, 0, {System::Zeck, System::Cg}});
    return cached;
}

namespace {

enum class Kind { Regex, Formula, Native };

struct Recipe {
    std::string_view name;
    Kind kind;
    std::vector<Domain> tracks;
    std::string_view source;
};

const std::vector<Recipe>& recipes() {
    using D = Domain;
    static const std::vector<Recipe> table = {
        {"fibshift", Kind::Regex, {D::Binary, D::Binary}, "([0,0]|([1,0][1,1]*[0,1]))*"},
        {"cgshift", Kind::Regex, {D::Ternary, D::Ternary}, "([0,0]|([1,0][0,1])|([2,0][0,2]))*"},
        {"fibsh2", Kind::Formula, {}, "?lsd_fib Ey $fibshift(x,y) & $fibshift(y,z)"},
        {"cgsh2", Kind::Formula, {}, "?lsd_cg Ey $cgshift(x,y) & $cgshift(y,z)"},
        {"fibcg", Kind::Native, {D::Zeck, D::Cg}, "u = x"},
        {"fibeven", Kind::Regex, {D::Zeck}, "(00)*1(0|1)*"},
        {"fibodd", Kind::Regex, {D::Zeck}, "0(00)*1(0|1)*"},
        {"a2", Kind::Regex, {D::Zeck}, "1(0|1)*"},
        {"a2k", Kind::Regex, {D::Zeck}, "(00)*1(0|1)*"},
        {"u2", Kind::Regex, {D::Zeck}, "00(0|1)*"},
        {"b2k", Kind::Regex, {D::Cg}, "(00)*1(0|1|2)*"},
        {"b2", Kind::Regex, {D::Cg}, "[1|2][0|1|2]*"},
        {"b4", Kind::Regex, {D::Cg}, "00[1|2][0|1|2]*"},
        {"b21", Kind::Regex, {D::Cg}, "1(0|1|2)*"},
        {"b41", Kind::Regex, {D::Cg}, "001(0|1|2)*"},
        {"cg0", Kind::Regex, {D::Cg}, "0(0|1|2)*"},
        {"samek", Kind::Regex, {D::Zeck, D::Cg}, "[0,0]*[1,1]([0,0]|[0,1]|[0,2]|[1,0]|[1,1]|[1,2])*"},
        {"mk", Kind::Regex, {D::Zeck, D::Zeck}, "[0,0]*[1,1]([0,0]|[0,1])*"},
        {"phinlsd", Kind::Formula, {}, "?lsd_fib (n=0 & y=0) | (Eu,v u+1=n & $fibshift(u,v) & y=v+1)"},
        {"noverphilsd", Kind::Formula, {}, "?lsd_fib Et $phinlsd(n,t) & t = y + n"},
        {"sc", Kind::Formula, {}, "?lsd_fib En,y $phinlsd(n,y) & x = 2*y+n+1"},
    };
    return table;
}

const Recipe* find_recipe(std::string_view name) {
    for (const Recipe& r : recipes()) {
        if (r.name == name) {
            return &r;
        }
    }
    return nullptr;
}

NamedAutomaton build(const Recipe& r) {
    switch (r.kind) {
    case Kind::Regex: {
        const Alphabet alpha = alphabet_of(r.tracks);
        Dfa raw = compile_regex(r.source, alpha);
        Dfa typed = minimize(product(raw, domain_universe(r.tracks), BoolOp::And));
        return {minimize(pad_close(typed)), r.tracks};
    }
    case Kind::Formula:
        return logic::compile(r.source, logic::Environment(true)).named();
    case Kind::Native:
        return {fibcg(), r.tracks};
    }
    throw std::logic_error("unknown builtin kind");
}

struct Slot {
    std::once_flag once;
    std::unique_ptr<NamedAutomaton> value;
};

Slot& slot(std::size_t i) {
    static std::deque<Slot> slots(recipes().size());
    return slots[i];
}

}  // namespace

const NamedAutomaton& builtin(std::string_view name) {
    const Recipe* r = find_recipe(name);
    if (r == nullptr) {
        throw NameError("unknown automaton '" + std::string(name) + "'");
    }
    Slot& s = slot(static_cast<std::size_t>(r - recipes().data()));
    std::call_once(s.once, [&] { s.value = std::make_unique<NamedAutomaton>(build(*r)); });
    return *s.value;
}

bool is_builtin(std::string_view name) { return find_recipe(name) != nullptr; }

std::vector<std::string> builtin_names() {
    std::vector<std::string> names;
    for (const Recipe& r : recipes()) {
        names.emplace_back(r.name);
    }
    return names;
}

BuiltinSource builtin_source(std::string_view name) {
    const Recipe* r = find_recipe(name);
    if (r == nullptr) {
        throw NameError("unknown automaton '" + std::string(name) + "'");
    }
    static constexpr std::string_view kinds[] = {"regex", "formula", "native"};
    return {kinds[static_cast<int>(r->kind)], r->source};
}

}  // namespace fibwalk
