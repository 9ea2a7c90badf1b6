#include "fibwalk/logic.hpp"

#include "fibwalk/error.hpp"
#include "fibwalk/regex.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <variant>

namespace fibwalk::logic {

bool LinearTerm::is_variable() const {
    return constant == 0 && coefficients.size() == 1 && coefficients.begin()->second == 1;
}

namespace {

// ---------------------------------------------------------------- lexer

enum class Tok { Int, Ident, Call, Tag, Op, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
    std::int64_t number = 0;
};

std::vector<Token> lex(std::string_view src) {
    static const std::vector<std::string_view> ops = {"<=>", "<=", "=>", ">=", "!=", "=", "<", ">", "&", "|",
                                                      "~",   "+",  "-",  "*",  "(",  ")", ","};
    std::vector<Token> out;
    std::size_t i = 0;
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::int64_t v = 0;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                if (v > (INT64_MAX - 9) / 10) {
                    throw ParseError("integer literal too large", start);
                }
                v = v * 10 + (src[i++] - '0');
            }
            out.push_back({Tok::Int, std::string(src.substr(start, i - start)), start, v});
            continue;
        }
        if (c == '$' || c == '?' || std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            if (c == '$' || c == '?') {
                ++i;
            }
            const std::size_t name_start = i;
            while (i < src.size() && ident_char(src[i])) {
                ++i;
            }
            if (i == name_start) {
                throw ParseError(std::string("expected a name after '") + c + "'", start);
            }
            const Tok kind = c == '$' ? Tok::Call : c == '?' ? Tok::Tag : Tok::Ident;
            out.push_back({kind, std::string(src.substr(name_start, i - name_start)), start});
            continue;
        }
        bool matched = false;
        for (std::string_view op : ops) {
            if (src.substr(i, op.size()) == op) {
                out.push_back({Tok::Op, std::string(op), start});
                i += op.size();
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
    }
    out.push_back({Tok::End, "", src.size()});
    return out;
}

System tag_system(const Token& t) {
    if (t.text == "lsd_fib") {
        return System::Zeck;
    }
    if (t.text == "lsd_cg") {
        return System::Cg;
    }
    throw ParseError("unknown numeration tag '?" + t.text + "'", t.pos);
}

// ---------------------------------------------------------------- parser

LinearTerm add(const LinearTerm& a, const LinearTerm& b, std::int64_t sign) {
    LinearTerm r = a;
    r.constant += sign * b.constant;
    for (const auto& [v, c] : b.coefficients) {
        const std::int64_t next = (r.coefficients[v] += sign * c);
        if (next == 0) {
            r.coefficients.erase(v);
        }
    }
    return r;
}

LinearTerm scale(const LinearTerm& a, std::int64_t k) {
    LinearTerm r;
    if (k == 0) {
        return r;
    }
    r.constant = a.constant * k;
    for (const auto& [v, c] : a.coefficients) {
        r.coefficients[v] = c * k;
    }
    return r;
}

class Parser {
public:
    Parser(std::string_view src, Formula& out) : toks_(lex(src)), out_(out) {}

    Node parse() {
        if (cur().kind == Tok::Tag) {
            out_.default_system = tag_system(cur());
            ++i_;
        }
        Node n = iff();
        if (cur().kind != Tok::End) {
            throw ParseError("unexpected '" + cur().text + "'", cur().pos);
        }
        return n;
    }

private:
    const Token& cur() const { return toks_[i_]; }
    bool is_op(std::string_view op) const { return cur().kind == Tok::Op && cur().text == op; }
    void expect(std::string_view op) {
        if (!is_op(op)) {
            throw ParseError("expected '" + std::string(op) + "'" +
                                 (cur().kind == Tok::End ? " before end of input" : " near '" + cur().text + "'"),
                             cur().pos);
        }
        ++i_;
    }

    Node binary(Node::Kind kind, Node a, Node b, std::size_t pos) {
        Node n;
        n.kind = kind;
        n.position = pos;
        n.children.push_back(std::move(a));
        n.children.push_back(std::move(b));
        return n;
    }

    Node iff() {
        Node left = implies();
        while (is_op("<=>")) {
            const std::size_t pos = cur().pos;
            ++i_;
            left = binary(Node::Kind::Iff, std::move(left), implies(), pos);
        }
        return left;
    }

    Node implies() {
        Node left = disjunction();
        if (is_op("=>")) {
            const std::size_t pos = cur().pos;
            ++i_;
            return binary(Node::Kind::Implies, std::move(left), implies(), pos);
        }
        return left;
    }

    Node disjunction() {
        Node left = conjunction();
        while (is_op("|")) {
            const std::size_t pos = cur().pos;
            ++i_;
            left = binary(Node::Kind::Or, std::move(left), conjunction(), pos);
        }
        return left;
    }

    Node conjunction() {
        Node left = unary();
        while (is_op("&")) {
            const std::size_t pos = cur().pos;
            ++i_;
            left = binary(Node::Kind::And, std::move(left), unary(), pos);
        }
        return left;
    }

    static bool is_quantifier(const Token& t) {
        return t.kind == Tok::Ident && (t.text[0] == 'E' || t.text[0] == 'A');
    }

    Node unary() {
        if (is_op("~")) {
            Node n;
            n.kind = Node::Kind::Not;
            n.position = cur().pos;
            ++i_;
            n.children.push_back(unary());
            return n;
        }
        if (is_quantifier(cur())) {
            return quantifier();
        }
        return primary();
    }

    std::string variable_name() {
        if (cur().kind == Tok::Tag) {
            const System s = tag_system(cur());
            ++i_;
            if (cur().kind != Tok::Ident || is_quantifier(cur())) {
                throw ParseError("expected a variable after the tag", cur().pos);
            }
            tag(cur().text, s, cur().pos);
        }
        if (cur().kind != Tok::Ident || is_quantifier(cur())) {
            throw ParseError("expected a variable", cur().pos);
        }
        return toks_[i_++].text;
    }

    void tag(const std::string& v, System s, std::size_t pos) {
        auto [it, inserted] = out_.tags.emplace(v, s);
        if (!inserted && it->second != s) {
            throw ParseError("variable '" + v + "' tagged with two systems", pos);
        }
    }

    Node quantifier() {
        const Token& q = cur();
        Node n;
        n.kind = q.text[0] == 'E' ? Node::Kind::Exists : Node::Kind::Forall;
        n.position = q.pos;
        ++i_;
        std::string first = q.text.substr(1);
        if (first.empty()) {
            first = variable_name();
        } else if (!std::islower(static_cast<unsigned char>(first[0]))) {
            throw ParseError("quantified variable must start with a lowercase letter", q.pos + 1);
        }
        n.variables.push_back(first);
        while (is_op(",")) {
            ++i_;
            n.variables.push_back(variable_name());
        }
        std::set<std::string> seen;
        for (const auto& v : n.variables) {
            if (!seen.insert(v).second) {
                throw ParseError("variable '" + v + "' quantified twice", q.pos);
            }
        }
        n.children.push_back(iff());
        return n;
    }

    Node primary() {
        if (cur().kind == Tok::Call) {
            return call();
        }
        if (is_op("(")) {
            const std::size_t save = i_;
            try {
                return comparison();
            } catch (const ParseError&) {
                i_ = save;
            }
            ++i_;
            Node inner = iff();
            expect(")");
            return inner;
        }
        return comparison();
    }

    Node call() {
        Node n;
        n.kind = Node::Kind::Call;
        n.position = cur().pos;
        n.name = cur().text;
        ++i_;
        expect("(");
        n.args.push_back(term());
        while (is_op(",")) {
            ++i_;
            n.args.push_back(term());
        }
        expect(")");
        return n;
    }

    Node comparison() {
        Node n;
        n.kind = Node::Kind::Compare;
        n.position = cur().pos;
        n.lhs = term();
        static const std::vector<std::pair<std::string_view, Compare>> cmps = {
            {"=", Compare::Eq}, {"!=", Compare::Ne}, {"<", Compare::Lt},
            {"<=", Compare::Le}, {">", Compare::Gt}, {">=", Compare::Ge}};
        for (const auto& [text, op] : cmps) {
            if (is_op(text)) {
                n.op = op;
                ++i_;
                n.rhs = term();
                return n;
            }
        }
        throw ParseError(cur().kind == Tok::End ? "expected a comparison before end of input"
                                                : "expected a comparison near '" + cur().text + "'",
                         cur().pos);
    }

    Term term() {
        Term t = factor();
        while (is_op("+") || is_op("-")) {
            const bool minus = cur().text == "-";
            ++i_;
            Term f = factor();
            t.value = add(t.value, f.value, minus ? -1 : 1);
            t.guards.insert(t.guards.end(), f.guards.begin(), f.guards.end());
            if (minus) {
                t.guards.push_back(t.value);
            }
        }
        return t;
    }

    Term factor() {
        if (cur().kind == Tok::Int) {
            const std::int64_t k = cur().number;
            ++i_;
            if (is_op("*")) {
                ++i_;
                Term inner = atom();
                inner.value = scale(inner.value, k);
                return inner;
            }
            Term t;
            t.value.constant = k;
            return t;
        }
        Term t = atom();
        if (is_op("*")) {
            ++i_;
            if (cur().kind != Tok::Int) {
                throw ParseError("multiplication needs an integer factor", cur().pos);
            }
            t.value = scale(t.value, cur().number);
            ++i_;
        }
        return t;
    }

    Term atom() {
        if (is_op("(")) {
            ++i_;
            Term t = term();
            expect(")");
            return t;
        }
        if (cur().kind == Tok::Int) {
            Term t;
            t.value.constant = cur().number;
            ++i_;
            return t;
        }
        Term t;
        t.value.coefficients[variable_name()] = 1;
        return t;
    }

    std::vector<Token> toks_;
    Formula& out_;
    std::size_t i_ = 0;
};

// ------------------------------------------------------------ variable order

// Appearance order within a term follows the text; the map inside
// LinearTerm is sorted, so the parser's order is recovered from positions.
struct Walker {
    const std::string& source;
    std::vector<std::string> free;
    std::set<std::string> seen;

    void visit_var(const std::string& v, const std::set<std::string>& bound) {
        if (!bound.count(v) && seen.insert(v).second) {
            free.push_back(v);
        }
    }

    void visit_term(const Term& t, const std::set<std::string>& bound, std::size_t from) {
        std::vector<std::pair<std::size_t, std::string>> at;
        for (const auto& [v, c] : t.value.coefficients) {
            at.emplace_back(first_occurrence(v, from), v);
        }
        for (const auto& g : t.guards) {
            for (const auto& [v, c] : g.coefficients) {
                at.emplace_back(first_occurrence(v, from), v);
            }
        }
        std::sort(at.begin(), at.end());
        for (const auto& [p, v] : at) {
            visit_var(v, bound);
        }
    }

    std::size_t first_occurrence(const std::string& v, std::size_t from) const {
        auto ident = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };
        for (std::size_t p = source.find(v, from); p != std::string::npos; p = source.find(v, p + 1)) {
            const bool left = p == 0 || (!ident(source[p - 1]) && source[p - 1] != '$' && source[p - 1] != '?');
            const bool right = p + v.size() >= source.size() || !ident(source[p + v.size()]);
            if (left && right) {
                return p;
            }
        }
        return source.size();
    }

    void visit(const Node& n, std::set<std::string> bound) {
        switch (n.kind) {
        case Node::Kind::Compare: {
            Term both = n.lhs;
            both.guards.push_back(n.rhs.value);
            both.guards.insert(both.guards.end(), n.rhs.guards.begin(), n.rhs.guards.end());
            visit_term(both, bound, n.position);
            return;
        }
        case Node::Kind::Call:
            for (const auto& a : n.args) {
                visit_term(a, bound, n.position);
            }
            return;
        case Node::Kind::Exists:
        case Node::Kind::Forall:
            bound.insert(n.variables.begin(), n.variables.end());
            [[fallthrough]];
        default:
            for (const auto& c : n.children) {
                visit(c, bound);
            }
        }
    }
};

}  // namespace

System Formula::system_of(const std::string& variable) const {
    const auto it = tags.find(variable);
    return it == tags.end() ? default_system : it->second;
}

std::vector<std::string> Formula::free_variables() const {
    Walker w{source, {}, {}};
    w.visit(root, {});
    return w.free;
}

Formula parse(std::string_view source) {
    Formula f;
    f.source = std::string(source);
    Parser p(source, f);
    f.root = p.parse();
    return f;
}

// ---------------------------------------------------------------- environment

Environment::Environment(bool with_builtins, std::size_t max_states)
    : defs_(std::make_shared<const Map>()), builtins_(with_builtins), max_states_(max_states) {}

const NamedAutomaton* Environment::find(std::string_view name) const {
    const auto it = defs_->find(name);
    if (it != defs_->end()) {
        return it->second.get();
    }
    if (builtins_ && is_builtin(name)) {
        return &builtin(name);
    }
    return nullptr;
}

Environment Environment::define(const std::string& name, NamedAutomaton automaton) const {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) {
        throw NameError("invalid automaton name '" + name + "'");
    }
    if (contains(name)) {
        throw NameError("automaton '" + name + "' is already defined");
    }
    if (automaton.tracks.size() != automaton.dfa.alphabet().tracks()) {
        throw InvalidInput("track list does not match the automaton alphabet");
    }
    auto next = std::make_shared<Map>(*defs_);
    next->emplace(name, std::make_shared<const NamedAutomaton>(std::move(automaton)));
    Environment env = *this;
    env.defs_ = std::move(next);
    return env;
}

Environment Environment::with_max_states(std::size_t max_states) const {
    Environment env = *this;
    env.max_states_ = max_states;
    return env;
}

std::vector<std::string> Environment::local_names() const {
    std::vector<std::string> names;
    for (const auto& [name, a] : *defs_) {
        names.push_back(name);
    }
    return names;
}

NamedAutomaton Compiled::named() const {
    if (!dfa) {
        throw Error("a closed formula has no automaton");
    }
    return {*dfa, domains};
}

// ---------------------------------------------------------------- compiler

namespace {

// A relation over named variables; the automaton accepts only domain-valid
// tuples and is closed under trailing zero columns.
struct Rel {
    std::vector<std::string> vars;
    Dfa dfa;
};

using Value = std::variant<bool, Rel>;

class Compiler {
public:
    Compiler(const Formula& f, const Environment& env) : f_(f), env_(env), budget_(env.max_states()) {
        type_variables(f.root);
    }

    Compiled run() {
        const std::vector<std::string> free = f_.free_variables();
        Value v = node(f_.root, false);
        Compiled out;
        out.variables = free;
        for (const auto& name : free) {
            out.domains.push_back(domain(name));
        }
        if (free.empty()) {
            if (const bool* b = std::get_if<bool>(&v)) {
                out.truth = *b;
            } else {
                out.truth = !is_empty(std::get<Rel>(v).dfa);
            }
            return out;
        }
        out.dfa = lift(v, free);
        return out;
    }

private:
    // ------------------------------------------------------------ domains

    void type_term(const Term& t) {
        for (const auto& [v, c] : t.value.coefficients) {
            typed_.insert(v);
        }
        for (const auto& g : t.guards) {
            for (const auto& [v, c] : g.coefficients) {
                typed_.insert(v);
            }
        }
    }

    void type_variables(const Node& n) {
        if (n.kind == Node::Kind::Compare) {
            type_term(n.lhs);
            type_term(n.rhs);
        } else if (n.kind == Node::Kind::Call) {
            const NamedAutomaton* a = env_.find(n.name);
            if (a == nullptr) {
                throw NameError("unknown automaton '$" + n.name + "'");
            }
            if (a->tracks.size() != n.args.size()) {
                throw ParseError("$" + n.name + " takes " + std::to_string(a->tracks.size()) + " arguments, got " +
                                     std::to_string(n.args.size()),
                                 n.position);
            }
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                const Term& arg = n.args[i];
                if (arg.value.is_variable() && arg.guards.empty()) {
                    if (is_checked(a->tracks[i])) {
                        typed_.insert(arg.value.coefficients.begin()->first);
                    }
                } else {
                    type_term(arg);
                }
            }
        }
        for (const auto& c : n.children) {
            type_variables(c);
        }
    }

    System system(const std::string& v) const {
        const auto it = temp_system_.find(v);
        return it != temp_system_.end() ? it->second : f_.system_of(v);
    }

    Domain domain(const std::string& v) const {
        return typed_.count(v) ? checked_domain(system(v)) : raw_domain(system(v));
    }

    std::vector<Domain> domains(const std::vector<std::string>& vars) const {
        std::vector<Domain> out;
        for (const auto& v : vars) {
            out.push_back(domain(v));
        }
        return out;
    }

    const Dfa& universe(const std::vector<std::string>& vars) {
        const std::vector<Domain> d = domains(vars);
        auto it = universes_.find(d);
        if (it == universes_.end()) {
            it = universes_.emplace(d, domain_universe(d)).first;
        }
        return it->second;
    }

    // ------------------------------------------------------------ algebra

    Dfa lift(const Value& v, const std::vector<std::string>& target) {
        if (const bool* b = std::get_if<bool>(&v)) {
            return *b ? universe(target) : Dfa::empty(alphabet_of(domains(target)));
        }
        const Rel& r = std::get<Rel>(v);
        if (r.vars == target) {
            return r.dfa;
        }
        std::vector<std::size_t> map;
        for (const auto& name : r.vars) {
            map.push_back(static_cast<std::size_t>(std::find(target.begin(), target.end(), name) - target.begin()));
        }
        const Dfa moved = remap_tracks(r.dfa, alphabet_of(domains(target)), map);
        if (target.size() == r.vars.size()) {
            return minimize(moved);
        }
        return minimize(product(moved, universe(target), BoolOp::And, budget_));
    }

    Value negate(const Value& v) {
        if (const bool* b = std::get_if<bool>(&v)) {
            return !*b;
        }
        const Rel& r = std::get<Rel>(v);
        return Rel{r.vars, minimize(product(complement(r.dfa), universe(r.vars), BoolOp::And, budget_))};
    }

    Value combine(const Value& a, const Value& b, BoolOp op) {
        const bool* ca = std::get_if<bool>(&a);
        const bool* cb = std::get_if<bool>(&b);
        if (ca || cb) {
            switch (op) {
            case BoolOp::And:
                if (ca) return *ca ? b : Value(false);
                return *cb ? a : Value(false);
            case BoolOp::Or:
                if (ca) return *ca ? Value(true) : b;
                return *cb ? Value(true) : a;
            case BoolOp::Implies:
                if (ca) return *ca ? b : Value(true);
                return *cb ? Value(true) : negate(a);
            case BoolOp::Iff:
                if (ca) return *ca ? b : negate(b);
                return *cb ? a : negate(a);
            case BoolOp::Xor:
                if (ca) return *ca ? negate(b) : b;
                return *cb ? negate(a) : a;
            }
        }
        const Rel& ra = std::get<Rel>(a);
        const Rel& rb = std::get<Rel>(b);
        std::vector<std::string> vars = ra.vars;
        for (const auto& v : rb.vars) {
            if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
                vars.push_back(v);
            }
        }
        Dfa result = product(lift(a, vars), lift(b, vars), op, budget_);
        if (op != BoolOp::And && op != BoolOp::Or) {
            result = product(result, universe(vars), BoolOp::And, budget_);
        }
        return Rel{vars, minimize(result)};
    }

    Value exists(const Value& v, const std::string& var) {
        if (std::holds_alternative<bool>(v)) {
            return v;
        }
        const Rel& r = std::get<Rel>(v);
        const auto it = std::find(r.vars.begin(), r.vars.end(), var);
        if (it == r.vars.end()) {
            return v;
        }
        if (r.vars.size() == 1) {
            return !is_empty(r.dfa);
        }
        const std::size_t track = static_cast<std::size_t>(it - r.vars.begin());
        std::vector<std::string> rest = r.vars;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(track));
        return Rel{rest, project(r.dfa, track, budget_)};
    }

    // ------------------------------------------------------------ atoms

    // Relation sum coeffs * vars = constant over the variables it mentions.
    Value linear(const LinearTerm& lhs_minus_rhs) {
        if (lhs_minus_rhs.coefficients.empty()) {
            return lhs_minus_rhs.constant == 0;
        }
        LinearRelation rel;
        std::vector<std::string> vars;
        for (const auto& [v, c] : lhs_minus_rhs.coefficients) {
            vars.push_back(v);
            rel.coefficients.push_back(c);
            rel.systems.push_back(system(v));
        }
        rel.constant = -lhs_minus_rhs.constant;
        return Rel{vars, linear_eq(rel, 0, budget_)};
    }

    std::string fresh(System s) {
        const std::string name = "#" + std::to_string(counter_++);
        temp_system_[name] = s;
        typed_.insert(name);
        return name;
    }

    // expr >= 0, i.e. there is d with expr = d.
    Value nonnegative(const LinearTerm& expr) {
        bool trivial = expr.constant >= 0;
        for (const auto& [v, c] : expr.coefficients) {
            trivial = trivial && c >= 0;
        }
        if (trivial) {
            return true;
        }
        if (expr.coefficients.empty()) {
            return expr.constant >= 0;
        }
        const std::string d = fresh(f_.default_system);
        LinearTerm t = expr;
        t.coefficients[d] = -1;
        return exists(linear(t), d);
    }

    static bool all_nonnegative(const LinearTerm& t) {
        if (t.constant < 0) {
            return false;
        }
        return std::all_of(t.coefficients.begin(), t.coefficients.end(), [](const auto& p) { return p.second >= 0; });
    }

    Value guards(const Term& t, const LinearTerm* implied_by) {
        Value acc = true;
        for (const auto& g : t.guards) {
            if (implied_by != nullptr && g == t.value && all_nonnegative(*implied_by)) {
                continue;
            }
            acc = combine(acc, nonnegative(g), BoolOp::And);
        }
        return acc;
    }

    Value compare(const Node& n) {
        LinearTerm diff = add(n.lhs.value, n.rhs.value, -1);
        Value rel;
        if (diff.coefficients.empty()) {
            const std::int64_t k = diff.constant;
            switch (n.op) {
            case Compare::Eq: rel = k == 0; break;
            case Compare::Ne: rel = k != 0; break;
            case Compare::Lt: rel = k < 0; break;
            case Compare::Le: rel = k <= 0; break;
            case Compare::Gt: rel = k > 0; break;
            case Compare::Ge: rel = k >= 0; break;
            }
        } else {
            switch (n.op) {
            case Compare::Eq:
                rel = linear(diff);
                break;
            case Compare::Ne:
                rel = negate(linear(diff));
                break;
            case Compare::Lt:  // rhs - lhs - 1 >= 0
                diff.constant += 1;
                rel = nonnegative(scale(diff, -1));
                break;
            case Compare::Le:
                rel = nonnegative(scale(diff, -1));
                break;
            case Compare::Gt:
                diff.constant -= 1;
                rel = nonnegative(diff);
                break;
            case Compare::Ge:
                rel = nonnegative(diff);
                break;
            }
        }
        const bool eq = n.op == Compare::Eq;
        rel = combine(rel, guards(n.lhs, eq ? &n.rhs.value : nullptr), BoolOp::And);
        return combine(rel, guards(n.rhs, eq ? &n.lhs.value : nullptr), BoolOp::And);
    }

    Value call(const Node& n) {
        const NamedAutomaton& a = *env_.find(n.name);
        std::vector<std::string> vars;
        std::vector<std::string> temps;
        Value side = true;
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            const Term& arg = n.args[i];
            const System want = system_of(a.tracks[i]);
            if (arg.value.is_variable() && arg.guards.empty()) {
                const std::string& v = arg.value.coefficients.begin()->first;
                if (system(v) != want) {
                    throw Error("mixed-system call: argument " + std::to_string(i + 1) + " of $" + n.name +
                                " expects " + std::string(to_string(want)) + " but '" + v + "' is " +
                                std::string(to_string(system(v))));
                }
                if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
                    vars.push_back(v);
                    continue;
                }
            }
            for (const auto& [v, c] : arg.value.coefficients) {
                if (system(v) != want) {
                    throw Error("mixed-system call: argument " + std::to_string(i + 1) + " of $" + n.name +
                                " expects " + std::string(to_string(want)) + " but '" + v + "' is " +
                                std::string(to_string(system(v))));
                }
            }
            const std::string t = fresh(want);
            vars.push_back(t);
            temps.push_back(t);
            LinearTerm eq = arg.value;
            eq.coefficients[t] -= 1;
            side = combine(side, linear(eq), BoolOp::And);
            const LinearTerm self = arg.value;
            side = combine(side, guards(arg, &self), BoolOp::And);
        }
        Value v = Rel{vars, minimize(product(a.dfa, universe(vars), BoolOp::And, budget_))};
        v = combine(v, side, BoolOp::And);
        for (const auto& t : temps) {
            v = exists(v, t);
        }
        return v;
    }

    // ------------------------------------------------------------ formulas

    using Literal = std::pair<const Node*, bool>;

    static void conjuncts(const Node& n, bool neg, std::vector<Literal>& out) {
        if (n.kind == Node::Kind::Not) {
            conjuncts(n.children[0], !neg, out);
        } else if ((n.kind == Node::Kind::And && !neg) || (n.kind == Node::Kind::Or && neg)) {
            conjuncts(n.children[0], neg, out);
            conjuncts(n.children[1], neg, out);
        } else if (n.kind == Node::Kind::Implies && neg) {
            conjuncts(n.children[0], false, out);
            conjuncts(n.children[1], true, out);
        } else {
            out.emplace_back(&n, neg);
        }
    }

    static bool mentions(const Value& v, const std::string& var) {
        const Rel* r = std::get_if<Rel>(&v);
        return r != nullptr && std::find(r->vars.begin(), r->vars.end(), var) != r->vars.end();
    }

    // Exists vars. (body, negated), conjuncts combined left to right with
    // each variable projected away once no later conjunct mentions it.
    Value exists_over(const std::vector<std::string>& quantified, const Node& body, bool neg) {
        std::vector<Literal> parts;
        conjuncts(body, neg, parts);
        std::vector<Value> values;
        for (const auto& [node_ptr, n] : parts) {
            values.push_back(node(*node_ptr, n));
            if (const bool* b = std::get_if<bool>(&values.back()); b && !*b) {
                return false;
            }
        }
        Value acc = true;
        for (std::size_t i = 0; i < values.size(); ++i) {
            acc = combine(acc, values[i], BoolOp::And);
            for (const auto& var : quantified) {
                if (!mentions(acc, var)) {
                    continue;
                }
                bool later = false;
                for (std::size_t j = i + 1; j < values.size() && !later; ++j) {
                    later = mentions(values[j], var);
                }
                if (!later) {
                    acc = exists(acc, var);
                }
            }
            if (const bool* b = std::get_if<bool>(&acc); b && !*b) {
                return false;
            }
        }
        return acc;
    }

    Value node(const Node& n, bool neg) {
        switch (n.kind) {
        case Node::Kind::Not:
            return node(n.children[0], !neg);
        case Node::Kind::And:
        case Node::Kind::Or: {
            const bool conj = (n.kind == Node::Kind::And) != neg;
            return combine(node(n.children[0], neg), node(n.children[1], neg), conj ? BoolOp::And : BoolOp::Or);
        }
        case Node::Kind::Implies:
            if (neg) {
                return combine(node(n.children[0], false), node(n.children[1], true), BoolOp::And);
            }
            return combine(node(n.children[0], true), node(n.children[1], false), BoolOp::Or);
        case Node::Kind::Iff:
            return combine(node(n.children[0], false), node(n.children[1], false), neg ? BoolOp::Xor : BoolOp::Iff);
        case Node::Kind::Exists: {
            Value v = exists_over(n.variables, n.children[0], false);
            return neg ? negate(v) : v;
        }
        case Node::Kind::Forall: {
            Value v = exists_over(n.variables, n.children[0], true);
            return neg ? v : negate(v);
        }
        case Node::Kind::Compare: {
            Value v = compare(n);
            return neg ? negate(v) : v;
        }
        case Node::Kind::Call: {
            Value v = call(n);
            return neg ? negate(v) : v;
        }
        }
        throw std::logic_error("unknown formula node");
    }

    const Formula& f_;
    const Environment& env_;
    std::size_t budget_;
    std::set<std::string> typed_;
    std::map<std::string, System> temp_system_;
    std::map<std::vector<Domain>, Dfa> universes_;
    std::size_t counter_ = 0;
};

}  // namespace

Compiled compile(const Formula& f, const Environment& env) { return Compiler(f, env).run(); }

Compiled compile(std::string_view source, const Environment& env) { return compile(parse(source), env); }

bool eval_closed(const Formula& f, const Environment& env) {
    const auto free = f.free_variables();
    if (!free.empty()) {
        std::string names;
        for (const auto& v : free) {
            names += (names.empty() ? "" : ", ") + v;
        }
        throw Error("formula has free variables: " + names);
    }
    return compile(f, env).truth;
}

bool eval_closed(std::string_view source, const Environment& env) { return eval_closed(parse(source), env); }

Environment define_regex(const Environment& env, const std::string& name, std::string_view pattern,
                         const std::vector<Domain>& tracks) {
    if (tracks.empty()) {
        throw InvalidInput("a regex definition needs at least one track");
    }
    const Alphabet alpha = alphabet_of(tracks);
    const Dfa raw = compile_regex(pattern, alpha, env.max_states());
    const Dfa typed = minimize(product(raw, domain_universe(tracks), BoolOp::And, env.max_states()));
    return env.define(name, {minimize(pad_close(typed, env.max_states())), tracks});
}

Environment define_formula(const Environment& env, const std::string& name, std::string_view source) {
    const Compiled c = compile(source, env);
    if (!c.dfa) {
        throw Error("definition '" + name + "' has no free variables");
    }
    return env.define(name, c.named());
}

namespace {

std::string quoted(std::istringstream& in, std::size_t line) {
    in >> std::ws;
    if (in.get() != '"') {
        throw FormatError("expected a quoted string", line);
    }
    std::string body;
    if (!std::getline(in, body, '"')) {
        throw FormatError("unterminated string", line);
    }
    std::string rest;
    std::getline(in, rest);
    rest.erase(std::remove_if(rest.begin(), rest.end(), [](unsigned char c) { return std::isspace(c); }),
               rest.end());
    if (!rest.empty() && rest != ":" && rest != ";") {
        throw FormatError("trailing text after string: " + rest, line);
    }
    return body;
}

Domain parse_domain(const std::string& word, std::size_t line) {
    if (word == "lsd_fib" || word == "?lsd_fib") return Domain::Zeck;
    if (word == "lsd_cg" || word == "?lsd_cg") return Domain::Cg;
    if (word == "{0,1}") return Domain::Binary;
    if (word == "{0,1,2}") return Domain::Ternary;
    throw FormatError("unknown track '" + word + "'", line);
}

}  // namespace

std::pair<Environment, std::vector<SuiteResult>> run_suite(const std::string& text, const Environment& env) {
    Environment current = env;
    std::vector<SuiteResult> results;
    std::istringstream lines(text);
    std::string raw;
    std::size_t number = 0;
    while (std::getline(lines, raw)) {
        ++number;
        const auto first = raw.find_first_not_of(" \t\r");
        if (first == std::string::npos || raw[first] == '#') {
            continue;
        }
        std::istringstream in(raw);
        std::string keyword;
        std::string name;
        in >> keyword >> name;
        if (name.empty()) {
            throw FormatError("missing name", number);
        }
        try {
            if (keyword == "reg") {
                std::vector<Domain> tracks;
                while (true) {
                    in >> std::ws;
                    if (in.peek() == '"' || in.peek() == EOF) {
                        break;
                    }
                    std::string word;
                    in >> word;
                    tracks.push_back(parse_domain(word, number));
                }
                current = define_regex(current, name, quoted(in, number), tracks);
            } else if (keyword == "def") {
                current = define_formula(current, name, quoted(in, number));
            } else if (keyword == "eval") {
                const std::string source = quoted(in, number);
                results.push_back({name, source, eval_closed(source, current), number});
            } else {
                throw FormatError("unknown statement '" + keyword + "'", number);
            }
        } catch (const FormatError&) {
            throw;
        } catch (const Error& e) {
            throw FormatError(e.what(), number);
        }
    }
    return {current, results};
}

}  // namespace fibwalk::logic
