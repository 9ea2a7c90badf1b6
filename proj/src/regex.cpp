#include "fibwalk/regex.hpp"

#include "fibwalk/error.hpp"

#include <cctype>

namespace fibwalk {

namespace {

class RegexParser {
public:
    RegexParser(std::string_view text, const Alphabet& alphabet) : text_(text), alpha_(alphabet) {}

    RegexAst parse() {
        RegexAst ast = alternation();
        skip_space();
        if (pos_ < text_.size()) {
            throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        }
        return ast;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
    }

    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    RegexAst alternation() {
        RegexAst first = concatenation();
        if (!peek('|')) {
            return first;
        }
        RegexAst alt{RegexAst::Kind::Alt, 0, {std::move(first)}};
        while (peek('|')) {
            ++pos_;
            alt.children.push_back(concatenation());
        }
        return alt;
    }

    RegexAst concatenation() {
        std::vector<RegexAst> parts;
        while (true) {
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] == '|' || text_[pos_] == ')') {
                break;
            }
            parts.push_back(starred());
        }
        if (parts.empty()) {
            return RegexAst::empty();
        }
        if (parts.size() == 1) {
            return std::move(parts.front());
        }
        return {RegexAst::Kind::Concat, 0, std::move(parts)};
    }

    RegexAst starred() {
        RegexAst a = atom();
        while (peek('*')) {
            ++pos_;
            a = RegexAst{RegexAst::Kind::Star, 0, {std::move(a)}};
        }
        return a;
    }

    RegexAst atom() {
        skip_space();
        const char c = text_[pos_];
        if (c == '(') {
            const std::size_t open = pos_++;
            RegexAst inner = alternation();
            if (!peek(')')) {
                throw ParseError("unbalanced '('", open);
            }
            ++pos_;
            return inner;
        }
        if (c == '[') {
            return bracket();
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            if (alpha_.tracks() != 1) {
                throw ParseError("bare digit in a " + std::to_string(alpha_.tracks()) +
                                     "-track pattern; use a bracketed tuple",
                                 pos_);
            }
            return RegexAst::sym(single(pos_++));
        }
        throw ParseError(std::string("unexpected '") + c + "'", pos_);
    }

    Symbol single(std::size_t at) {
        const int d = text_[at] - '0';
        if (d > alpha_.max_digit(0)) {
            throw ParseError("digit " + std::to_string(d) + " outside the alphabet", at);
        }
        const std::uint8_t col[1] = {static_cast<std::uint8_t>(d)};
        return alpha_.encode(col);
    }

    RegexAst bracket() {
        const std::size_t open = pos_++;
        const std::size_t close = text_.find(']', pos_);
        if (close == std::string_view::npos) {
            throw ParseError("unterminated '['", open);
        }
        const std::string_view body = text_.substr(pos_, close - pos_);
        RegexAst result;
        if (body.find(',') != std::string_view::npos) {
            std::vector<std::uint8_t> column;
            std::size_t i = pos_;
            bool want_digit = true;
            for (; i < close; ++i) {
                const char ch = text_[i];
                if (std::isspace(static_cast<unsigned char>(ch))) {
                    continue;
                }
                if (want_digit && std::isdigit(static_cast<unsigned char>(ch))) {
                    column.push_back(static_cast<std::uint8_t>(ch - '0'));
                    want_digit = false;
                } else if (!want_digit && ch == ',') {
                    want_digit = true;
                } else {
                    throw ParseError(std::string("unexpected '") + ch + "' in tuple", i);
                }
            }
            if (want_digit) {
                throw ParseError("tuple ends with ','", close);
            }
            if (column.size() != alpha_.tracks()) {
                throw ParseError("tuple of arity " + std::to_string(column.size()) + " in a " +
                                     std::to_string(alpha_.tracks()) + "-track pattern",
                                 open);
            }
            for (std::size_t t = 0; t < column.size(); ++t) {
                if (column[t] > alpha_.max_digit(t)) {
                    throw ParseError("digit " + std::to_string(column[t]) + " outside the alphabet of track " +
                                         std::to_string(t),
                                     open);
                }
            }
            result = RegexAst::sym(alpha_.encode(column));
        } else {
            if (alpha_.tracks() != 1) {
                throw ParseError("digit class in a " + std::to_string(alpha_.tracks()) + "-track pattern", open);
            }
            std::vector<RegexAst> options;
            for (std::size_t i = pos_; i < close; ++i) {
                const char ch = text_[i];
                if (ch == '|' || std::isspace(static_cast<unsigned char>(ch))) {
                    continue;
                }
                if (!std::isdigit(static_cast<unsigned char>(ch))) {
                    throw ParseError(std::string("unexpected '") + ch + "' in digit class", i);
                }
                options.push_back(RegexAst::sym(single(i)));
            }
            if (options.empty()) {
                throw ParseError("empty digit class", open);
            }
            result = options.size() == 1 ? std::move(options.front())
                                         : RegexAst{RegexAst::Kind::Alt, 0, std::move(options)};
        }
        pos_ = close + 1;
        return result;
    }

    std::string_view text_;
    const Alphabet& alpha_;
    std::size_t pos_ = 0;
};

struct Fragment {
    State start;
    State end;
};

Fragment thompson(const RegexAst& ast, Nfa& nfa) {
    switch (ast.kind) {
    case RegexAst::Kind::Empty: {
        const State s = nfa.add_state();
        const State e = nfa.add_state();
        nfa.add_epsilon(s, e);
        return {s, e};
    }
    case RegexAst::Kind::Symbol: {
        const State s = nfa.add_state();
        const State e = nfa.add_state();
        nfa.add_transition(s, ast.symbol, e);
        return {s, e};
    }
    case RegexAst::Kind::Alt: {
        const State s = nfa.add_state();
        const State e = nfa.add_state();
        for (const auto& child : ast.children) {
            const Fragment f = thompson(child, nfa);
            nfa.add_epsilon(s, f.start);
            nfa.add_epsilon(f.end, e);
        }
        return {s, e};
    }
    case RegexAst::Kind::Concat: {
        Fragment whole = thompson(ast.children.front(), nfa);
        for (std::size_t i = 1; i < ast.children.size(); ++i) {
            const Fragment f = thompson(ast.children[i], nfa);
            nfa.add_epsilon(whole.end, f.start);
            whole.end = f.end;
        }
        return whole;
    }
    case RegexAst::Kind::Star: {
        const State s = nfa.add_state();
        const State e = nfa.add_state();
        const Fragment f = thompson(ast.children.front(), nfa);
        nfa.add_epsilon(s, f.start);
        nfa.add_epsilon(s, e);
        nfa.add_epsilon(f.end, f.start);
        nfa.add_epsilon(f.end, e);
        return {s, e};
    }
    }
    throw std::logic_error("unknown regex node");
}

}  // namespace

RegexAst regex_parse(std::string_view pattern, const Alphabet& alphabet) {
    return RegexParser(pattern, alphabet).parse();
}

std::string to_string(const RegexAst& ast, const Alphabet& alphabet) {
    switch (ast.kind) {
    case RegexAst::Kind::Empty:
        return "()";
    case RegexAst::Kind::Symbol:
        if (alphabet.tracks() == 1) {
            return alphabet.label(ast.symbol);
        }
        return "[" + alphabet.label(ast.symbol) + "]";
    case RegexAst::Kind::Alt:
    case RegexAst::Kind::Concat: {
        const char sep = ast.kind == RegexAst::Kind::Alt ? '|' : '.';
        std::string out = "(";
        for (std::size_t i = 0; i < ast.children.size(); ++i) {
            if (i > 0) {
                out.push_back(sep);
            }
            out += to_string(ast.children[i], alphabet);
        }
        return out + ")";
    }
    case RegexAst::Kind::Star:
        return to_string(ast.children.front(), alphabet) + "*";
    }
    return {};
}

Dfa regex_to_dfa(const RegexAst& ast, const Alphabet& alphabet, std::size_t max_states) {
    Nfa nfa(alphabet);
    const Fragment f = thompson(ast, nfa);
    nfa.add_initial(f.start);
    nfa.set_accepting(f.end);
    return minimize(determinize(nfa, max_states));
}

Dfa compile_regex(std::string_view pattern, const Alphabet& alphabet, std::size_t max_states) {
    return regex_to_dfa(regex_parse(pattern, alphabet), alphabet, max_states);
}

}  // namespace fibwalk
