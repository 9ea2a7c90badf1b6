#include "fibwalk/automata.hpp"

#include "fibwalk/error.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace fibwalk {

namespace {

constexpr State kNone = std::numeric_limits<State>::max();

struct SubsetHash {
    std::size_t operator()(const std::vector<State>& v) const noexcept {
        std::size_t h = v.size();
        for (State x : v) {
            h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

}  // namespace

// ---------------------------------------------------------------- Alphabet

Alphabet::Alphabet(std::vector<int> max_digits) : max_(std::move(max_digits)) {
    if (max_.empty()) {
        throw InvalidInput("an alphabet needs at least one track");
    }
    stride_.reserve(max_.size());
    for (int m : max_) {
        if (m < 1 || m > 2) {
            throw InvalidInput("track digit bound must be 1 or 2, got " + std::to_string(m));
        }
        stride_.push_back(static_cast<Symbol>(size_));
        size_ *= static_cast<std::size_t>(m + 1);
        if (size_ > (1U << 24)) {
            throw InvalidInput("alphabet too large");
        }
    }
}

Symbol Alphabet::encode(std::span<const std::uint8_t> column) const {
    if (column.size() != max_.size()) {
        throw AlphabetMismatch("column has " + std::to_string(column.size()) + " digits, alphabet has " +
                               std::to_string(max_.size()) + " tracks");
    }
    Symbol s = 0;
    for (std::size_t t = 0; t < column.size(); ++t) {
        if (column[t] > max_[t]) {
            throw InvalidInput("digit " + std::to_string(column[t]) + " out of range on track " + std::to_string(t));
        }
        s += column[t] * stride_[t];
    }
    return s;
}

std::vector<std::uint8_t> Alphabet::decode(Symbol s) const {
    std::vector<std::uint8_t> out(max_.size());
    for (std::size_t t = 0; t < max_.size(); ++t) {
        out[t] = digit(s, t);
    }
    return out;
}

std::string Alphabet::label(Symbol s) const {
    std::string out;
    for (std::size_t t = 0; t < max_.size(); ++t) {
        if (t > 0) {
            out.push_back(',');
        }
        out.push_back(static_cast<char>('0' + digit(s, t)));
    }
    return out;
}

// --------------------------------------------------------------------- Dfa

Dfa::Dfa(Alphabet alphabet, std::size_t states, State initial, std::vector<char> accepting,
         std::vector<State> transitions)
    : alphabet_(std::move(alphabet)),
      states_(states),
      initial_(initial),
      accepting_(std::move(accepting)),
      table_(std::move(transitions)) {
    if (states_ == 0 || initial_ >= states_) {
        throw InvalidInput("initial state out of range");
    }
    if (accepting_.size() != states_) {
        throw InvalidInput("accepting flags do not match the state count");
    }
    if (table_.size() != states_ * alphabet_.size()) {
        throw InvalidInput("transition table is not total");
    }
    for (State t : table_) {
        if (t >= states_) {
            throw InvalidInput("transition target out of range");
        }
    }
}

Dfa Dfa::universal(const Alphabet& alphabet) {
    return Dfa(alphabet, 1, 0, {1}, std::vector<State>(alphabet.size(), 0));
}

Dfa Dfa::empty(const Alphabet& alphabet) {
    return Dfa(alphabet, 1, 0, {0}, std::vector<State>(alphabet.size(), 0));
}

State Dfa::run(std::span<const Symbol> word) const {
    State q = initial_;
    for (Symbol s : word) {
        q = next(q, s);
    }
    return q;
}

bool operator==(const Dfa& a, const Dfa& b) {
    return a.alphabet_ == b.alphabet_ && a.states_ == b.states_ && a.initial_ == b.initial_ &&
           a.accepting_ == b.accepting_ && a.table_ == b.table_;
}

// --------------------------------------------------------------------- Nfa

State Nfa::add_state(bool accepting) {
    accepting_.push_back(accepting ? 1 : 0);
    delta_.emplace_back(alphabet_.size());
    epsilon_.emplace_back();
    return static_cast<State>(accepting_.size() - 1);
}

void Nfa::add_transition(State from, Symbol s, State to) {
    auto& targets = delta_.at(from).at(s);
    if (std::find(targets.begin(), targets.end(), to) == targets.end()) {
        targets.push_back(to);
    }
}

Dfa determinize(const Nfa& nfa, std::size_t max_states) {
    const std::size_t sigma = nfa.alphabet().size();
    std::vector<char> mark(nfa.states(), 0);
    std::vector<State> stack;

    // Members of `set` are marked on entry; all marks are cleared on exit.
    auto close = [&](std::vector<State>& set) {
        stack.assign(set.begin(), set.end());
        while (!stack.empty()) {
            const State q = stack.back();
            stack.pop_back();
            for (State e : nfa.epsilon(q)) {
                if (!mark[e]) {
                    mark[e] = 1;
                    set.push_back(e);
                    stack.push_back(e);
                }
            }
        }
        for (State q : set) {
            mark[q] = 0;
        }
        std::sort(set.begin(), set.end());
    };

    std::vector<State> start;
    for (State q : nfa.initial()) {
        if (!mark[q]) {
            mark[q] = 1;
            start.push_back(q);
        }
    }
    close(start);

    std::unordered_map<std::vector<State>, State, SubsetHash> ids;
    std::vector<std::vector<State>> subsets;
    std::vector<State> table;
    std::vector<char> accepting;

    auto intern = [&](std::vector<State>&& set) -> State {
        auto it = ids.find(set);
        if (it != ids.end()) {
            return it->second;
        }
        if (subsets.size() >= max_states) {
            throw StateBudgetExceeded(max_states);
        }
        const auto id = static_cast<State>(subsets.size());
        bool acc = false;
        for (State q : set) {
            acc = acc || nfa.accepting(q);
        }
        accepting.push_back(acc ? 1 : 0);
        ids.emplace(set, id);
        subsets.push_back(std::move(set));
        return id;
    };

    intern(std::move(start));
    std::vector<State> next;
    for (std::size_t i = 0; i < subsets.size(); ++i) {
        for (Symbol s = 0; s < sigma; ++s) {
            next.clear();
            for (State q : subsets[i]) {
                for (State t : nfa.successors(q, s)) {
                    if (!mark[t]) {
                        mark[t] = 1;
                        next.push_back(t);
                    }
                }
            }
            close(next);
            const State id = intern(std::vector<State>(next));
            table.push_back(id);
        }
    }
    return Dfa(nfa.alphabet(), subsets.size(), 0, std::move(accepting), std::move(table));
}

Nfa reverse(const Dfa& a) {
    Nfa out(a.alphabet());
    for (std::size_t q = 0; q < a.states(); ++q) {
        out.add_state(q == a.initial());
    }
    const std::size_t sigma = a.alphabet().size();
    for (State q = 0; q < a.states(); ++q) {
        if (a.accepting(q)) {
            out.add_initial(q);
        }
        for (Symbol s = 0; s < sigma; ++s) {
            out.add_transition(a.next(q, s), s, q);
        }
    }
    return out;
}

Dfa complement(const Dfa& a) {
    std::vector<char> acc(a.states());
    for (std::size_t q = 0; q < a.states(); ++q) {
        acc[q] = a.accepting(static_cast<State>(q)) ? 0 : 1;
    }
    return Dfa(a.alphabet(), a.states(), a.initial(), std::move(acc), a.table());
}

namespace {

bool apply(BoolOp op, bool x, bool y) {
    switch (op) {
    case BoolOp::And:
        return x && y;
    case BoolOp::Or:
        return x || y;
    case BoolOp::Xor:
        return x != y;
    case BoolOp::Implies:
        return !x || y;
    case BoolOp::Iff:
        return x == y;
    }
    return false;
}

}  // namespace

Dfa product(const Dfa& a, const Dfa& b, BoolOp op, std::size_t max_states) {
    if (!(a.alphabet() == b.alphabet())) {
        throw AlphabetMismatch("product of automata over different alphabets");
    }
    const std::size_t sigma = a.alphabet().size();
    std::unordered_map<std::uint64_t, State> ids;
    std::vector<std::pair<State, State>> pairs;
    std::vector<State> table;
    std::vector<char> accepting;

    auto intern = [&](State x, State y) -> State {
        const std::uint64_t key = (static_cast<std::uint64_t>(x) << 32) | y;
        auto [it, inserted] = ids.try_emplace(key, static_cast<State>(pairs.size()));
        if (inserted) {
            if (pairs.size() >= max_states) {
                throw StateBudgetExceeded(max_states);
            }
            pairs.emplace_back(x, y);
            accepting.push_back(apply(op, a.accepting(x), b.accepting(y)) ? 1 : 0);
        }
        return it->second;
    };

    intern(a.initial(), b.initial());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [x, y] = pairs[i];
        for (Symbol s = 0; s < sigma; ++s) {
            table.push_back(intern(a.next(x, s), b.next(y, s)));
        }
    }
    return Dfa(a.alphabet(), pairs.size(), 0, std::move(accepting), std::move(table));
}

// ------------------------------------------------------------ minimization

namespace {

// Refinable partition over 0..n-1 with per-block marking.
class Partition {
public:
    explicit Partition(std::size_t n) : elems_(n), loc_(n), block_(n, 0) {
        for (std::size_t i = 0; i < n; ++i) {
            elems_[i] = static_cast<State>(i);
            loc_[i] = static_cast<State>(i);
        }
        first_.push_back(0);
        past_.push_back(static_cast<State>(n));
        marked_.push_back(0);
    }

    std::size_t blocks() const { return first_.size(); }
    State block_of(State e) const { return block_[e]; }
    std::size_t size(std::size_t b) const { return past_[b] - first_[b]; }
    std::span<const State> members(std::size_t b) const {
        return {elems_.data() + first_[b], elems_.data() + past_[b]};
    }

    void mark(State e) {
        const State b = block_[e];
        const State i = loc_[e];
        const State j = first_[b] + marked_[b];
        if (i < j) {
            return;
        }
        std::swap(elems_[i], elems_[j]);
        loc_[elems_[i]] = i;
        loc_[elems_[j]] = j;
        if (marked_[b]++ == 0) {
            touched_.push_back(b);
        }
    }

    // Splits every touched block into marked/unmarked parts. For each split,
    // `on_split(old_block, new_block)` is called; the new block holds the
    // marked part.
    template <typename F>
    void split(F&& on_split) {
        for (State b : touched_) {
            const State m = marked_[b];
            marked_[b] = 0;
            if (m == past_[b] - first_[b]) {
                continue;
            }
            const auto nb = static_cast<State>(first_.size());
            first_.push_back(first_[b]);
            past_.push_back(first_[b] + m);
            marked_.push_back(0);
            first_[b] += m;
            for (State i = first_[nb]; i < past_[nb]; ++i) {
                block_[elems_[i]] = nb;
            }
            on_split(b, nb);
        }
        touched_.clear();
    }

private:
    std::vector<State> elems_;
    std::vector<State> loc_;
    std::vector<State> block_;
    std::vector<State> first_;
    std::vector<State> past_;
    std::vector<State> marked_;
    std::vector<State> touched_;
};

}  // namespace

Dfa minimize(const Dfa& in) {
    const std::size_t sigma = in.alphabet().size();

    // Reachable part, renumbered.
    std::vector<State> id(in.states(), kNone);
    std::vector<State> order;
    id[in.initial()] = 0;
    order.push_back(in.initial());
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (Symbol s = 0; s < sigma; ++s) {
            const State t = in.next(order[i], s);
            if (id[t] == kNone) {
                id[t] = static_cast<State>(order.size());
                order.push_back(t);
            }
        }
    }
    const std::size_t n = order.size();
    std::vector<State> delta(n * sigma);
    for (std::size_t q = 0; q < n; ++q) {
        for (Symbol s = 0; s < sigma; ++s) {
            delta[q * sigma + s] = id[in.next(order[q], s)];
        }
    }

    // Inverse transitions, CSR per symbol.
    std::vector<State> inv_off(sigma * (n + 1), 0);
    std::vector<State> inv(sigma * n);
    for (std::size_t q = 0; q < n; ++q) {
        for (Symbol s = 0; s < sigma; ++s) {
            ++inv_off[s * (n + 1) + delta[q * sigma + s] + 1];
        }
    }
    for (Symbol s = 0; s < sigma; ++s) {
        State* off = inv_off.data() + s * (n + 1);
        for (std::size_t t = 0; t < n; ++t) {
            off[t + 1] += off[t];
        }
    }
    {
        std::vector<State> fill(inv_off);
        for (std::size_t q = 0; q < n; ++q) {
            for (Symbol s = 0; s < sigma; ++s) {
                const State t = delta[q * sigma + s];
                inv[s * n + fill[s * (n + 1) + t]++] = static_cast<State>(q);
            }
        }
    }

    Partition part(n);
    for (std::size_t q = 0; q < n; ++q) {
        if (in.accepting(order[q])) {
            part.mark(static_cast<State>(q));
        }
    }
    std::vector<std::pair<State, Symbol>> work;
    std::vector<char> in_work;
    auto push = [&](State b, Symbol s) {
        const std::size_t key = static_cast<std::size_t>(b) * sigma + s;
        if (in_work.size() <= key) {
            in_work.resize(std::max(key + 1, in_work.size() * 2), 0);
        }
        if (!in_work[key]) {
            in_work[key] = 1;
            work.emplace_back(b, s);
        }
    };
    auto in_worklist = [&](State b, Symbol s) {
        const std::size_t key = static_cast<std::size_t>(b) * sigma + s;
        return key < in_work.size() && in_work[key];
    };
    auto on_split = [&](State b, State nb) {
        for (Symbol c = 0; c < sigma; ++c) {
            if (in_worklist(b, c)) {
                push(nb, c);
            } else {
                push(part.size(nb) <= part.size(b) ? nb : b, c);
            }
        }
    };
    part.split([&](State b, State nb) {
        for (Symbol c = 0; c < sigma; ++c) {
            push(part.size(nb) <= part.size(b) ? nb : b, c);
        }
    });

    std::vector<State> members;
    while (!work.empty()) {
        const auto [b, s] = work.back();
        work.pop_back();
        in_work[static_cast<std::size_t>(b) * sigma + s] = 0;
        const auto span = part.members(b);
        members.assign(span.begin(), span.end());
        const State* off = inv_off.data() + s * (n + 1);
        for (State q : members) {
            for (State k = off[q]; k < off[q + 1]; ++k) {
                part.mark(inv[s * n + k]);
            }
        }
        part.split(on_split);
    }

    // Quotient with canonical BFS numbering.
    const std::size_t blocks = part.blocks();
    std::vector<State> canon(blocks, kNone);
    std::vector<State> rep;
    canon[part.block_of(0)] = 0;
    rep.push_back(0);
    std::vector<State> table;
    std::vector<char> accepting;
    for (std::size_t i = 0; i < rep.size(); ++i) {
        const State r = rep[i];
        accepting.push_back(in.accepting(order[r]) ? 1 : 0);
        for (Symbol s = 0; s < sigma; ++s) {
            const State tb = part.block_of(delta[r * sigma + s]);
            if (canon[tb] == kNone) {
                canon[tb] = static_cast<State>(rep.size());
                rep.push_back(part.members(tb)[0]);
            }
            table.push_back(canon[tb]);
        }
    }
    return Dfa(in.alphabet(), rep.size(), 0, std::move(accepting), std::move(table));
}

bool is_empty(const Dfa& a) {
    const std::size_t sigma = a.alphabet().size();
    std::vector<char> seen(a.states(), 0);
    std::vector<State> stack{a.initial()};
    seen[a.initial()] = 1;
    while (!stack.empty()) {
        const State q = stack.back();
        stack.pop_back();
        if (a.accepting(q)) {
            return false;
        }
        for (Symbol s = 0; s < sigma; ++s) {
            const State t = a.next(q, s);
            if (!seen[t]) {
                seen[t] = 1;
                stack.push_back(t);
            }
        }
    }
    return true;
}

bool is_universal(const Dfa& a) { return is_empty(complement(a)); }

bool equivalent(const Dfa& a, const Dfa& b) {
    if (!(a.alphabet() == b.alphabet())) {
        throw AlphabetMismatch("equivalence of automata over different alphabets");
    }
    return minimize(a) == minimize(b);
}

Dfa pad_close(const Dfa& a, std::size_t max_states) {
    const std::size_t n = a.states();
    const std::size_t sigma = a.alphabet().size();

    // zero_reach[q]: some 0^k (k >= 0) leads from q to acceptance.
    std::vector<std::vector<State>> zero_pred(n);
    for (State q = 0; q < n; ++q) {
        zero_pred[a.next(q, 0)].push_back(q);
    }
    std::vector<char> zero_reach(n, 0);
    std::vector<State> stack;
    for (State q = 0; q < n; ++q) {
        if (a.accepting(q)) {
            zero_reach[q] = 1;
            stack.push_back(q);
        }
    }
    while (!stack.empty()) {
        const State q = stack.back();
        stack.pop_back();
        for (State p : zero_pred[q]) {
            if (!zero_reach[p]) {
                zero_reach[p] = 1;
                stack.push_back(p);
            }
        }
    }

    // State (q, f): f records that the input so far is u 0^j with u zero-reaching.
    std::vector<State> id(2 * n, kNone);
    std::vector<State> order;
    auto intern = [&](State q, bool f) {
        const std::size_t key = 2 * static_cast<std::size_t>(q) + (f ? 1 : 0);
        if (id[key] == kNone) {
            if (order.size() >= max_states) {
                throw StateBudgetExceeded(max_states);
            }
            id[key] = static_cast<State>(order.size());
            order.push_back(static_cast<State>(key));
        }
        return id[key];
    };
    intern(a.initial(), zero_reach[a.initial()] != 0);
    std::vector<State> table;
    std::vector<char> accepting;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const State q = order[i] / 2;
        const bool f = (order[i] % 2) != 0;
        accepting.push_back(f ? 1 : 0);
        for (Symbol s = 0; s < sigma; ++s) {
            const State t = a.next(q, s);
            const bool nf = zero_reach[t] != 0 || (f && s == 0);
            table.push_back(intern(t, nf));
        }
    }
    return minimize(Dfa(a.alphabet(), order.size(), 0, std::move(accepting), std::move(table)));
}

Dfa project(const Dfa& a, std::size_t track, std::size_t max_states) {
    const Alphabet& alpha = a.alphabet();
    if (alpha.tracks() < 2) {
        throw InvalidInput("cannot project the only track of an automaton");
    }
    if (track >= alpha.tracks()) {
        throw InvalidInput("projected track out of range");
    }
    std::vector<int> rest;
    for (std::size_t t = 0; t < alpha.tracks(); ++t) {
        if (t != track) {
            rest.push_back(alpha.max_digit(t));
        }
    }
    Alphabet reduced(std::move(rest));
    std::vector<Symbol> image(alpha.size());
    std::vector<std::uint8_t> column;
    for (Symbol s = 0; s < alpha.size(); ++s) {
        column.clear();
        for (std::size_t t = 0; t < alpha.tracks(); ++t) {
            if (t != track) {
                column.push_back(alpha.digit(s, t));
            }
        }
        image[s] = reduced.encode(column);
    }
    Nfa nfa(reduced);
    for (std::size_t q = 0; q < a.states(); ++q) {
        nfa.add_state(a.accepting(static_cast<State>(q)));
    }
    nfa.add_initial(a.initial());
    for (State q = 0; q < a.states(); ++q) {
        for (Symbol s = 0; s < alpha.size(); ++s) {
            nfa.add_transition(q, image[s], a.next(q, s));
        }
    }
    return pad_close(minimize(determinize(nfa, max_states)), max_states);
}

Dfa remap_tracks(const Dfa& a, const Alphabet& target, std::span<const std::size_t> track_map) {
    const Alphabet& src = a.alphabet();
    if (track_map.size() != src.tracks()) {
        throw InvalidInput("track map size does not match the automaton");
    }
    std::vector<char> used(target.tracks(), 0);
    for (std::size_t t = 0; t < track_map.size(); ++t) {
        const std::size_t to = track_map[t];
        if (to >= target.tracks() || used[to]) {
            throw InvalidInput("track map is not an injection into the target alphabet");
        }
        used[to] = 1;
        if (target.max_digit(to) != src.max_digit(t)) {
            throw AlphabetMismatch("track " + std::to_string(t) + " digit bound differs from target track " +
                                   std::to_string(to));
        }
    }
    std::vector<Symbol> image(target.size());
    std::vector<std::uint8_t> column(src.tracks());
    for (Symbol s = 0; s < target.size(); ++s) {
        for (std::size_t t = 0; t < src.tracks(); ++t) {
            column[t] = target.digit(s, track_map[t]);
        }
        image[s] = src.encode(column);
    }
    std::vector<State> table(a.states() * target.size());
    for (State q = 0; q < a.states(); ++q) {
        for (Symbol s = 0; s < target.size(); ++s) {
            table[static_cast<std::size_t>(q) * target.size() + s] = a.next(q, image[s]);
        }
    }
    return Dfa(target, a.states(), a.initial(), a.accepting_flags(), std::move(table));
}

bool accepts_digits(const Dfa& a, std::span<const Digits> tracks) {
    const Alphabet& alpha = a.alphabet();
    if (tracks.size() != alpha.tracks()) {
        throw AlphabetMismatch("expected " + std::to_string(alpha.tracks()) + " tracks, got " +
                               std::to_string(tracks.size()));
    }
    std::size_t len = 0;
    for (const auto& w : tracks) {
        len = std::max(len, w.size());
    }
    std::vector<std::uint8_t> column(tracks.size());
    State q = a.initial();
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t t = 0; t < tracks.size(); ++t) {
            column[t] = i < tracks[t].size() ? tracks[t][i] : 0;
        }
        q = a.next(q, alpha.encode(column));
    }
    return a.accepting(q);
}

bool member_int(const Dfa& a, std::span<const Natural> values, std::span<const System> systems) {
    if (values.size() != systems.size()) {
        throw InvalidInput("one numeration system per value is required");
    }
    std::vector<Digits> words;
    words.reserve(values.size());
    for (std::size_t t = 0; t < values.size(); ++t) {
        words.push_back(encode(systems[t], values[t]));
    }
    return accepts_digits(a, words);
}

std::vector<Natural> enumerate(const Dfa& a, std::size_t track, System system, std::size_t limit,
                               Natural max_scan) {
    if (track >= a.alphabet().tracks()) {
        throw InvalidInput("enumerated track out of range");
    }
    Dfa single = a;
    for (std::size_t t = a.alphabet().tracks(); t-- > 0;) {
        if (t != track) {
            single = project(single, t);
        }
    }
    std::vector<Natural> out;
    if (is_empty(single)) {
        return out;
    }
    for (Natural n = 0; n < max_scan && out.size() < limit; ++n) {
        const Digits d = encode(system, n);
        if (accepts_digits(single, std::span<const Digits>(&d, 1))) {
            out.push_back(n);
        }
    }
    return out;
}

// ----------------------------------------------------------- serialization

std::string serialize(const Dfa& a) {
    std::ostringstream out;
    const Alphabet& alpha = a.alphabet();
    out << "tracks " << alpha.tracks();
    for (int m : alpha.max_digits()) {
        out << ' ' << m;
    }
    out << "\nstates " << a.states() << "\ninitial " << a.initial() << "\naccepting";
    for (State q = 0; q < a.states(); ++q) {
        if (a.accepting(q)) {
            out << ' ' << q;
        }
    }
    out << '\n';
    for (State q = 0; q < a.states(); ++q) {
        for (Symbol s = 0; s < alpha.size(); ++s) {
            out << q << ' ' << alpha.label(s) << ' ' << a.next(q, s) << '\n';
        }
    }
    return out.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

std::size_t parse_count(const std::string& tok, std::size_t line) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos || tok.size() > 9) {
        throw FormatError("expected a non-negative integer, got '" + tok + "'", line);
    }
    return static_cast<std::size_t>(std::stoul(tok));
}

}  // namespace

Dfa deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> lines;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) {
            raw.erase(hash);
        }
        auto toks = split_ws(raw);
        if (!toks.empty()) {
            lines.emplace_back(line_no, std::move(toks));
        }
    }
    const std::size_t eof_line = line_no + 1;
    std::size_t cursor = 0;
    auto expect = [&](const char* keyword) -> const std::pair<std::size_t, std::vector<std::string>>& {
        if (cursor >= lines.size()) {
            throw FormatError(std::string("missing '") + keyword + "' line", eof_line);
        }
        const auto& l = lines[cursor++];
        if (l.second[0] != keyword) {
            throw FormatError(std::string("expected '") + keyword + "', got '" + l.second[0] + "'", l.first);
        }
        return l;
    };

    const auto& tracks_line = expect("tracks");
    if (tracks_line.second.size() < 2) {
        throw FormatError("missing track count", tracks_line.first);
    }
    const std::size_t k = parse_count(tracks_line.second[1], tracks_line.first);
    if (tracks_line.second.size() != k + 2) {
        throw FormatError("expected " + std::to_string(k) + " digit bounds", tracks_line.first);
    }
    std::vector<int> bounds;
    for (std::size_t t = 0; t < k; ++t) {
        bounds.push_back(static_cast<int>(parse_count(tracks_line.second[t + 2], tracks_line.first)));
    }
    std::optional<Alphabet> alpha;
    try {
        alpha.emplace(bounds);
    } catch (const InvalidInput& e) {
        throw FormatError(e.what(), tracks_line.first);
    }

    const auto& states_line = expect("states");
    if (states_line.second.size() != 2) {
        throw FormatError("expected 'states n'", states_line.first);
    }
    const std::size_t n = parse_count(states_line.second[1], states_line.first);
    if (n == 0) {
        throw FormatError("an automaton needs at least one state", states_line.first);
    }

    const auto& initial_line = expect("initial");
    if (initial_line.second.size() != 2) {
        throw FormatError("expected 'initial i'", initial_line.first);
    }
    const std::size_t initial = parse_count(initial_line.second[1], initial_line.first);
    if (initial >= n) {
        throw FormatError("initial state out of range", initial_line.first);
    }

    const auto& acc_line = expect("accepting");
    std::vector<char> accepting(n, 0);
    for (std::size_t i = 1; i < acc_line.second.size(); ++i) {
        const std::size_t q = parse_count(acc_line.second[i], acc_line.first);
        if (q >= n) {
            throw FormatError("accepting state out of range", acc_line.first);
        }
        accepting[q] = 1;
    }

    const std::size_t sigma = alpha->size();
    std::vector<State> table(n * sigma, kNone);
    std::vector<std::uint8_t> column;
    for (; cursor < lines.size(); ++cursor) {
        const auto& [ln, toks] = lines[cursor];
        if (toks.size() != 3) {
            throw FormatError("expected 'src d1,..,dk dst'", ln);
        }
        const std::size_t src = parse_count(toks[0], ln);
        const std::size_t dst = parse_count(toks[2], ln);
        if (src >= n || dst >= n) {
            throw FormatError("state out of range", ln);
        }
        column.clear();
        std::istringstream digits(toks[1]);
        std::string d;
        while (std::getline(digits, d, ',')) {
            column.push_back(static_cast<std::uint8_t>(parse_count(d, ln)));
        }
        Symbol s = 0;
        try {
            s = alpha->encode(column);
        } catch (const Error& e) {
            throw FormatError(e.what(), ln);
        }
        auto& slot = table[src * sigma + s];
        if (slot != kNone) {
            throw FormatError("duplicate transition", ln);
        }
        slot = static_cast<State>(dst);
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i] == kNone) {
            throw FormatError("missing transition for state " + std::to_string(i / sigma) + " on " +
                                  alpha->label(static_cast<Symbol>(i % sigma)),
                              eof_line);
        }
    }
    return Dfa(*alpha, n, static_cast<State>(initial), std::move(accepting), std::move(table));
}

std::string to_dot(const Dfa& a, const std::string& name) {
    std::ostringstream out;
    out << "digraph \"" << name << "\" {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    out << "  __start [shape=point];\n";
    out << "  __start -> " << a.initial() << ";\n";
    for (State q = 0; q < a.states(); ++q) {
        if (a.accepting(q)) {
            out << "  " << q << " [shape=doublecircle];\n";
        }
    }
    for (State q = 0; q < a.states(); ++q) {
        for (Symbol s = 0; s < a.alphabet().size(); ++s) {
            out << "  " << q << " -> " << a.next(q, s) << " [label=\"" << a.alphabet().label(s) << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace fibwalk
