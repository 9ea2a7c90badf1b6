#include "fibwalk/numeration.hpp"

#include "fibwalk/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace fibwalk {

FibCache::FibCache() {
    values_.emplace_back(0);
    values_.emplace_back(1);
}

BigInt FibCache::get(std::size_t m) const {
    {
        std::shared_lock lock(mutex_);
        if (m < values_.size()) {
            return values_[m];
        }
    }
    std::unique_lock lock(mutex_);
    while (values_.size() <= m) {
        const std::size_t n = values_.size();
        values_.push_back(values_[n - 1] + values_[n - 2]);
    }
    return values_[m];
}

FibCache& FibCache::global() {
    static FibCache cache;
    return cache;
}

BigInt fib(std::size_t m) { return FibCache::global().get(m); }

namespace {

constexpr std::size_t kMaxFib64 = 93;

constexpr std::array<Natural, kMaxFib64 + 1> make_fib_table() {
    std::array<Natural, kMaxFib64 + 1> t{};
    t[0] = 0;
    t[1] = 1;
    for (std::size_t i = 2; i <= kMaxFib64; ++i) {
        t[i] = t[i - 1] + t[i - 2];
    }
    return t;
}

constexpr auto kFib = make_fib_table();

}  // namespace

Natural fib64(std::size_t m) {
    if (m > kMaxFib64) {
        throw InvalidInput("F_" + std::to_string(m) + " does not fit in 64 bits");
    }
    return kFib[m];
}

Natural isqrt(unsigned __int128 x) {
    using u128 = unsigned __int128;
    auto r = static_cast<u128>(std::sqrt(static_cast<long double>(x)));
    while (r * r > x) {
        --r;
    }
    while ((r + 1) * (r + 1) <= x) {
        ++r;
    }
    return static_cast<Natural>(r);
}

Natural floor_phi(Natural n) {
    const auto wide = static_cast<unsigned __int128>(n);
    const unsigned __int128 root = isqrt(5 * wide * wide);
    return static_cast<Natural>((wide + root) / 2);
}

Natural floor_inv_phi(Natural n) { return floor_phi(n) - n; }

Natural floor_phi2(Natural n) { return floor_phi(n) + n; }

std::string_view to_string(System s) { return s == System::Zeck ? "zeck" : "cg"; }

int max_digit(System s) { return s == System::Zeck ? 1 : 2; }

bool is_zeck_valid(std::span<const std::uint8_t> digits) {
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] > 1) {
            return false;
        }
        if (i + 1 < digits.size() && digits[i] == 1 && digits[i + 1] == 1) {
            return false;
        }
    }
    return true;
}

bool is_cg_valid(std::span<const std::uint8_t> digits) {
    bool pending_two = false;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        const auto d = digits[i];
        if (d > 2) {
            return false;
        }
        if (i % 2 == 1) {
            if (d != 0) {
                return false;
            }
            continue;
        }
        if (d == 0) {
            pending_two = false;
        } else if (d == 2) {
            if (pending_two) {
                return false;
            }
            pending_two = true;
        }
    }
    return true;
}

bool is_valid(System s, std::span<const std::uint8_t> digits) {
    return s == System::Zeck ? is_zeck_valid(digits) : is_cg_valid(digits);
}

Natural digit_value(std::span<const std::uint8_t> digits) {
    Natural total = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] == 0) {
            continue;
        }
        const Natural term = fib64(i + 2) * digits[i];
        if (term / digits[i] != fib64(i + 2) || total > std::numeric_limits<Natural>::max() - term) {
            throw InvalidInput("digit word value overflows 64 bits");
        }
        total += term;
    }
    return total;
}

namespace {

Digits parse_digits(std::string_view text, int max) {
    Digits out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c < '0' || c > '0' + max) {
            throw ParseError(std::string("invalid digit '") + c + "'", i);
        }
        out.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return out;
}

std::string digits_str(const Digits& d) {
    std::string s;
    s.reserve(d.size());
    for (auto x : d) {
        s.push_back(static_cast<char>('0' + x));
    }
    return s;
}

Digits strip(Digits d) {
    while (!d.empty() && d.back() == 0) {
        d.pop_back();
    }
    return d;
}

}  // namespace

ZeckWord::ZeckWord(Digits digits) : digits_(std::move(digits)) {
    if (!is_zeck_valid(digits_)) {
        throw InvalidInput("not a Zeckendorf word: " + digits_str(digits_));
    }
}

ZeckWord ZeckWord::parse(std::string_view text) { return ZeckWord(parse_digits(text, 1)); }

ZeckWord ZeckWord::canonical() const { return ZeckWord(strip(digits_)); }

std::string ZeckWord::str() const { return digits_str(digits_); }

CGWord::CGWord(Digits digits) : digits_(std::move(digits)) {
    if (!is_cg_valid(digits_)) {
        throw InvalidInput("not a Chung-Graham word: " + digits_str(digits_));
    }
}

CGWord CGWord::parse(std::string_view text) { return CGWord(parse_digits(text, 2)); }

CGWord CGWord::canonical() const { return CGWord(strip(digits_)); }

std::string CGWord::str() const { return digits_str(digits_); }

ZeckWord zeck_encode(Natural n) {
    if (n == 0) {
        return {};
    }
    std::size_t top = 2;
    while (top + 1 <= kMaxFib64 && fib64(top + 1) <= n) {
        ++top;
    }
    Digits d(top - 1, 0);
    Natural rest = n;
    for (std::size_t k = top; k >= 2 && rest > 0; --k) {
        if (fib64(k) <= rest) {
            d[k - 2] = 1;
            rest -= fib64(k);
            --k;  // the next index is excluded
            if (k < 2) {
                break;
            }
        }
    }
    return ZeckWord(strip(std::move(d)));
}

Natural zeck_decode(const ZeckWord& w) { return digit_value(w.digits()); }

namespace {

// max_lower[p][blocked]: largest value reachable using the even positions
// below p, MSD-first, where `blocked` means a 2 was placed above without an
// intervening even-position 0.
struct CgBounds {
    std::vector<std::array<Natural, 2>> max_lower;

    CgBounds() {
        max_lower.push_back({0, 0});
        for (std::size_t p = 2; p + 2 <= kMaxFib64; p += 2) {
            const std::size_t q = p - 2;
            const Natural w = fib64(q + 2);
            const auto& below = max_lower[q / 2];
            std::array<Natural, 2> cur{};
            for (int blocked = 0; blocked < 2; ++blocked) {
                Natural best = below[0];
                best = std::max(best, w + below[blocked]);
                if (!blocked) {
                    best = std::max(best, 2 * w + below[1]);
                }
                cur[blocked] = best;
            }
            max_lower.push_back(cur);
        }
    }

    Natural at(std::size_t p, bool blocked) const { return max_lower[p / 2][blocked ? 1 : 0]; }
};

const CgBounds& cg_bounds() {
    static const CgBounds b;
    return b;
}

void cg_search(const CgBounds& bounds, long q, bool blocked, Natural rem, Digits& cur,
               Digits& found, int& solutions) {
    if (q < 0) {
        if (rem == 0) {
            ++solutions;
            if (solutions == 1) {
                found = cur;
            }
        }
        return;
    }
    const auto pos = static_cast<std::size_t>(q);
    const Natural w = fib64(pos + 2);
    for (std::uint8_t d = 0; d <= 2; ++d) {
        if (d == 2 && blocked) {
            continue;
        }
        const Natural used = w * d;
        if (used > rem) {
            break;
        }
        const bool next_blocked = d == 0 ? false : (d == 2 ? true : blocked);
        if (rem - used > bounds.at(pos, next_blocked)) {
            continue;
        }
        cur[pos] = d;
        cg_search(bounds, q - 2, next_blocked, rem - used, cur, found, solutions);
        cur[pos] = 0;
        if (solutions > 1) {
            return;
        }
    }
}

}  // namespace

CGWord cg_encode(Natural n) {
    if (n == 0) {
        return {};
    }
    const auto& bounds = cg_bounds();
    std::size_t p = 0;
    while (bounds.at(p, false) < n) {
        p += 2;
        if (p / 2 >= bounds.max_lower.size()) {
            throw InvalidInput("value too large for Chung-Graham encoding");
        }
    }
    Digits cur(p, 0);
    Digits found;
    int solutions = 0;
    cg_search(bounds, static_cast<long>(p) - 2, false, n, cur, found, solutions);
    if (solutions != 1) {
        throw std::logic_error("Chung-Graham representation of " + std::to_string(n) + " is not unique (" +
                               std::to_string(solutions) + " solutions)");
    }
    return CGWord(strip(std::move(found)));
}

Natural cg_decode(const CGWord& w) { return digit_value(w.digits()); }

Digits encode(System s, Natural n) {
    return s == System::Zeck ? zeck_encode(n).digits() : cg_encode(n).digits();
}

Natural decode(System s, std::span<const std::uint8_t> digits) {
    if (!is_valid(s, digits)) {
        throw InvalidInput(std::string("not a valid ") + std::string(to_string(s)) + " word");
    }
    return digit_value(digits);
}

Natural shift_f(Natural n) {
    Digits d = zeck_encode(n).digits();
    d.insert(d.begin(), 0);
    return digit_value(d);
}

Natural shift_f2(Natural n) {
    Digits d = zeck_encode(n).digits();
    d.insert(d.begin(), 2, 0);
    return digit_value(d);
}

Natural shift_cg2(Natural n) {
    Digits d = cg_encode(n).digits();
    d.insert(d.begin(), 2, 0);
    return digit_value(d);
}

namespace {

std::size_t least_index(const Digits& d) {
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] != 0) {
            return i + 2;
        }
    }
    throw InvalidInput("0 has no least Fibonacci index");
}

}  // namespace

std::size_t least_zeck_index(Natural n) { return least_index(zeck_encode(n).digits()); }

std::size_t least_cg_index(Natural n) { return least_index(cg_encode(n).digits()); }

Parity parity_class(Natural n) {
    if (n == 0) {
        throw InvalidInput("parity_class is undefined for 0");
    }
    return least_zeck_index(n) % 2 == 0 ? Parity::Even : Parity::Odd;
}

Natural sums_complement(Natural n) { return 2 * floor_phi(n) + n + 1; }

SetId SetId::a(std::size_t k) {
    if (k < 2) {
        throw InvalidInput("A_k requires k >= 2");
    }
    return SetId(Kind::A, k, Subclass::Any, {});
}

SetId SetId::u(std::size_t k) { return SetId(Kind::U, k, Subclass::Any, {}); }

SetId SetId::b(std::size_t two_k, Subclass sub) {
    if (two_k < 2 || two_k % 2 != 0) {
        throw InvalidInput("B_2k requires an even index >= 2");
    }
    return SetId(Kind::B, two_k, sub, {});
}

SetId SetId::r(ZeckWord prefix) { return SetId(Kind::R, 0, Subclass::Any, std::move(prefix)); }

SetId SetId::feven() { return SetId(Kind::FEven, 0, Subclass::Any, {}); }

SetId SetId::fodd() { return SetId(Kind::FOdd, 0, Subclass::Any, {}); }

SetId SetId::sc() { return SetId(Kind::SC, 0, Subclass::Any, {}); }

namespace {

std::size_t parse_index(std::string_view text, std::string_view what) {
    std::size_t value = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw InvalidInput("bad " + std::string(what) + " index '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

SetId SetId::parse(std::string_view text) {
    if (text == "feven") {
        return feven();
    }
    if (text == "fodd") {
        return fodd();
    }
    if (text == "sc") {
        return sc();
    }
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw InvalidInput("unknown set '" + std::string(text) + "'");
    }
    const auto head = text.substr(0, colon);
    const auto rest = text.substr(colon + 1);
    if (head == "A") {
        return a(parse_index(rest, "A"));
    }
    if (head == "U") {
        return u(parse_index(rest, "U"));
    }
    if (head == "R") {
        return r(ZeckWord::parse(rest));
    }
    if (head == "B") {
        const auto sub_colon = rest.find(':');
        if (sub_colon == std::string_view::npos) {
            return b(parse_index(rest, "B"));
        }
        const auto sub = rest.substr(sub_colon + 1);
        if (sub != "1" && sub != "2") {
            throw InvalidInput("B subclass must be 1 or 2");
        }
        return b(parse_index(rest.substr(0, sub_colon), "B"), sub == "1" ? Subclass::One : Subclass::Two);
    }
    throw InvalidInput("unknown set '" + std::string(text) + "'");
}

std::string SetId::str() const {
    switch (kind_) {
    case Kind::A:
        return "A:" + std::to_string(index_);
    case Kind::U:
        return "U:" + std::to_string(index_);
    case Kind::B: {
        std::string s = "B:" + std::to_string(index_);
        if (subclass_ == Subclass::One) {
            s += ":1";
        } else if (subclass_ == Subclass::Two) {
            s += ":2";
        }
        return s;
    }
    case Kind::R:
        return "R:" + prefix_.str();
    case Kind::FEven:
        return "feven";
    case Kind::FOdd:
        return "fodd";
    case Kind::SC:
        return "sc";
    }
    return {};
}

namespace {

bool is_sums_complement(Natural n) {
    Natural lo = 0;
    Natural hi = n;
    while (lo < hi) {
        const Natural mid = lo + (hi - lo) / 2;
        if (sums_complement(mid) < n) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return sums_complement(lo) == n;
}

}  // namespace

bool member(const SetId& set, Natural n) {
    switch (set.kind()) {
    case SetId::Kind::A:
        return n > 0 && least_zeck_index(n) == set.index();
    case SetId::Kind::U:
        return n == 0 || least_zeck_index(n) >= set.index() + 2;
    case SetId::Kind::B: {
        if (n == 0) {
            return false;
        }
        const Digits d = cg_encode(n).digits();
        const std::size_t pos = least_index(d) - 2;
        if (pos + 2 != set.index()) {
            return false;
        }
        switch (set.subclass()) {
        case SetId::Subclass::Any:
            return true;
        case SetId::Subclass::One:
            return d[pos] == 1;
        case SetId::Subclass::Two:
            return d[pos] == 2;
        }
        return false;
    }
    case SetId::Kind::R: {
        const Digits d = zeck_encode(n).digits();
        const Digits& b = set.prefix().digits();
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::uint8_t digit = i < d.size() ? d[i] : 0;
            if (digit != b[i]) {
                return false;
            }
        }
        return true;
    }
    case SetId::Kind::FEven:
        return n > 0 && parity_class(n) == Parity::Even;
    case SetId::Kind::FOdd:
        return n > 0 && parity_class(n) == Parity::Odd;
    case SetId::Kind::SC:
        return is_sums_complement(n);
    }
    return false;
}

std::vector<Natural> first_members(const SetId& set, std::size_t count) {
    std::vector<Natural> out;
    out.reserve(count);
    for (Natural n = 0; out.size() < count; ++n) {
        if (member(set, n)) {
            out.push_back(n);
        }
    }
    return out;
}

GammaForms gamma_b(const ZeckWord& b) {
    const Digits& d = b.digits();
    const std::size_t m = d.size();
    if (m == 0) {
        throw InvalidInput("gamma_b needs a non-empty prefix word");
    }
    GammaForms g;
    for (std::size_t i = 0; i < m; ++i) {
        g.y_b += static_cast<std::int64_t>(d[i] * fib64(i + 2));
    }
    for (std::size_t k = 1; k < m; ++k) {
        if (d[k - 1] == 0 && d[k] == 0) {
            g.x_b += static_cast<std::int64_t>(fib64(k));
        }
    }
    if (d[m - 1] == 0) {
        // The last digit is zero, so summing to m-2 equals Y_b.
        g.dekking = g.y_b - static_cast<std::int64_t>(fib64(m + 1));
    } else {
        g.dekking = g.y_b - static_cast<std::int64_t>(fib64(m + 2));
    }
    g.t00 = -1 - g.x_b;
    return g;
}

}  // namespace fibwalk
