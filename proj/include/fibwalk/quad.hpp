#pragma once

#include "fibwalk/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace fibwalk {

using Rational = boost::multiprecision::cpp_rational;

/// Exact element p + q*sqrt(5) of Q(sqrt 5).
class QuadExact {
public:
    QuadExact() = default;
    QuadExact(Rational p, Rational q) : p_(std::move(p)), q_(std::move(q)) {}
    explicit QuadExact(long long integer) : p_(integer), q_(0) {}

    static QuadExact phi() { return {Rational(1, 2), Rational(1, 2)}; }
    static QuadExact psi() { return {Rational(1, 2), Rational(-1, 2)}; }
    static QuadExact sqrt5() { return {Rational(0), Rational(1)}; }

    const Rational& rational_part() const noexcept { return p_; }
    const Rational& sqrt5_part() const noexcept { return q_; }

    QuadExact conjugate() const { return {p_, -q_}; }
    /// Field norm p^2 - 5 q^2.
    Rational norm() const { return p_ * p_ - 5 * q_ * q_; }

    QuadExact inverse() const {
        const Rational n = norm();
        if (n == 0) {
            throw InvalidInput("division by zero in Q(sqrt 5)");
        }
        return {p_ / n, -q_ / n};
    }

    friend QuadExact operator+(const QuadExact& a, const QuadExact& b) { return {a.p_ + b.p_, a.q_ + b.q_}; }
    friend QuadExact operator-(const QuadExact& a, const QuadExact& b) { return {a.p_ - b.p_, a.q_ - b.q_}; }
    friend QuadExact operator-(const QuadExact& a) { return {-a.p_, -a.q_}; }
    friend QuadExact operator*(const QuadExact& a, const QuadExact& b) {
        return {a.p_ * b.p_ + 5 * a.q_ * b.q_, a.p_ * b.q_ + a.q_ * b.p_};
    }
    friend QuadExact operator/(const QuadExact& a, const QuadExact& b) { return a * b.inverse(); }
    friend bool operator==(const QuadExact& a, const QuadExact& b) { return a.p_ == b.p_ && a.q_ == b.q_; }

    /// Integer power; negative exponents invert.
    QuadExact pow(long long e) const {
        QuadExact base = e < 0 ? inverse() : *this;
        unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
        QuadExact result(1);
        while (k > 0) {
            if (k & 1ULL) {
                result = result * base;
            }
            base = base * base;
            k >>= 1ULL;
        }
        return result;
    }

    std::string str() const { return p_.str() + " + " + q_.str() + "*sqrt5"; }

private:
    Rational p_{0};
    Rational q_{0};
};

}  // namespace fibwalk
