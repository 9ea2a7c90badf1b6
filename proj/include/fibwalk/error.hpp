#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fibwalk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A digit word or identifier violates the invariants of its type.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Syntax error in a regex, formula, automaton file or suite file.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Malformed line-oriented input (automaton files, suite files).
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Automata of different alphabets were combined.
class AlphabetMismatch : public Error {
public:
    using Error::Error;
};

/// A construction exceeded the configured state budget.
class StateBudgetExceeded : public Error {
public:
    explicit StateBudgetExceeded(std::size_t budget)
        : Error("state budget of " + std::to_string(budget) + " states exceeded"), budget_(budget) {}

    std::size_t budget() const noexcept { return budget_; }

private:
    std::size_t budget_;
};

/// Name lookup or definition failure in a logic environment.
class NameError : public Error {
public:
    using Error::Error;
};

}  // namespace fibwalk
