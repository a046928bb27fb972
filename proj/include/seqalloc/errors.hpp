#pragma once

#include <stdexcept>
#include <string>

namespace seqalloc {

/// Invalid model parameters or trial/scenario configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An operation was called outside its domain (e.g. u <= 0 for a Chernoff rate).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller broke an operation's precondition (e.g. comparing an arm with no samples).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed scenario file. `line()` is 1-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace seqalloc
