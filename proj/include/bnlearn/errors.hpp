#ifndef BNLEARN_ERRORS_HPP
#define BNLEARN_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bnlearn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The parent relation of a structure contains a directed cycle.
class CycleError : public Error {
public:
    using Error::Error;
};

/// Argument sets of a d-separation query overlap.
class DisjointnessError : public Error {
public:
    using Error::Error;
};

/// A variable was listed in its own parent set.
class SelfParentError : public Error {
public:
    using Error::Error;
};

/// MDL scoring needs at least one case.
class ZeroCasesError : public Error {
public:
    using Error::Error;
};

/// Database, structure or network variable lists disagree.
class SchemaMismatchError : public Error {
public:
    using Error::Error;
};

/// An input is internally inconsistent (bad arity, value out of range, bad CPT).
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A weighted parent-set family with no members.
class EmptyFamilyError : public Error {
public:
    using Error::Error;
};

/// Learned distribution assigns zero probability where the reference does not.
class SupportError : public Error {
public:
    using Error::Error;
};

// Guard violations. The CLI maps these to a dedicated exit code.
class GuardError : public Error {
public:
    using Error::Error;
};

/// Joint-space enumeration beyond the configured limit.
class SizeError : public GuardError {
public:
    using GuardError::GuardError;
};

/// Exhaustive search requested for too many variables.
class TooManyVariablesError : public GuardError {
public:
    using GuardError::GuardError;
};

/// Malformed text input. Carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace bnlearn

#endif  // BNLEARN_ERRORS_HPP
