#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace movcat {

enum class ErrorKind {
    BadRef,
    DuplicateName,
    MissingComposite,
    IllegalComposite,
    IdentityLawBroken,
    AssocBroken,
    NotComposable,
    DomCodBroken,
    IdentityNotPreserved,
    CompositionNotPreserved,
    SourceTargetMismatch,
    ComponentTypeError,
    NaturalitySquareBroken,
    InvalidPoset,
    NotAMonoid,
    SizeBoundExceeded,
    InvalidCopresheaf,
    BondFunctorialityBroken,
    SystemTypeError,
    ConeIncompatible,
    NoDesignatedCoproducts,
    UniversalPropertyFails,
    VerificationFailed,
    SyntaxError,
    UnresolvedReference,
    ParamsOutOfRange,
    UnknownTheorem,
};

std::string_view to_string(ErrorKind kind);

/// One failed axiom, naming the offending pair/triple in `detail`.
struct Violation {
    ErrorKind kind;
    std::string detail;
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string & message);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Thrown by validators. `kind()` is the kind of the first violation.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);

    const std::vector<Violation> & violations() const noexcept { return violations_; }
    bool has(ErrorKind kind) const;

private:
    std::vector<Violation> violations_;
};

/// Thrown by the DSL parser; line and column are 1-based.
class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, const std::string & expected, const std::string & found);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// An unknown name in a document; line and column are 1-based, 0 when the
/// reference did not come from text.
class ReferenceError : public Error {
public:
    ReferenceError(int line, int column, const std::string & what);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Collects violations and throws a ValidationError if any were recorded.
class ViolationList {
public:
    void add(ErrorKind kind, std::string detail) { items_.push_back({kind, std::move(detail)}); }
    bool empty() const noexcept { return items_.empty(); }
    void throw_if_any();

private:
    std::vector<Violation> items_;
};

} // namespace movcat
