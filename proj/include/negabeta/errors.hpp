// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace negabeta {

/// Coarse failure classes; the CLI maps these to exit codes.
enum class ErrorKind {
    precondition,   // bad input, domain violation, wrong mode
    undecidable,    // a certified query could not be resolved within the precision cap
    budget,         // an enumeration or letter budget was exhausted
    inconsistency,  // an internal cross-check failed (arithmetic or fixed-point)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct UndecidableAtPrecision : Error {
    explicit UndecidableAtPrecision(const std::string& what)
        : Error(ErrorKind::undecidable, "undecidable at precision cap: " + what) {}
};

struct OutOfDomain : Error {
    explicit OutOfDomain(const std::string& what) : Error(ErrorKind::precondition, "out of domain: " + what) {}
};

struct NotIsolating : Error {
    explicit NotIsolating(const std::string& what) : Error(ErrorKind::precondition, "bracket does not isolate one root: " + what) {}
};

struct RootNotGreaterThanOne : Error {
    explicit RootNotGreaterThanOne(const std::string& what) : Error(ErrorKind::precondition, "root is not > 1: " + what) {}
};

struct RequiresAlgebraicMode : Error {
    explicit RequiresAlgebraicMode(const std::string& what) : Error(ErrorKind::precondition, "requires algebraic mode: " + what) {}
};

struct NotInAlphabet : Error {
    explicit NotInAlphabet(const std::string& what) : Error(ErrorKind::precondition, "letter not in alphabet: " + what) {}
};

struct CaseAssertionFailed : Error {
    explicit CaseAssertionFailed(const std::string& what) : Error(ErrorKind::inconsistency, "substitution case assertion failed: " + what) {}
};

struct FixedPointConsistency : Error {
    explicit FixedPointConsistency(const std::string& what) : Error(ErrorKind::inconsistency, "fixed point consistency check failed: " + what) {}
};

struct TooFewPoints : Error {
    explicit TooFewPoints(const std::string& what) : Error(ErrorKind::precondition, "too few points: " + what) {}
};

struct BetaTooSmall : Error {
    explicit BetaTooSmall(const std::string& what) : Error(ErrorKind::precondition, "base too small: " + what) {}
};

struct LetterBudgetExceeded : Error {
    explicit LetterBudgetExceeded(const std::string& what) : Error(ErrorKind::budget, "letter budget exceeded: " + what) {}
};

struct PreconditionFailed : Error {
    explicit PreconditionFailed(const std::string& what) : Error(ErrorKind::precondition, what) {}
};

struct NoSignChange : Error {
    explicit NoSignChange(const std::string& what) : Error(ErrorKind::inconsistency, "no sign change over solver bracket: " + what) {}
};

} // namespace negabeta
