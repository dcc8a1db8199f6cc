#ifndef DEFECTLAB_ERRORS_HPP
#define DEFECTLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace defectlab {

// Base for all domain errors. `code()` is a stable machine-readable tag that
// the CLI copies into JSON reports; `what()` is the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Mismatched or incomparable group/field descriptors.
struct DescriptorError : Error {
    explicit DescriptorError(const std::string& msg) : Error("descriptor", msg) {}
};

// A scale/root would leave the declared coordinate subgroup.
struct DivisibilityError : Error {
    explicit DivisibilityError(const std::string& msg) : Error("divisibility", msg) {}
};

// A series is indistinguishable from zero (or a digit is unknown) at its
// recorded precision. Never silently treated as zero.
struct PrecisionError : Error {
    explicit PrecisionError(const std::string& msg) : Error("precision", msg) {}
};

// residue() on a series with negative value.
struct NotIntegralError : Error {
    explicit NotIntegralError(const std::string& msg) : Error("not-integral", msg) {}
};

// Too few trace values to fit a distance pattern.
struct InsufficientDataError : Error {
    explicit InsufficientDataError(const std::string& msg) : Error("insufficient-data", msg) {}
};

// Newton step outside its convergence domain (vf(c) <= 2 vf'(c)).
struct NewtonDomainError : Error {
    explicit NewtonDomainError(const std::string& msg) : Error("newton-domain", msg) {}
};

// Operation precondition violated.
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error("precondition", msg) {}
};

// A deformation condition could not be decided (unresolved distance).
struct UndecidableError : Error {
    explicit UndecidableError(const std::string& msg) : Error("undecidable", msg) {}
};

// Malformed input text / scenario file.
struct ParseError : Error {
    explicit ParseError(const std::string& msg) : Error("parse", msg) {}
};

} // namespace defectlab

#endif
