#pragma once

#include <stdexcept>
#include <string>

namespace sumrange {

// Base for all domain errors thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- convex geometry ---
struct DegenerateWitness : Error {
    using Error::Error;
};
struct OutsideHull : Error {
    using Error::Error;
};

// --- series model ---
struct BadParams : Error {
    using Error::Error;
};
struct UnknownFamily : BadParams {
    using BadParams::BadParams;
};
struct ZeroTermRejected : BadParams {
    using BadParams::BadParams;
};
struct ParseError : Error {
    ParseError(const std::string& what, int line)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};
struct CertificateMismatch : Error {
    using Error::Error;
};
struct CertificateRequired : Error {
    using Error::Error;
};

// --- scalar engine ---
struct NotRearrangeable : Error {
    using Error::Error;
};

// --- steering / rearranger ---
struct DegenerateContext : Error {
    using Error::Error;
};
struct BudgetExhausted : Error {
    using Error::Error;
};
struct PoolExhausted : BudgetExhausted {
    using BudgetExhausted::BudgetExhausted;
};
struct TargetOutsideX0 : Error {
    using Error::Error;
};
struct InfeasibleTarget : Error {
    using Error::Error;
};
struct InfeasibleSeries : Error {
    using Error::Error;
};
struct DuplicateIndex : Error {
    using Error::Error;
};

// --- torus ---
struct AssertionFailed : Error {
    AssertionFailed(const std::string& clause, const std::string& what)
        : Error("clause " + clause + ": " + what), clause(clause) {}
    std::string clause;
};

}  // namespace sumrange
