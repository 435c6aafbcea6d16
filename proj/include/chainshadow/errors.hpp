#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainshadow {

/// Base of every error raised by the analyzer.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ViolationKind {
    Shape,         // table dimensions disagree with n
    Missing,       // pair (i, j) has no declared distance and no declared path
    Negative,      // d(i,j) < 0
    Identity,      // d(i,i) != 0 or d(i,j) == 0 for i != j
    Symmetry,      // d(i,j) != d(j,i)
    Triangle,      // d(i,k) > d(i,j) + d(j,k), indices reported as (i, j, k)
    MapNotTotal,   // map[i] outside 0..n-1
    NotBijective,  // invertible flag set but map is not a permutation
};

const char* to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::vector<std::size_t> indices;

    std::string describe() const;
    friend bool operator==(const Violation&, const Violation&) = default;
};

/// A system spec failed validation. Carries every violated axiom.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

class UnknownGenerator : public Error {
public:
    explicit UnknownGenerator(const std::string& name) : Error("unknown generator '" + name + "'") {}
};

class BadParams : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class EmptySet : public Error {
public:
    using Error::Error;
};

class NotDecreasing : public Error {
public:
    NotDecreasing() : Error("resolution list must be strictly decreasing") {}
};

class KindMismatch : public Error {
public:
    using Error::Error;
};

class NotFailing : public Error {
public:
    NotFailing() : Error("verdict passed; there is no witness to extract") {}
};

class TooLarge : public Error {
public:
    using Error::Error;
};

class EmptyDomain : public Error {
public:
    EmptyDomain() : Error("domain is empty") {}
};

class DomainNotInvariant : public Error {
public:
    using Error::Error;
};

class NotInvertible : public Error {
public:
    NotInvertible() : Error("system is not invertible") {}
};

/// The shadow automaton hit its state cap before finishing.
class Inconclusive : public Error {
public:
    explicit Inconclusive(std::size_t cap)
        : Error("state cap of " + std::to_string(cap) + " reached before the search finished"), cap_(cap) {}
    std::size_t cap() const { return cap_; }

private:
    std::size_t cap_;
};

}  // namespace chainshadow
