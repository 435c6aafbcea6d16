#pragma once

// Exact rational numbers for metric tables and resolution parameters.
//
// A thin value type over Boost.Multiprecision's arbitrary-precision rationals:
// lowest terms, positive denominator, no overflow and no floating point, so
// every comparison d <= delta is exact.

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace chainshadow {

class Rational {
public:
    using Value = boost::multiprecision::cpp_rational;

    Rational() = default;
    Rational(std::int64_t n) : value_(n) {}  // NOLINT: implicit from integers
    Rational(std::int64_t n, std::int64_t d);
    explicit Rational(Value v) : value_(std::move(v)) {}

    const Value& value() const { return value_; }
    bool is_zero() const { return value_.is_zero(); }
    bool is_negative() const { return value_.sign() < 0; }
    bool is_integer() const;
    /// Largest integer not above the value.
    Rational floor() const;

    Rational operator-() const { return Rational(Value(-value_)); }
    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(Value(a.value_ + b.value_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(Value(a.value_ - b.value_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(Value(a.value_ * b.value_)); }
    /// Throws std::domain_error on division by zero.
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    /// Canonical text form: "p" for integers, "p/q" otherwise.
    std::string str() const;
    /// Accepts "p", "p/q", and finite decimals such as "0.125" or "-2.5".
    static Rational parse(std::string_view text);

private:
    Value value_;
};

Rational abs(const Rational& r);
std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace chainshadow

template <>
struct std::hash<chainshadow::Rational> {
    std::size_t operator()(const chainshadow::Rational& r) const noexcept {
        return std::hash<std::string>{}(r.str());
    }
};
