#include "chainshadow/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace chainshadow {

namespace {

using Int = boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    Int num(n), den(d);
    if (den.sign() < 0) {
        num = -num;
        den = -den;
    }
    value_ = Value(num, den);
}

bool Rational::is_integer() const { return boost::multiprecision::denominator(value_) == 1; }

Rational Rational::floor() const {
    Int n = boost::multiprecision::numerator(value_);
    Int d = boost::multiprecision::denominator(value_);
    Int q = n / d;
    if (n.sign() < 0 && q * d != n) --q;
    return Rational(Value(q));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rational(Rational::Value(a.value_ / b.value_));
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (boost::multiprecision::denominator(a.value_) == boost::multiprecision::denominator(b.value_)) {
        int c = boost::multiprecision::numerator(a.value_).compare(boost::multiprecision::numerator(b.value_));
        return c <=> 0;
    }
    Int lhs = boost::multiprecision::numerator(a.value_) * boost::multiprecision::denominator(b.value_);
    Int rhs = boost::multiprecision::numerator(b.value_) * boost::multiprecision::denominator(a.value_);
    return lhs.compare(rhs) <=> 0;
}

std::string Rational::str() const {
    std::string n = boost::multiprecision::numerator(value_).str();
    if (is_integer()) return n;
    return n + "/" + boost::multiprecision::denominator(value_).str();
}

Rational Rational::parse(std::string_view text) {
    auto fail = [&]() -> Rational { throw std::invalid_argument("not a rational: '" + std::string(text) + "'"); };
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    Value v;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        auto num = body.substr(0, slash), den = body.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) return fail();
        Int d{std::string(den)};
        if (d.is_zero()) return fail();
        v = Value(Int(std::string(num)), d);
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        auto whole = body.substr(0, dot), frac = body.substr(dot + 1);
        if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) return fail();
        Int scale = boost::multiprecision::pow(Int(10), static_cast<unsigned>(frac.size()));
        Int n = (whole.empty() ? Int(0) : Int(std::string(whole))) * scale + Int(std::string(frac));
        v = Value(n, scale);
    } else {
        if (!all_digits(body)) return fail();
        v = Value(Int(std::string(body)));
    }
    return Rational(negative ? Value(-v) : v);
}

Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace chainshadow
