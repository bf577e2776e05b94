#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <ostream>
#include <string>

#include "probgen/error.hpp"

namespace probgen {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational with arbitrary-precision integer parts. Always stored
// reduced with a positive denominator, so equality is structural.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(const BigInt& n) : num_(n), den_(1) {}
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
        if (den_ == 0) user_error("rational with zero denominator");
        normalize();
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    Rational operator+(const Rational& o) const {
        return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    }
    Rational operator-(const Rational& o) const {
        return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
    }
    Rational operator*(const Rational& o) const {
        return Rational(num_ * o.num_, den_ * o.den_);
    }
    Rational operator/(const Rational& o) const {
        if (o.num_ == 0) user_error("rational division by zero");
        return Rational(num_ * o.den_, den_ * o.num_);
    }
    Rational operator-() const {
        Rational r(*this);
        r.num_ = -r.num_;
        return r;
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    bool operator==(const Rational& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const {
        return num_ * o.den_ < o.num_ * den_;
    }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator<=(const Rational& o) const { return !(o < *this); }
    bool operator>=(const Rational& o) const { return !(*this < o); }

    // Reciprocal, used for spread bounds (1/sigma).
    Rational inverse() const {
        if (num_ == 0) user_error("inverse of zero rational");
        return Rational(den_, num_);
    }

    // Largest integer <= value.
    BigInt floor() const {
        BigInt q = num_ / den_;
        if (num_ < 0 && q * den_ != num_) q -= 1;
        return q;
    }

    // Rendered "p/q", or just "p" for integers: the one exact format every
    // output path uses.
    std::string str() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.str();
    }

private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    BigInt num_;
    BigInt den_;
};

// Parse "p" or "p/q"; rejects anything else.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text));
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        user_error("cannot parse rational: '" + text + "'");
    }
}

} // namespace probgen
