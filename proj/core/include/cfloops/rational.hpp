#pragma once

// Exact arbitrary-precision scalars used throughout the library.
//
// Integer is GMP's mpz_class. Rational wraps mpq_class so that every value is
// kept canonical (lowest terms, positive denominator) and so that division by
// zero raises instead of aborting inside GMP.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cfloops {

using Integer = mpz_class;

/// Parses a decimal integer, optionally signed. Throws std::invalid_argument.
Integer parse_integer(std::string_view text);

/// Returns true when |x| fits into a signed 64-bit integer.
bool fits_int64(const Integer& x);

/// Converts to int64_t; the caller must have checked fits_int64.
std::int64_t to_int64(const Integer& x);

Integer gcd(const Integer& x, const Integer& y);
Integer lcm(const Integer& x, const Integer& y);
Integer abs(const Integer& x);
Integer pow(const Integer& base, unsigned long exponent);

/// Floor of the integer square root of a non-negative x. When `exact` is
/// given it receives whether x is a perfect square.
Integer isqrt(const Integer& x, bool* exact = nullptr);

class Rational {
public:
    Rational() = default;
    Rational(long value) : v_(value) {}
    Rational(int value) : v_(value) {}
    Rational(const Integer& value) : v_(value) {}
    Rational(const Integer& num, const Integer& den);

    /// Parses "p" or "p/q".
    static Rational parse(std::string_view text);

    Integer numerator() const { return v_.get_num(); }
    Integer denominator() const { return v_.get_den(); }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    Rational abs() const;
    Rational inverse() const;
    /// Negative exponents require a nonzero value.
    Rational pow(long exponent) const;

    double to_double() const { return v_.get_d(); }
    std::string str() const;

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational x, const Rational& y) { return x += y; }
    friend Rational operator-(Rational x, const Rational& y) { return x -= y; }
    friend Rational operator*(Rational x, const Rational& y) { return x *= y; }
    friend Rational operator/(Rational x, const Rational& y) { return x /= y; }
    friend Rational operator-(const Rational& x);

    friend bool operator==(const Rational& x, const Rational& y) { return x.v_ == y.v_; }
    friend std::strong_ordering operator<=>(const Rational& x, const Rational& y) {
        const int c = cmp(x.v_, y.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    const mpq_class& raw() const { return v_; }

private:
    explicit Rational(mpq_class v) : v_(std::move(v)) {}
    mpq_class v_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// True when x is an exact square of a rational; the root is written to *root.
bool rational_sqrt(const Rational& x, Rational* root);

/// Exact n-th root of a positive rational if it is rational.
bool rational_root(const Rational& x, unsigned long n, Rational* root);

struct IntegerHash {
    std::size_t operator()(const Integer& x) const;
};

}  // namespace cfloops
