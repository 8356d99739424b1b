#include "cfloops/rational.hpp"

#include <ostream>

namespace cfloops {

Integer parse_integer(std::string_view text) {
    std::string s(text);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (start == s.size()) {
        throw std::invalid_argument("empty integer literal");
    }
    for (std::size_t i = start; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') {
            throw std::invalid_argument("malformed integer literal: " + s);
        }
    }
    if (s[0] == '+') {
        s.erase(0, 1);
    }
    return Integer(s, 10);
}

bool fits_int64(const Integer& x) {
    static const Integer lo("-9223372036854775808");
    static const Integer hi("9223372036854775807");
    return x >= lo && x <= hi;
}

std::int64_t to_int64(const Integer& x) {
    if (x.fits_slong_p()) {
        return x.get_si();
    }
    return std::stoll(x.get_str());
}

Integer gcd(const Integer& x, const Integer& y) {
    Integer r;
    mpz_gcd(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return r;
}

Integer lcm(const Integer& x, const Integer& y) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    return r;
}

Integer abs(const Integer& x) {
    Integer r;
    mpz_abs(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

Integer pow(const Integer& base, unsigned long exponent) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

Integer isqrt(const Integer& x, bool* exact) {
    if (sgn(x) < 0) {
        throw std::domain_error("isqrt of a negative integer");
    }
    Integer root;
    Integer rem;
    mpz_sqrtrem(root.get_mpz_t(), rem.get_mpz_t(), x.get_mpz_t());
    if (exact != nullptr) {
        *exact = (rem == 0);
    }
    return root;
}

Rational::Rational(const Integer& num, const Integer& den) {
    if (den == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational(parse_integer(text));
    }
    return Rational(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

Rational Rational::abs() const {
    return Rational(mpq_class(::abs(v_)));
}

Rational Rational::inverse() const {
    if (is_zero()) {
        throw std::domain_error("inverse of zero");
    }
    mpq_class r;
    mpq_inv(r.get_mpq_t(), v_.get_mpq_t());
    return Rational(std::move(r));
}

Rational Rational::pow(long exponent) const {
    if (exponent < 0) {
        return inverse().pow(-exponent);
    }
    const auto e = static_cast<unsigned long>(exponent);
    return Rational(cfloops::pow(numerator(), e), cfloops::pow(denominator(), e));
}

std::string Rational::str() const {
    return v_.get_str();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) {
        throw std::domain_error("division by zero");
    }
    v_ /= o.v_;
    return *this;
}

Rational operator-(const Rational& x) {
    return Rational(mpq_class(-x.v_));
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
}

bool rational_root(const Rational& x, unsigned long n, Rational* root) {
    if (x.sign() <= 0 || n == 0) {
        return false;
    }
    Integer rn;
    Integer rd;
    const Integer num = x.numerator();
    const Integer den = x.denominator();
    if (mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n) == 0) {
        return false;
    }
    if (mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n) == 0) {
        return false;
    }
    if (root != nullptr) {
        *root = Rational(rn, rd);
    }
    return true;
}

bool rational_sqrt(const Rational& x, Rational* root) {
    if (x.is_zero()) {
        if (root != nullptr) {
            *root = Rational(0);
        }
        return true;
    }
    return rational_root(x, 2, root);
}

std::size_t IntegerHash::operator()(const Integer& x) const {
    const mpz_srcptr p = x.get_mpz_t();
    std::size_t h = static_cast<std::size_t>(p->_mp_size);
    const int n = p->_mp_size < 0 ? -p->_mp_size : p->_mp_size;
    for (int i = 0; i < n; ++i) {
        h ^= static_cast<std::size_t>(p->_mp_d[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace cfloops
