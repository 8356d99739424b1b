#include "cfloops/family.hpp"

#include <map>
#include <stdexcept>

namespace cfloops {

namespace {

Integer integral(const Rational& x, const char* what) {
    if (!x.is_integer()) {
        throw std::invalid_argument(std::string(what) + ": scaled entry is not an integer");
    }
    return x.numerator();
}

bool congruent_pm(const Integer& x, const Integer& y, const Integer& modulus) {
    const Integer d1 = x - y;
    const Integer d2 = x + y;
    return mpz_divisible_p(d1.get_mpz_t(), modulus.get_mpz_t()) != 0 ||
           mpz_divisible_p(d2.get_mpz_t(), modulus.get_mpz_t()) != 0;
}

// b'' = (w(m)/w(n))^{2/(k-l)} b when it is a positive integer in the family.
std::optional<Integer> exception_for(const Rational& q, const Path& m, const Path& n, const Integer& modulus) {
    const long k = static_cast<long>(m.length());
    const long l = static_cast<long>(n.length());
    if (k == l) {
        return std::nullopt;
    }
    Rational ratio = weight_sq(q, m).value / weight_sq(q, n).value;
    long e = k - l;
    if (e < 0) {
        ratio = ratio.inverse();
        e = -e;
    }
    Rational root;
    // Only the positive root can equal a positive b'.
    if (!rational_root(ratio, static_cast<unsigned long>(e), &root)) {
        return std::nullopt;
    }
    const Rational cand = root * Rational(q.denominator());
    if (!cand.is_integer() || cand.sign() <= 0) {
        return std::nullopt;
    }
    if (!congruent_pm(cand.numerator(), q.denominator(), modulus)) {
        return std::nullopt;
    }
    return cand.numerator();
}

Integer least_modulus(const Rational& q, const Path& m, const Path& n) {
    Integer modulus(1);
    for (const auto& u : modification_numerators(q, m)) {
        modulus = lcm(modulus, abs(u));
    }
    for (const auto& x : modification_numerators(q, n)) {
        modulus = lcm(modulus, abs(x));
    }
    return modulus;
}

}  // namespace

RescaledLoop rescale_loop(const Rational& q, const Path& m, const Rational& r, const Rational& r_prime) {
    require_positive(q);
    if ((r * r_prime).sign() <= 0) {
        throw std::invalid_argument("rescale_loop needs r r' > 0");
    }
    const std::size_t k = m.length();
    std::vector<Integer> e;
    e.reserve(m.size());
    for (std::size_t j = 0; j < m.size(); ++j) {
        const Rational& f = (j % 2 == k % 2) ? r : r_prime;
        e.push_back(integral(f * Rational(m[j]), "rescale_loop"));
    }
    RescaledLoop out{q / (r * r_prime), Path(std::move(e)), {}};
    out.weight = weight_sq(out.q, out.path);
    return out;
}

OddByN odd_by_n_witness(const Rational& q, const Path& m, long n) {
    if (m.length() % 2 == 0) {
        throw std::invalid_argument("odd_by_n_witness needs an odd-length loop");
    }
    if (n < 2) {
        throw std::invalid_argument("odd_by_n_witness needs n >= 2");
    }
    if (!is_loop(q, m)) {
        throw std::invalid_argument("odd_by_n_witness: " + m.str() + " is not a loop");
    }
    RescaledLoop up = rescale_loop(q, m, Rational(n), Rational(1));
    RescaledLoop down = rescale_loop(q, m, Rational(1), Rational(n));
    if (up.weight.is_one()) {
        return {std::move(down), std::move(up)};
    }
    return {std::move(up), std::move(down)};
}

ForbiddenClosure::ForbiddenClosure(Rational q) : q_(std::move(q)) { require_positive(q_); }

Rational ForbiddenClosure::next() {
    ++n_;
    return q_ / Rational(n_);
}

std::vector<Integer> modification_numerators(const Rational& q, const Path& m) {
    const PathEval ev = eval(q, m);
    if (!ev.is_path()) {
        throw std::invalid_argument(m.str() + " is not a path at " + q.str());
    }
    const Rational a(q.numerator());
    std::vector<Integer> out;
    for (std::size_t j = 0; j < m.length(); ++j) {
        out.push_back((a * ev.prefix_values[j]).numerator());
    }
    return out;
}

Path modify_path(const Integer& a, const Integer& b, const Path& m, const std::vector<int>& signs,
                 const Integer& b_prime) {
    if (signs.size() != m.size()) {
        throw std::invalid_argument("modify_path: need one sign per entry");
    }
    if (b_prime < 1 || gcd(a, b_prime) != 1) {
        throw std::invalid_argument("modify_path needs b' >= 1 coprime to a");
    }
    const Rational q(a, b);
    const PathEval ev = eval(q, m);
    if (!ev.is_path()) {
        throw std::invalid_argument(m.str() + " is not a path at " + q.str());
    }
    std::vector<Integer> out;
    out.reserve(m.size());
    out.push_back(signs[0] * m[0]);
    for (std::size_t j = 0; j < m.length(); ++j) {
        const Rational uv = Rational(a) * ev.prefix_values[j];
        const Integer& u = uv.numerator();
        const Integer& v = uv.denominator();
        const Integer num = signs[j + 1] * b - signs[j] * b_prime;
        if (mpz_divisible_p(num.get_mpz_t(), u.get_mpz_t()) == 0) {
            throw std::invalid_argument("modify_path: b' is not congruent to eps b modulo u_" + std::to_string(j));
        }
        out.push_back(signs[j + 1] * m[j + 1] + num / u * v);
    }
    return Path(std::move(out));
}

bool FamilyCertificate::covers(const Integer& b_prime) const {
    if (b_prime < 1 || gcd(a, b_prime) != 1) {
        return false;
    }
    if (exception && *exception == b_prime) {
        return false;
    }
    return congruent_pm(b_prime, residue, modulus);
}

FamilyCertificate family_from_pair(const Rational& q, const Path& m, const Path& n) {
    require_positive(q);
    const PathEval em = eval(q, m);
    const PathEval en = eval(q, n);
    if (!em.is_path() || !en.is_path()) {
        throw std::invalid_argument("family_from_pair needs two paths");
    }
    if (em.value() != en.value()) {
        throw std::invalid_argument("family_from_pair: values differ");
    }
    if (m.length() == n.length() && *em.weight_sq == *en.weight_sq) {
        throw std::invalid_argument("family_from_pair: equal lengths need unequal weights");
    }
    FamilyCertificate cert;
    cert.a = q.numerator();
    cert.residue = q.denominator();
    cert.modulus = least_modulus(q, m, n);
    cert.exception = exception_for(q, m, n, cert.modulus);
    cert.witness_m = m;
    cert.witness_n = n;
    cert.base_q = q;
    return cert;
}

bool verify_family(const FamilyCertificate& cert) {
    try {
        if (cert.base_q.numerator() != cert.a) {
            return false;
        }
        if (cert.residue != cert.base_q.denominator() && !congruent_pm(cert.residue, cert.base_q.denominator(), cert.modulus)) {
            return false;
        }
        const FamilyCertificate fresh = family_from_pair(cert.base_q, cert.witness_m, cert.witness_n);
        if (cert.modulus < 1 || mpz_divisible_p(cert.modulus.get_mpz_t(), fresh.modulus.get_mpz_t()) == 0) {
            return false;
        }
        return exception_for(cert.base_q, cert.witness_m, cert.witness_n, cert.modulus) == cert.exception;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

namespace {

constexpr std::size_t kExhaustiveSigns = 12;

// Sign vectors to try: every one for short paths, otherwise the constant and
// alternating patterns and their negations.
std::vector<std::vector<int>> sign_vectors(std::size_t size) {
    std::vector<std::vector<int>> out;
    if (size <= kExhaustiveSigns) {
        for (std::uint32_t bits = 0; bits < (1U << size); ++bits) {
            std::vector<int> s(size);
            for (std::size_t j = 0; j < size; ++j) {
                s[j] = ((bits >> j) & 1U) != 0 ? -1 : 1;
            }
            out.push_back(std::move(s));
        }
        return out;
    }
    for (int g : {1, -1}) {
        std::vector<int> c(size, g);
        std::vector<int> alt(size);
        for (std::size_t j = 0; j < size; ++j) {
            alt[j] = (j % 2 == 0) ? g : -g;
        }
        out.push_back(std::move(c));
        out.push_back(std::move(alt));
    }
    return out;
}

std::map<Rational, Path> transported(const FamilyCertificate& cert, const Path& p, const Integer& b_prime) {
    std::map<Rational, Path> out;
    const Rational q2(cert.a, b_prime);
    for (const auto& s : sign_vectors(p.size())) {
        try {
            Path moved = modify_path(cert.a, cert.base_q.denominator(), p, s, b_prime);
            const PathEval ev = eval(q2, moved);
            if (ev.is_path()) {
                out.emplace(ev.value(), std::move(moved));
            }
        } catch (const std::invalid_argument&) {
        }
    }
    return out;
}

}  // namespace

std::optional<FamilyMember> family_member(const FamilyCertificate& cert, const Integer& b_prime) {
    if (!cert.covers(b_prime)) {
        return std::nullopt;
    }
    const auto ms = transported(cert, cert.witness_m, b_prime);
    const auto ns = transported(cert, cert.witness_n, b_prime);
    const Rational q2(cert.a, b_prime);
    for (const auto& [value, m2] : ms) {
        auto it = ns.find(value);
        if (it == ns.end()) {
            continue;
        }
        FamilyMember out{q2, m2, it->second, weight_sq(q2, m2), weight_sq(q2, it->second), std::nullopt, {}};
        if (out.m_weight == out.n_weight) {
            continue;
        }
        const Path zm = zero_skip(m2);
        const Path zn = zero_skip(it->second);
        if (is_path(q2, zm) && is_path(q2, zn) && is_proper(zm) && is_proper(zn)) {
            out.loop = loop_difference(q2, zm, zn);
            out.loop_weight = weight_sq(q2, *out.loop);
        }
        return out;
    }
    return std::nullopt;
}

}  // namespace cfloops
