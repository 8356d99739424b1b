#include "cfloops/continuant.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace cfloops {

IntPolynomial::IntPolynomial(std::vector<Integer> coefficients) : coeffs_(std::move(coefficients)) {
    trim();
}

IntPolynomial IntPolynomial::constant(const Integer& c) {
    return IntPolynomial(std::vector<Integer>{c});
}

void IntPolynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
}

Integer IntPolynomial::coefficient(std::size_t power) const {
    return power < coeffs_.size() ? coeffs_[power] : Integer(0);
}

Rational IntPolynomial::evaluate(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + Rational(*it);
    }
    return acc;
}

double IntPolynomial::evaluate(double x) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + it->get_d();
    }
    return acc;
}

IntPolynomial IntPolynomial::shifted(std::size_t powers) const {
    if (is_zero()) {
        return {};
    }
    std::vector<Integer> c(powers, Integer(0));
    c.insert(c.end(), coeffs_.begin(), coeffs_.end());
    return IntPolynomial(std::move(c));
}

IntPolynomial IntPolynomial::scaled(const Integer& s) const {
    std::vector<Integer> c = coeffs_;
    for (auto& x : c) {
        x *= s;
    }
    return IntPolynomial(std::move(c));
}

IntPolynomial operator+(const IntPolynomial& p, const IntPolynomial& q) {
    std::vector<Integer> c(std::max(p.coeffs_.size(), q.coeffs_.size()), Integer(0));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
        c[i] += p.coeffs_[i];
    }
    for (std::size_t i = 0; i < q.coeffs_.size(); ++i) {
        c[i] += q.coeffs_[i];
    }
    return IntPolynomial(std::move(c));
}

IntPolynomial operator-(const IntPolynomial& p, const IntPolynomial& q) {
    return p + q.scaled(Integer(-1));
}

IntPolynomial operator*(const IntPolynomial& p, const IntPolynomial& q) {
    if (p.is_zero() || q.is_zero()) {
        return {};
    }
    std::vector<Integer> c(p.coeffs_.size() + q.coeffs_.size() - 1, Integer(0));
    for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < q.coeffs_.size(); ++j) {
            c[i + j] += p.coeffs_[i] * q.coeffs_[j];
        }
    }
    return IntPolynomial(std::move(c));
}

std::string IntPolynomial::str() const {
    if (is_zero()) {
        return "0";
    }
    std::string s;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) {
            continue;
        }
        if (!s.empty()) {
            s += " + ";
        }
        s += coeffs_[i].get_str();
        if (i > 0) {
            s += "*x^" + std::to_string(i);
        }
    }
    return s;
}

std::vector<ContinuantPair> pq_polys(const Path& m) {
    std::vector<ContinuantPair> out;
    out.reserve(m.size());
    out.push_back({IntPolynomial::constant(m[0]), IntPolynomial::constant(Integer(1))});
    for (std::size_t l = 1; l < m.size(); ++l) {
        const auto& prev = out.back();
        IntPolynomial xp = prev.p.shifted(1);
        out.push_back({xp.scaled(m[l]) + prev.q, xp});
    }
    return out;
}

namespace {

// P_l(q) for l = 0..k, evaluated with the scalar recurrence.
std::vector<Rational> p_values(const Rational& q, const Path& m, Rational* qk) {
    std::vector<Rational> ps;
    ps.reserve(m.size());
    Rational p(m[0]);
    Rational qq(1);
    ps.push_back(p);
    for (std::size_t l = 1; l < m.size(); ++l) {
        Rational xp = q * p;
        p = xp * Rational(m[l]) + qq;
        qq = std::move(xp);
        ps.push_back(p);
    }
    if (qk != nullptr) {
        *qk = qq;
    }
    return ps;
}

}  // namespace

bool p2_is_path(const Rational& q, const Path& m) {
    require_positive(q);
    const auto ps = p_values(q, m, nullptr);
    return std::none_of(ps.begin(), ps.end() - 1, [](const Rational& v) { return v.is_zero(); });
}

bool p2_is_loop(const Rational& q, const Path& m) {
    require_positive(q);
    const auto ps = p_values(q, m, nullptr);
    return std::none_of(ps.begin(), ps.end() - 1, [](const Rational& v) { return v.is_zero(); }) &&
           ps.back().is_zero();
}

WeightSq p2_weight_sq(const Rational& q, const Path& m) {
    if (!p2_is_path(q, m)) {
        throw std::invalid_argument(m.str() + " is not a path for q=" + q.str());
    }
    Rational qk;
    p_values(q, m, &qk);
    const long k = static_cast<long>(m.length());
    return WeightSq{q.pow(-k) * qk * qk, k % 2 == 1};
}

// ---------------------------------------------------------------------------
// MultilinearForm

MultilinearForm::MultilinearForm(VarMask variables, std::vector<Term> terms) : variables_(variables) {
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.mask < y.mask; });
    for (auto& t : terms) {
        if ((t.mask & ~variables_) != 0) {
            throw std::invalid_argument("term uses a variable outside the form");
        }
        if (!terms_.empty() && terms_.back().mask == t.mask) {
            terms_.back().coefficient += t.coefficient;
        } else {
            terms_.push_back(std::move(t));
        }
    }
    std::erase_if(terms_, [](const Term& t) { return t.coefficient == 0; });
}

std::size_t MultilinearForm::num_variables() const {
    return static_cast<std::size_t>(std::popcount(variables_));
}

Integer MultilinearForm::coefficient(VarMask mask) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                               [](const Term& t, VarMask m) { return t.mask < m; });
    if (it != terms_.end() && it->mask == mask) {
        return it->coefficient;
    }
    return Integer(0);
}

MultilinearForm MultilinearForm::substitute(std::size_t var, const Integer& value) const {
    const VarMask bit = VarMask{1} << var;
    if ((variables_ & bit) == 0) {
        throw std::invalid_argument("substituting a variable that is not live");
    }
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        if ((t.mask & bit) != 0) {
            if (value != 0) {
                out.push_back({t.mask & ~bit, t.coefficient * value});
            }
        } else {
            out.push_back(t);
        }
    }
    return MultilinearForm(variables_ & ~bit, std::move(out));
}

std::size_t MultilinearForm::terms_after_substitution(std::size_t var) const {
    const VarMask bit = VarMask{1} << var;
    std::vector<VarMask> masks;
    masks.reserve(terms_.size());
    for (const auto& t : terms_) {
        masks.push_back(t.mask & ~bit);
    }
    std::sort(masks.begin(), masks.end());
    return static_cast<std::size_t>(std::unique(masks.begin(), masks.end()) - masks.begin());
}

Integer MultilinearForm::evaluate(std::span<const Integer> values) const {
    Integer acc(0);
    for (const auto& t : terms_) {
        Integer prod = t.coefficient;
        VarMask mask = t.mask;
        while (mask != 0) {
            const int i = std::countr_zero(mask);
            prod *= values[static_cast<std::size_t>(i)];
            mask &= mask - 1;
        }
        acc += prod;
    }
    return acc;
}

std::string MultilinearForm::str() const {
    std::string s;
    for (const auto& t : terms_) {
        if (!s.empty()) {
            s += " + ";
        }
        s += t.coefficient.get_str();
        VarMask mask = t.mask;
        while (mask != 0) {
            s += "*m" + std::to_string(std::countr_zero(mask));
            mask &= mask - 1;
        }
    }
    return s.empty() ? "0" : s;
}

bool operator==(const MultilinearForm& x, const MultilinearForm& y) {
    if (x.variables_ != y.variables_ || x.terms_.size() != y.terms_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < x.terms_.size(); ++i) {
        if (x.terms_[i].mask != y.terms_[i].mask || x.terms_[i].coefficient != y.terms_[i].coefficient) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Cleared loop equation

std::vector<SymbolicTerm> symbolic_continuant(std::size_t k) {
    if (k > kMaxVariables - 1) {
        throw std::invalid_argument("continuant level too large");
    }
    using Key = std::pair<VarMask, std::size_t>;
    std::map<Key, Integer> p{{{VarMask{1}, 0}, Integer(1)}};
    std::map<Key, Integer> q{{{VarMask{0}, 0}, Integer(1)}};
    for (std::size_t l = 1; l <= k; ++l) {
        std::map<Key, Integer> np;
        std::map<Key, Integer> nq;
        const VarMask bit = VarMask{1} << l;
        for (const auto& [key, c] : p) {
            np[{key.first | bit, key.second + 1}] += c;
            nq[{key.first, key.second + 1}] += c;
        }
        for (const auto& [key, c] : q) {
            np[key] += c;
        }
        p = std::move(np);
        q = std::move(nq);
    }
    std::vector<SymbolicTerm> out;
    out.reserve(p.size());
    for (auto& [key, c] : p) {
        if (c != 0) {
            out.push_back({key.first, key.second, c});
        }
    }
    return out;
}

ClearedForm cleared_form(const Integer& a, const Integer& b, std::size_t k) {
    if (k == 0) {
        throw std::invalid_argument("cleared_form requires k >= 1");
    }
    if (a < 1 || b < 1 || gcd(a, b) != 1) {
        throw std::invalid_argument("cleared_form requires coprime a, b >= 1");
    }
    const auto terms = symbolic_continuant(k);
    ClearedForm out;
    out.min_power = terms.front().power;
    out.max_power = terms.front().power;
    for (const auto& t : terms) {
        out.min_power = std::min(out.min_power, t.power);
        out.max_power = std::max(out.max_power, t.power);
    }
    std::vector<MultilinearForm::Term> form_terms;
    form_terms.reserve(terms.size());
    for (const auto& t : terms) {
        Integer c = t.coefficient * pow(a, t.power - out.min_power) * pow(b, out.max_power - t.power);
        form_terms.push_back({t.mask, std::move(c)});
    }
    const VarMask all = (k + 1 == 64) ? ~VarMask{0} : ((VarMask{1} << (k + 1)) - 1);
    out.form = MultilinearForm(all, std::move(form_terms));
    return out;
}

// ---------------------------------------------------------------------------
// Index sets and binomial identities

Integer binomial(long n, long k) {
    if (k < 0 || n < 0 || k > n) {
        return Integer(0);
    }
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Integer count_index_sets(long h, long j) {
    if (j == -1) {
        return Integer(1);
    }
    if (h < 0 || j < 0 || j > h) {
        return Integer(0);
    }
    // b_i = (a_i + i) / 2 maps I(h, j) bijectively onto (j+1)-subsets of
    // {0, ..., floor((h + j) / 2)}.
    return binomial((h + j) / 2 + 1, j + 1);
}

namespace {

void collect_index_sets(long h, long remaining, long next_min, long position, VarMask acc, std::vector<VarMask>& out) {
    if (remaining == 0) {
        out.push_back(acc);
        return;
    }
    long start = next_min;
    if ((start % 2) != (position % 2)) {
        ++start;
    }
    for (long a = start; a <= h; a += 2) {
        collect_index_sets(h, remaining - 1, a + 1, position + 1, acc | (VarMask{1} << a), out);
    }
}

}  // namespace

std::vector<VarMask> index_sets(long h, long j) {
    std::vector<VarMask> out;
    if (j == -1) {
        out.push_back(0);
        return out;
    }
    if (h < 0 || j < 0 || h >= static_cast<long>(kMaxVariables)) {
        return out;
    }
    collect_index_sets(h, j + 1, 0, 0, 0, out);
    std::sort(out.begin(), out.end());
    return out;
}

IntPolynomial closed_form_p(const Path& m, std::size_t level) {
    if (m.size() < level + 1) {
        throw std::invalid_argument("closed_form_p needs level + 1 entries");
    }
    const long h = static_cast<long>(level);
    // level = 2k:   x^k     sum_j (sum over I(2k, 2j))     x^j
    // level = 2k-1: x^{k-1} sum_j (sum over I(2k-1, 2j-1)) x^j
    const long k = (h + 1) / 2;
    const long shift = (h % 2 == 0) ? k : k - 1;
    std::vector<Integer> coeffs(static_cast<std::size_t>(shift + k + 1), Integer(0));
    for (long j = 0; j <= k; ++j) {
        const long size_index = (h % 2 == 0) ? 2 * j : 2 * j - 1;
        Integer sum(0);
        for (VarMask mask : index_sets(h, size_index)) {
            Integer prod(1);
            while (mask != 0) {
                prod *= m[static_cast<std::size_t>(std::countr_zero(mask))];
                mask &= mask - 1;
            }
            sum += prod;
        }
        coeffs[static_cast<std::size_t>(shift + j)] = sum;
    }
    return IntPolynomial(std::move(coeffs));
}

Integer alt_binomial_sum(long n, long m) {
    if (n < 0 || m < 0 || 2 * m > n) {
        throw std::invalid_argument("alt_binomial_sum requires n >= 0 and 0 <= 2m <= n");
    }
    Integer sum(0);
    for (long i = 0; i <= m; ++i) {
        Integer term = binomial(n - i, n - 2 * i) * binomial(n - 2 * i, m - i);
        if (i % 2 == 0) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    return sum;
}

bool alt_binomial_identity(long n, long m) {
    return alt_binomial_sum(n, m) == 1;
}

}  // namespace cfloops
