#pragma once

// Continuant polynomials P_l(x, m), Q_l(x, m) defined by
//
//   P_0 = m_0,  Q_0 = 1,  P_l = m_l x P_{l-1} + Q_{l-1},  Q_l = x P_{l-1},
//
// so that c(x, m) = P_k / Q_k. A vector is a path for q iff P_l(q) != 0 for
// l < k, a loop iff additionally P_k(q) == 0, and w_q(m)^2 = q^{-k} Q_k(q)^2.
//
// For the loop search, P_k(a/b, m) = 0 is rewritten as an integer multilinear
// form in m_0..m_k (the "cleared form"). Its terms are indexed by the
// alternating-parity index sets I(h, j).

#include "cfloops/fraction.hpp"
#include "cfloops/rational.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cfloops {

/// Dense integer polynomial; coefficient i multiplies x^i. Trailing zeros are
/// trimmed, so the zero polynomial has no coefficients.
class IntPolynomial {
public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<Integer> coefficients);
    static IntPolynomial constant(const Integer& c);

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }
    const std::vector<Integer>& coefficients() const { return coeffs_; }
    Integer coefficient(std::size_t power) const;

    Rational evaluate(const Rational& x) const;
    double evaluate(double x) const;

    IntPolynomial shifted(std::size_t powers) const;  // times x^powers
    IntPolynomial scaled(const Integer& c) const;

    friend IntPolynomial operator+(const IntPolynomial& p, const IntPolynomial& q);
    friend IntPolynomial operator-(const IntPolynomial& p, const IntPolynomial& q);
    friend IntPolynomial operator*(const IntPolynomial& p, const IntPolynomial& q);
    friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

    std::string str() const;

private:
    void trim();
    std::vector<Integer> coeffs_;
};

struct ContinuantPair {
    IntPolynomial p;
    IntPolynomial q;
};

/// (P_l, Q_l) for l = 0..k.
std::vector<ContinuantPair> pq_polys(const Path& m);

/// Path, loop and weight computed from the continuants alone.
bool p2_is_path(const Rational& q, const Path& m);
bool p2_is_loop(const Rational& q, const Path& m);
/// Throws std::invalid_argument when m is not a path at q.
WeightSq p2_weight_sq(const Rational& q, const Path& m);

/// Subset of variable indices packed into a bit mask (bit i <-> m_i).
using VarMask = std::uint64_t;

inline constexpr std::size_t kMaxVariables = 63;

/// Integer multilinear form sum_A c_A prod_{i in A} m_i over a set of live
/// variables. Terms are kept sorted by mask with no zero coefficients.
class MultilinearForm {
public:
    struct Term {
        VarMask mask;
        Integer coefficient;
    };

    MultilinearForm() = default;
    MultilinearForm(VarMask variables, std::vector<Term> terms);

    VarMask variables() const { return variables_; }
    std::size_t num_variables() const;
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    /// Coefficient of the given monomial; zero when absent.
    Integer coefficient(VarMask mask) const;
    /// Coefficient of the product of all live variables.
    Integer full_coefficient() const { return coefficient(variables_); }

    /// Fixes m_var = value and drops the variable.
    MultilinearForm substitute(std::size_t var, const Integer& value) const;

    /// Number of terms that would survive substitute(var, value) for a nonzero
    /// value, without building the form.
    std::size_t terms_after_substitution(std::size_t var) const;

    /// Evaluates with m_i = values[i] for every live variable i.
    Integer evaluate(std::span<const Integer> values) const;

    /// Terms of the form as "c*m0*m3 + ..." (for diagnostics).
    std::string str() const;

    friend bool operator==(const MultilinearForm& x, const MultilinearForm& y);

private:
    VarMask variables_ = 0;
    std::vector<Term> terms_;
};

/// Integer form F(m_0..m_k) with F = P_k(a/b, m) * b^{max_power} / a^{min_power};
/// `min_power`/`max_power` are the extreme powers of x present in P_k.
struct ClearedForm {
    MultilinearForm form;
    std::size_t min_power = 0;
    std::size_t max_power = 0;
};

/// Builds the cleared loop equation from the continuant recurrence. Requires
/// a, b >= 1 coprime and 1 <= k <= 62.
ClearedForm cleared_form(const Integer& a, const Integer& b, std::size_t k);

/// P_k(x, m) as a polynomial in x whose coefficients are multilinear in m,
/// keyed by (monomial, power of x). Built from the recurrence.
struct SymbolicTerm {
    VarMask mask;
    std::size_t power;
    Integer coefficient;
};
std::vector<SymbolicTerm> symbolic_continuant(std::size_t k);

/// |I(h, j)|, the number of sets {a_0 < ... < a_j} in {0..h} with a_i = i mod 2.
/// j = -1 denotes the empty set and yields 1.
Integer count_index_sets(long h, long j);

/// Members of I(h, j) as masks, in increasing mask order.
std::vector<VarMask> index_sets(long h, long j);

/// P_{2k-1} or P_{2k} (selected by `level`) built from the closed alternating
/// index-set expansion instead of the recurrence. m must have at least
/// level + 1 entries.
IntPolynomial closed_form_p(const Path& m, std::size_t level);

/// sum_{i=0}^{m} (-1)^i C(n-i, n-2i) C(n-2i, m-i) == 1, for n >= 0, 0 <= 2m <= n.
Integer alt_binomial_sum(long n, long m);
bool alt_binomial_identity(long n, long m);

Integer binomial(long n, long k);

}  // namespace cfloops
