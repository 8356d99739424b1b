#pragma once

// Verification for parameters q that are not rational.
//
// Values are carried as (approximation, error bound) pairs and propagated
// through the recurrence with a first-order rounding model. Anything that comes
// within its error bound of zero is reported as indeterminate: a numeric loop
// claim is made only when the final value is within its bound of zero and no
// earlier prefix is.

#include "cfloops/continuant.hpp"
#include "cfloops/fraction.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cfloops {

/// Software float with a 128-bit mantissa.
using Extended = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<128, boost::multiprecision::digit_base_2>,
    boost::multiprecision::et_off>;

template <class Real>
struct Approx {
    Real value{};
    Real error{};  // |true - value| <= error
};

template <class Real>
struct NumericEval {
    std::vector<Approx<Real>> prefix_values;
    /// First index whose denominator could not be separated from zero.
    std::optional<std::size_t> indeterminate_at;
    Approx<Real> weight_sq;

    bool is_path() const { return !indeterminate_at.has_value(); }
    const Approx<Real>& value() const { return prefix_values.back(); }
    /// True when the final value is within its error bound of zero.
    bool is_loop() const {
        using std::abs;
        return is_path() && abs(value().value) <= value().error;
    }
};

template <class Real>
Real unit_roundoff() {
    return std::numeric_limits<Real>::epsilon();
}

template <class Real>
Real integer_to_real(const Integer& x) {
    if constexpr (std::is_same_v<Real, double>) {
        return x.get_d();
    } else {
        return Real(x.get_str());
    }
}

/// Evaluates c(q, m_j) for every prefix, and w_q(m)^2, with error bounds.
template <class Real>
NumericEval<Real> eval_numeric(const Approx<Real>& q, const Path& m) {
    using std::abs;
    if (!(q.value - q.error > Real(0))) {
        throw std::invalid_argument("eval_numeric needs q > 0 beyond its error bound");
    }
    const Real u = unit_roundoff<Real>();
    NumericEval<Real> out;
    const Real m0 = integer_to_real<Real>(m[0]);
    out.prefix_values.push_back({m0, u * abs(m0)});
    Real w2 = Real(1);
    Real w2_rel = Real(0);
    for (std::size_t j = 1; j < m.size(); ++j) {
        const Approx<Real> prev = out.prefix_values.back();
        const Real d = q.value * prev.value;
        const Real ed = abs(q.value) * prev.error + abs(prev.value) * q.error + q.error * prev.error + u * abs(d);
        if (!(abs(d) > ed)) {
            out.indeterminate_at = j;
            return out;
        }
        const Real r = Real(1) / d;
        const Real er = ed / (abs(d) * (abs(d) - ed)) + u * abs(r);
        const Real mj = integer_to_real<Real>(m[j]);
        const Real c = mj + r;
        const Real ec = er + u * abs(mj) + u * abs(c);
        // w^2 picks up q * c_{j-1}^2 at each step.
        w2 *= d * prev.value;
        w2_rel += q.error / q.value + Real(2) * prev.error / abs(prev.value) + Real(3) * u;
        out.prefix_values.push_back({c, ec});
    }
    out.weight_sq = {w2, abs(w2) * w2_rel * Real(1.01)};
    return out;
}

/// P_l(q, m) for l = 0..k with error bounds, via the continuant recurrence.
template <class Real>
std::vector<Approx<Real>> p_numeric(const Approx<Real>& q, const Path& m) {
    using std::abs;
    const Real u = unit_roundoff<Real>();
    std::vector<Approx<Real>> out;
    Approx<Real> p{integer_to_real<Real>(m[0]), Real(0)};
    Approx<Real> qq{Real(1), Real(0)};
    out.push_back(p);
    for (std::size_t l = 1; l < m.size(); ++l) {
        const Real xp = q.value * p.value;
        const Real exp_ = abs(q.value) * p.error + abs(p.value) * q.error + q.error * p.error + u * abs(xp);
        const Real mj = integer_to_real<Real>(m[l]);
        const Real np = mj * xp + qq.value;
        const Real enp = abs(mj) * exp_ + qq.error + u * (abs(mj * xp) + abs(np)) * Real(2);
        qq = {xp, exp_};
        p = {np, enp};
        out.push_back(p);
    }
    return out;
}

/// Shortens a vector whose final continuant vanishes into a loop: while some
/// P_i(q, m) with i < k vanishes, m is replaced by (m_{i+2}, ..., m_k) for the
/// first such i. Throws std::invalid_argument if P_k(q, m) != 0.
Path suffix_repair(const Rational& q, const Path& m);

/// Numeric counterpart of suffix_repair; "vanishes" means within error bound.
template <class Real>
Path suffix_repair_numeric(const Approx<Real>& q, const Path& m) {
    using std::abs;
    auto vanishes = [](const Approx<Real>& v) { return abs(v.value) <= v.error; };
    Path cur = m;
    auto ps = p_numeric(q, cur);
    if (!vanishes(ps.back())) {
        throw std::invalid_argument("suffix_repair: final continuant does not vanish");
    }
    for (;;) {
        std::optional<std::size_t> first;
        for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
            if (vanishes(ps[i])) {
                first = i;
                break;
            }
        }
        if (!first) {
            return cur;
        }
        if (*first + 2 > cur.length()) {
            throw std::logic_error("suffix_repair: vanishing prefix adjacent to the end");
        }
        cur = cur.suffix(*first + 2);
        ps = p_numeric(q, cur);
    }
}

/// Result of the alternating-sign construction at q = 4 cos^2(pi ell / (2k+1)).
struct HeckeLoop {
    double q = 0;
    Path path;
    double weight_sq = 0;
    /// |P_{2k-1}(q, alternating vector)| as computed; grows like q^{k-1}.
    double raw_residual = 0;
    /// |q^{-(k-1)} P_{2k-1}(q, alternating vector)|.
    double normalized_residual = 0;
    /// Rounding bound on the same quantity.
    double residual_bound = 0;
    bool repaired = false;
    bool extended_precision = false;
};

/// Builds m_j = (-1)^j, j = 0..2k-1, checks that P_{2k-1} vanishes at q,
/// repairs it into a path if needed, and returns the odd-length loop.
/// Uses double for k <= 10 and 128-bit mantissa floats beyond. Throws
/// std::invalid_argument unless 1 <= ell < 2k+1 and gcd(ell, 2k+1) = 1.
HeckeLoop hecke_loop(long k, long ell);

template <class Real>
Approx<Real> hecke_q(long k, long ell) {
    using std::cos;
    const Real pi = [] {
        if constexpr (std::is_same_v<Real, double>) {
            return std::numbers::pi;
        } else {
            return boost::math::constants::pi<Real>();
        }
    }();
    const Real c = cos(pi * Real(ell) / Real(2 * k + 1));
    const Real q = Real(4) * c * c;
    // cos loses relative accuracy near pi/2, so the bound is padded absolutely.
    return {q, Real(16) * unit_roundoff<Real>() * (q + Real(1))};
}

Path alternating_vector(std::size_t size);

}  // namespace cfloops
