#include "cfloops/algebraic.hpp"

#include <numeric>

namespace cfloops {

Path suffix_repair(const Rational& q, const Path& m) {
    require_positive(q);
    auto continuants = [&q](const Path& v) {
        std::vector<Rational> ps;
        Rational p(v[0]);
        Rational qq(1);
        ps.push_back(p);
        for (std::size_t l = 1; l < v.size(); ++l) {
            Rational xp = q * p;
            p = xp * Rational(v[l]) + qq;
            qq = std::move(xp);
            ps.push_back(p);
        }
        return ps;
    };
    Path cur = m;
    auto ps = continuants(cur);
    if (!ps.back().is_zero()) {
        throw std::invalid_argument("suffix_repair: P_k(q, m) does not vanish for " + m.str());
    }
    for (;;) {
        std::optional<std::size_t> first;
        for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
            if (ps[i].is_zero()) {
                first = i;
                break;
            }
        }
        if (!first) {
            return cur;
        }
        // P_{i+1} = Q_i = q P_{i-1} != 0, so i + 1 < k.
        if (*first + 2 > cur.length()) {
            throw std::logic_error("suffix_repair: vanishing prefix adjacent to the end");
        }
        cur = cur.suffix(*first + 2);
        ps = continuants(cur);
    }
}

Path alternating_vector(std::size_t size) {
    std::vector<Integer> v;
    v.reserve(size);
    for (std::size_t j = 0; j < size; ++j) {
        v.emplace_back(j % 2 == 0 ? 1 : -1);
    }
    return Path(std::move(v));
}

namespace {

template <class Real>
HeckeLoop hecke_loop_impl(long k, long ell) {
    using std::abs;
    using std::pow;
    const Approx<Real> q = hecke_q<Real>(k, ell);
    const Path alt = alternating_vector(static_cast<std::size_t>(2 * k));
    const auto ps = p_numeric(q, alt);
    const Real scale = pow(q.value, Real(-(k - 1)));
    HeckeLoop out;
    out.q = static_cast<double>(q.value);
    out.raw_residual = static_cast<double>(abs(ps.back().value));
    out.normalized_residual = static_cast<double>(abs(ps.back().value) * scale);
    out.residual_bound = static_cast<double>(ps.back().error * scale);
    out.extended_precision = !std::is_same_v<Real, double>;
    out.path = suffix_repair_numeric(q, alt);
    out.repaired = !(out.path == alt);
    const auto ev = eval_numeric(q, out.path);
    if (!ev.is_loop()) {
        throw std::runtime_error("hecke_loop: repaired vector is not a numeric loop");
    }
    out.weight_sq = static_cast<double>(ev.weight_sq.value);
    return out;
}

}  // namespace

HeckeLoop hecke_loop(long k, long ell) {
    if (k < 1 || ell < 1 || ell >= 2 * k + 1 || std::gcd(ell, 2 * k + 1) != 1) {
        throw std::invalid_argument("hecke_loop needs k >= 1, 1 <= ell < 2k+1, gcd(ell, 2k+1) = 1");
    }
    if (k <= 10) {
        return hecke_loop_impl<double>(k, ell);
    }
    return hecke_loop_impl<Extended>(k, ell);
}

}  // namespace cfloops
