#include "cfloops/divisors.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>

namespace cfloops {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr unsigned kTrialLimit = 1000;

u64 mul_mod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 e, u64 m) {
    u64 r = 1;
    base %= m;
    while (e != 0) {
        if ((e & 1) != 0) {
            r = mul_mod(r, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    return r;
}

// Deterministic for 64-bit inputs with these bases.
bool is_prime_u64(u64 n) {
    if (n < 2) {
        return false;
    }
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) {
            return n == p;
        }
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) {
            continue;
        }
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) {
            return false;
        }
    }
    return true;
}

u64 pollard_brent(u64 n) {
    if (n % 2 == 0) {
        return 2;
    }
    for (u64 c = 1;; ++c) {
        u64 y = 2;
        u64 m = 128;
        u64 g = 1;
        u64 r = 1;
        u64 q = 1;
        u64 x = 0;
        u64 ys = 0;
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) {
                y = f(y);
            }
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) {
            return g;
        }
    }
}

void factor_u64(u64 n, std::map<Integer, unsigned>& out) {
    if (n == 1) {
        return;
    }
    if (is_prime_u64(n)) {
        out[Integer(static_cast<unsigned long>(n))] += 1;
        return;
    }
    const u64 d = pollard_brent(n);
    factor_u64(d, out);
    factor_u64(n / d, out);
}

bool factor_big(const Integer& n, std::map<Integer, unsigned>& out, std::chrono::steady_clock::time_point deadline) {
    if (n == 1) {
        return true;
    }
    if (n.fits_ulong_p()) {
        factor_u64(n.get_ui(), out);
        return true;
    }
    if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
        out[n] += 1;
        return true;
    }
    for (unsigned long c = 1;; ++c) {
        Integer x(2);
        Integer y(2);
        Integer g(1);
        std::uint64_t steps = 0;
        while (g == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            g = gcd(abs(x - y), n);
            if ((++steps & 0x3ff) == 0 && std::chrono::steady_clock::now() > deadline) {
                return false;
            }
        }
        if (g != n) {
            Integer cofactor = n / g;
            return factor_big(g, out, deadline) && factor_big(cofactor, out, deadline);
        }
    }
}

}  // namespace

std::optional<std::vector<std::pair<Integer, unsigned>>> factorize(const Integer& n,
                                                                   std::chrono::steady_clock::time_point deadline) {
    if (n == 0) {
        throw std::invalid_argument("factorize(0)");
    }
    Integer rest = abs(n);
    std::map<Integer, unsigned> found;
    for (unsigned p = 2; p < kTrialLimit && rest > 1; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
            unsigned e = 0;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0) {
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
                ++e;
            }
            found[Integer(p)] = e;
        }
    }
    if (rest > 1 && !factor_big(rest, found, deadline)) {
        return std::nullopt;
    }
    return std::vector<std::pair<Integer, unsigned>>(found.begin(), found.end());
}

std::optional<std::vector<Integer>> positive_divisors(const Integer& n, std::chrono::steady_clock::time_point deadline) {
    auto factors = factorize(n, deadline);
    if (!factors) {
        return std::nullopt;
    }
    std::vector<Integer> divs{Integer(1)};
    for (const auto& [p, e] : *factors) {
        const std::size_t base = divs.size();
        Integer pk(1);
        for (unsigned i = 1; i <= e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) {
                divs.push_back(divs[j] * pk);
            }
        }
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

}  // namespace cfloops
