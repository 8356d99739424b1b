#pragma once

#include "cfloops/rational.hpp"

#include <chrono>
#include <optional>
#include <utility>
#include <vector>

namespace cfloops {

/// Prime factorisation of |n|, n != 0, as (prime, exponent) pairs in
/// increasing order. Small primes are removed by trial division; a cofactor
/// that fits in 64 bits is split with Miller-Rabin and Pollard-Brent. Larger
/// composite cofactors fall back to Pollard rho over GMP, bounded by
/// `deadline`; nullopt means the deadline passed.
std::optional<std::vector<std::pair<Integer, unsigned>>> factorize(
    const Integer& n, std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max());

/// All positive divisors of |n| in increasing order; nullopt when the
/// factorisation did not finish before the deadline.
std::optional<std::vector<Integer>> positive_divisors(
    const Integer& n, std::chrono::steady_clock::time_point deadline = std::chrono::steady_clock::time_point::max());

}  // namespace cfloops
