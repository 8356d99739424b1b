#pragma once

// New non-uniqueness results from known loops: rescaling q, dividing q by an
// integer, and transporting an equal-value pair from a/b to a/b' for whole
// residue classes of b'.

#include "cfloops/fraction.hpp"
#include "cfloops/rational.hpp"

#include <optional>
#include <vector>

namespace cfloops {

struct RescaledLoop {
    Rational q;
    Path path;
    WeightSq weight;
};

/// m'_j = r m_j for j = k mod 2, r' m_j otherwise, at q' = q / (r r').
/// Throws std::invalid_argument if r r' <= 0, a scaled entry is not an
/// integer, or m' is not a path at q'.
RescaledLoop rescale_loop(const Rational& q, const Path& m, const Rational& r, const Rational& r_prime);

struct OddByN {
    /// The witness with weight^2 != 1, at q / n.
    RescaledLoop witness;
    /// The other rescaling, kept for the product check.
    RescaledLoop other;
};

/// Rescales an odd-length loop by (n, 1) and (1, n). Throws for even length,
/// n < 2, or a vector that is not a loop at q.
OddByN odd_by_n_witness(const Rational& q, const Path& m, long n);

/// q / n for n = 1, 2, 3, ...
class ForbiddenClosure {
public:
    explicit ForbiddenClosure(Rational q);
    Rational next();

private:
    Rational q_;
    long n_ = 0;
};

/// Transports a path from q = a/b to q' = a/b'. `signs` holds eps_0..eps_k.
/// Throws std::invalid_argument if m is not a path at a/b, the sizes differ,
/// gcd(a, b') != 1, or a congruence b' = eps_j eps_{j+1} b (mod u_j) fails.
Path modify_path(const Integer& a, const Integer& b, const Path& m, const std::vector<int>& signs,
                 const Integer& b_prime);

/// Numerators u_j of a c(q, m_j), j < k, in lowest terms.
std::vector<Integer> modification_numerators(const Rational& q, const Path& m);

struct FamilyCertificate {
    Integer a;
    Integer modulus;
    Integer residue;
    std::optional<Integer> exception;
    Path witness_m;
    Path witness_n;
    Rational base_q;

    /// b' = +-residue (mod modulus), gcd(a, b') = 1, b' != exception.
    bool covers(const Integer& b_prime) const;
};

/// Certificate for the pair (m, n) of equal value at q. The modulus is the
/// lcm of the u_j and x_j. Throws std::invalid_argument unless the values
/// agree and either the lengths or the weights differ.
FamilyCertificate family_from_pair(const Rational& q, const Path& m, const Path& n);

/// True if `modulus` is a multiple of the least valid modulus and the rest
/// of the certificate is what family_from_pair derives.
bool verify_family(const FamilyCertificate& cert);

struct FamilyMember {
    Rational q;
    Path m;
    Path n;
    WeightSq m_weight;
    WeightSq n_weight;
    /// Proper loop separating m and n, when both zero-skip to proper paths.
    std::optional<Path> loop;
    WeightSq loop_weight;
};

/// Builds the transported pair for a covered b', searching sign vectors until
/// the two sides have equal value. nullopt if b' is not covered or no sign
/// vector works.
std::optional<FamilyMember> family_member(const FamilyCertificate& cert, const Integer& b_prime);

}  // namespace cfloops
