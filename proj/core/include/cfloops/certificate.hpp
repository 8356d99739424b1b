#pragma once

// Certificates of weight non-uniqueness, one JSON object per line.
//
//   loop     a proper loop at a/b with weight^2 != 1
//   family   an equal-value pair at a/b covering b' = +-residue (mod N)
//   closure  a/b = (base_a/base_b) / n for a certified base

#include "cfloops/family.hpp"
#include "cfloops/fraction.hpp"
#include "cfloops/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfloops {

inline constexpr const char* kToolVersion = "1.0.0";

struct Certificate {
    std::string kind;  // "loop", "family" or "closure"
    Integer a;
    Integer b;
    Path path;
    std::optional<Path> path2;
    Rational weight_sq{1};
    /// "1".."4", "derived", "seed" or "fixture".
    std::string method;
    std::optional<Integer> modulus;
    std::optional<Integer> residue;
    std::optional<Integer> exception;
    /// No loop of weight != 1 has length below this (exhaustive search).
    std::optional<long> exhaustive_upto;
    std::optional<Integer> base_a;
    std::optional<Integer> base_b;
    std::optional<long> n;
    std::string timestamp;
    std::string version = kToolVersion;

    Rational q() const { return Rational(a, b); }
    /// Identity used to drop duplicates from a store.
    std::string key() const;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Serialises to a single line without the trailing newline.
std::string to_json_line(const Certificate& cert);

/// Throws ParseError for malformed records.
Certificate parse_certificate(const std::string& line);

struct Verdict {
    bool ok = false;
    std::string message;
};

/// Checks a record on its own. Closures are checked arithmetically only; see
/// verify_all for the cross-record part.
Verdict verify(const Certificate& cert);

/// Verifies every record; a closure also needs a verified loop or family
/// record for its base. Returns one verdict per certificate.
std::vector<Verdict> verify_all(const std::vector<Certificate>& certs);

Certificate loop_certificate(const Rational& q, const Path& loop, std::string method);
Certificate family_certificate(const FamilyCertificate& fam, std::string method);
FamilyCertificate to_family(const Certificate& cert);
Certificate closure_certificate(const Rational& base, long n);

/// Current UTC time as an ISO 8601 string.
std::string utc_timestamp();

}  // namespace cfloops
