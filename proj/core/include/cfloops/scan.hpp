#pragma once

// Certifying individual q and sweeping ranges of q, plus the two summary
// tables.

#include "cfloops/search.hpp"
#include "cfloops/store.hpp"

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace cfloops {

/// Methods are tried in this order: 1 closed forms, 2 stored families,
/// 3 Diophantine solver, 4 heuristic, then derivations from other q.
struct CertifyOptions {
    std::set<int> methods{1, 2, 3, 4};
    bool derivations = true;
    SearchBudget budget;
    /// Separate, smaller length limit for method 3 inside sweeps.
    std::size_t scan_max_length = 4;
};

struct CertifyResult {
    bool certified = false;
    std::string method;
    /// Lengths 1..exhaustive_upto were searched exhaustively without a loop
    /// of weight != 1.
    std::optional<long> exhaustive_upto;
    std::vector<std::string> notes;
    /// New records, already appended to the store.
    std::vector<Certificate> records;
};

/// Looks for a certificate of non-uniqueness at q and appends what it finds.
/// Does not consult existing loop records for q itself.
CertifyResult certify(const Rational& q, Store& store, const CertifyOptions& opts);

/// (-1, 0, 2) against (1) at a/1: equal values for every q, so a family
/// modulo a for b' = +-1.
FamilyCertificate unit_seed_family(const Integer& a);

struct ScanOptions {
    long a_max = 6;
    long b_max = 20;
    /// Upper bound on q, capped at 4.
    Rational q_max{4};
    CertifyOptions certify;
    /// Skip q already in the ledger.
    bool resume = true;
};

struct ScanSummary {
    std::size_t eligible = 0;
    std::size_t certified = 0;
    std::size_t open = 0;
    std::size_t skipped = 0;
};

/// Reduced a/b with 1 <= a <= a_max, 1 <= b <= b_max, q < min(q_max, 4), in
/// order of a then b.
std::vector<Rational> scan_range(long a_max, long b_max, const Rational& q_max);

ScanSummary scan(const ScanOptions& opts, Store& store, Ledger& ledger,
                 const std::function<void(const Rational&, const LedgerEntry&)>& progress = {});

/// The q = a/b with 2 <= b <= 4 and q < 4, each with the shortest stored
/// loop, or OPEN.
std::string format_table1(const Store& store);

/// Stored families: a, b, N, b'', m, n.
std::string format_table2(const Store& store);

}  // namespace cfloops
