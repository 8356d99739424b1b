#pragma once

// Loop searches for rational q = a/b.
//
//   length1_loops / length2_loops   closed forms for k = 1, 2
//   diophantine_search              exact branch-and-bound on the cleared form
//   heuristic_search                beam search over bounded-value extensions
//   brute_force_enum                box enumeration, used as a test oracle

#include "cfloops/continuant.hpp"
#include "cfloops/fraction.hpp"
#include "cfloops/rational.hpp"

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace cfloops {

struct SearchBudget {
    std::size_t max_length = 6;
    /// Box for brute force, and the window used when the solver meets an
    /// unbounded family of solutions.
    long entry_bound = 8;
    std::size_t beam_capacity = 100000;
    /// The heuristic keeps |c(q, m)| below this.
    Rational value_bound{2};
    /// Number of heuristic generations, i.e. the longest path it builds.
    std::size_t heuristic_length = 40;
    std::uint64_t node_limit = 200'000'000;
    /// Zero disables the limit.
    std::chrono::milliseconds time_limit{0};
    unsigned threads = 1;
    /// Only loops are wanted. Lets the solver prune branches whose
    /// completions cannot be paths. When false, every integer solution of the
    /// cleared form is kept and non-paths go through suffix_repair.
    bool paths_only = true;
    /// The heuristic returns as soon as it has a loop of weight != 1.
    bool stop_at_first = false;
};

struct FoundLoop {
    Path path;
    WeightSq weight;

    friend bool operator==(const FoundLoop& x, const FoundLoop& y) { return x.path == y.path; }
    friend bool operator<(const FoundLoop& x, const FoundLoop& y) { return x.path < y.path; }
};

struct SearchOutcome {
    /// Sorted, without duplicates.
    std::vector<FoundLoop> loops_found;
    /// True iff every loop within the stated scope was found.
    bool exhaustive = true;
    std::uint64_t nodes = 0;
    std::vector<std::string> notes;
    /// Diophantine search only: raw integer solutions of the cleared form
    /// (all of them when paths_only is false).
    std::vector<Path> solutions;

    /// First loop with weight^2 != 1, if any.
    const FoundLoop* nontrivial() const;
    void add(const Rational& q, const Path& loop);
    void merge(SearchOutcome other);
    void normalise();
};

/// All loops of length 1 with nonzero entries: (d, -b/d) when q = 1/b.
SearchOutcome length1_loops(const Rational& q);

/// All loops of length 2 with nonzero entries, from q = 1/u + 1/v.
SearchOutcome length2_loops(const Rational& q);

/// Smallest t >= 1 such that every assignment with |m_j| >= max(lower[j], t)
/// for all live j makes the full-product term dominate the rest, so that the
/// form cannot vanish. The branching bound is t - 1. Requires a nonzero
/// full-product coefficient. `lower` is indexed by variable.
Integer dominance_threshold(const MultilinearForm& form, const std::vector<Integer>& lower);

/// Top-level bound M on min |m_j| for solutions of the cleared form.
Integer dominance_bound(const MultilinearForm& form);

/// Loops of length exactly k with nonzero entries, by solving the cleared
/// form. With paths_only unset, also returns non-path solutions and their
/// repaired suffixes.
SearchOutcome diophantine_search(const Integer& a, const Integer& b, std::size_t k, const SearchBudget& budget);

/// diophantine_search for k = 1..budget.max_length, merged.
SearchOutcome diophantine_search_upto(const Integer& a, const Integer& b, const SearchBudget& budget);

/// Beam search from m_0 in {1, b}. Never exhaustive.
SearchOutcome heuristic_search(const Rational& q, const SearchBudget& budget);

/// Every loop of length 1..max_length with entries in [-bound, bound].
SearchOutcome brute_force_enum(const Rational& q, std::size_t max_length, long entry_bound);

/// The four symmetry images of a loop: itself, negated, reversed, both.
std::vector<Path> symmetry_images(const Path& m);

/// Lexicographically least symmetry image.
Path canonical_loop(const Path& m);

}  // namespace cfloops
