#pragma once

// Exact evaluation of the continued fractions
//
//   c(q, m) = m_k + 1 / (q m_{k-1} + q / (q m_{k-2} + ... + q / (q m_0)))
//
// and their weights w_q(m) = q^{k/2} prod_{j<k} |c(q, m_j)|, together with the
// loop group: composition, inverse, zero-skipping and the loop separating two
// equal-valued fractions.
//
// Weights are irrational in general (the q^{k/2} factor), so the library only
// ever handles their exact squares.

#include "cfloops/rational.hpp"

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cfloops {

/// Integer vector (m_0, ..., m_k), k >= 0. Whether it is a path depends on q.
class Path {
public:
    Path() : entries_{Integer(0)} {}
    Path(std::initializer_list<long> entries);
    explicit Path(std::vector<Integer> entries);

    /// Parses "(1,-1,-3)", "1,-1,-3" or "1 -1 -3".
    static Path parse(std::string_view text);

    /// k, the number of continued-fraction levels; size() - 1.
    std::size_t length() const { return entries_.size() - 1; }
    std::size_t size() const { return entries_.size(); }

    const Integer& operator[](std::size_t i) const { return entries_[i]; }
    const Integer& front() const { return entries_.front(); }
    const Integer& back() const { return entries_.back(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }
    const std::vector<Integer>& entries() const { return entries_; }

    /// The prefix (m_0, ..., m_j).
    Path prefix(std::size_t j) const;
    /// The suffix (m_j, ..., m_k).
    Path suffix(std::size_t j) const;

    bool is_trivial() const { return entries_.size() == 1 && entries_[0] == 0; }

    /// "(1, -1, -3)"
    std::string str() const;

    friend bool operator==(const Path&, const Path&) = default;
    friend bool operator<(const Path& x, const Path& y);

private:
    std::vector<Integer> entries_;
};

std::ostream& operator<<(std::ostream& os, const Path& m);

/// Exact value of w_q(m)^2.
struct WeightSq {
    Rational value{1};
    bool odd_length = false;

    bool is_one() const { return value == Rational(1); }

    /// Human-readable weight: "1/3" when the square root is rational,
    /// otherwise "sqrt(1/2)".
    std::string display() const;

    friend bool operator==(const WeightSq& x, const WeightSq& y) { return x.value == y.value; }
};

struct PathEval {
    /// c(q, m_j) for every j that could be evaluated.
    std::vector<Rational> prefix_values;
    /// First index j whose denominator q c(q, m_{j-1}) vanished.
    std::optional<std::size_t> failed_at;
    /// Present exactly when m is a path.
    std::optional<WeightSq> weight_sq;

    bool is_path() const { return !failed_at.has_value(); }
    bool is_loop() const { return is_path() && prefix_values.back().is_zero(); }
    const Rational& value() const { return prefix_values.back(); }
};

/// Evaluates every prefix of m at q. Requires q > 0.
PathEval eval(const Rational& q, const Path& m);

bool is_path(const Rational& q, const Path& m);
/// m_j != 0 for j = 0..k-1; the last entry is unconstrained.
bool is_proper(const Path& m);
bool is_loop(const Rational& q, const Path& m);

/// Weight squared of a path; throws std::invalid_argument for non-paths.
WeightSq weight_sq(const Rational& q, const Path& m);

/// Removes interior zeros using (.., x, 0, y, ..) -> (.., x + y, ..) until none
/// remain. Preserves value and weight wherever m is a path.
Path zero_skip(const Path& m);

/// (m_0, ..., m_k + n_0, ..., n_l). No normalisation is applied.
Path compose(const Path& m, const Path& n);

/// (-m_k, ..., -m_0).
Path inverse(const Path& m);

/// The proper loop u with zero_skip(compose(u, n)) == m, for proper paths m, n
/// of equal value at q. Throws std::invalid_argument otherwise.
Path loop_difference(const Rational& q, const Path& m, const Path& n);

/// Given a proper loop and any proper path n, returns two proper paths of equal
/// value at q whose weights differ by the loop's weight, or nullopt when the
/// composed vector is not a path.
std::optional<std::pair<Path, Path>> equal_value_pair(const Rational& q, const Path& loop, const Path& n);

/// Requires q > 0; throws std::invalid_argument otherwise.
void require_positive(const Rational& q);

}  // namespace cfloops
