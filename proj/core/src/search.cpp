#include "cfloops/search.hpp"

#include "cfloops/algebraic.hpp"
#include "cfloops/divisors.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

namespace cfloops {

const FoundLoop* SearchOutcome::nontrivial() const {
    for (const auto& l : loops_found) {
        if (!l.weight.is_one()) {
            return &l;
        }
    }
    return nullptr;
}

void SearchOutcome::add(const Rational& q, const Path& loop) {
    loops_found.push_back({loop, weight_sq(q, loop)});
}

void SearchOutcome::merge(SearchOutcome other) {
    loops_found.insert(loops_found.end(), std::make_move_iterator(other.loops_found.begin()),
                       std::make_move_iterator(other.loops_found.end()));
    solutions.insert(solutions.end(), std::make_move_iterator(other.solutions.begin()),
                     std::make_move_iterator(other.solutions.end()));
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
    exhaustive = exhaustive && other.exhaustive;
    nodes += other.nodes;
    normalise();
}

void SearchOutcome::normalise() {
    std::sort(loops_found.begin(), loops_found.end());
    loops_found.erase(std::unique(loops_found.begin(), loops_found.end()), loops_found.end());
    std::sort(solutions.begin(), solutions.end());
    solutions.erase(std::unique(solutions.begin(), solutions.end()), solutions.end());
}

std::vector<Path> symmetry_images(const Path& m) {
    std::vector<Integer> neg;
    neg.reserve(m.size());
    for (const auto& x : m) {
        neg.push_back(-x);
    }
    std::vector<Integer> rev(m.entries().rbegin(), m.entries().rend());
    std::vector<Integer> negrev(neg.rbegin(), neg.rend());
    return {m, Path(std::move(neg)), Path(std::move(rev)), Path(std::move(negrev))};
}

Path canonical_loop(const Path& m) {
    auto images = symmetry_images(m);
    return *std::min_element(images.begin(), images.end());
}

namespace {

// Signed divisors of n != 0, in increasing order.
std::vector<Integer> signed_divisors(const Integer& n) {
    auto pos = positive_divisors(n);
    std::vector<Integer> out;
    out.reserve(2 * pos->size());
    for (auto it = pos->rbegin(); it != pos->rend(); ++it) {
        out.push_back(-*it);
    }
    out.insert(out.end(), pos->begin(), pos->end());
    return out;
}

}  // namespace

SearchOutcome length1_loops(const Rational& q) {
    require_positive(q);
    SearchOutcome out;
    if (q.numerator() == 1) {
        const Integer b = q.denominator();
        for (const auto& d : signed_divisors(b)) {
            out.add(q, Path(std::vector<Integer>{d, Integer(-b / d)}));
        }
    }
    out.normalise();
    return out;
}

SearchOutcome length2_loops(const Rational& q) {
    require_positive(q);
    SearchOutcome out;
    const Integer a = q.numerator();
    const Integer b = q.denominator();
    // q = 1/u + 1/v  <=>  (a u - b)(a v - b) = b^2, and (m_0, m_1, m_2) is a
    // loop iff u = -m_1 m_2, v = -m_0 m_1.
    const Integer b2 = b * b;
    for (const auto& d : signed_divisors(b2)) {
        const Integer un = d + b;
        const Integer vn = b2 / d + b;
        if (un == 0 || vn == 0 || !mpz_divisible_p(un.get_mpz_t(), a.get_mpz_t()) ||
            !mpz_divisible_p(vn.get_mpz_t(), a.get_mpz_t())) {
            continue;
        }
        const Integer u = un / a;
        const Integer v = vn / a;
        for (const auto& m1 : signed_divisors(gcd(u, v))) {
            out.add(q, Path(std::vector<Integer>{Integer(-v / m1), m1, Integer(-u / m1)}));
        }
    }
    out.normalise();
    return out;
}

Integer dominance_threshold(const MultilinearForm& form, const std::vector<Integer>& lower) {
    const VarMask vars = form.variables();
    const Integer full = abs(form.full_coefficient());
    if (full == 0) {
        throw std::invalid_argument("dominance bound needs a nonzero full-product coefficient");
    }
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i <= kMaxVariables; ++i) {
        if ((vars >> i) & 1U) {
            live.push_back(i);
        }
    }
    // |c_full| prod D_j > sum_A |c_A| prod_{j in A} D_j, with D_j = max(L_j, t).
    auto dominates = [&](const Integer& t) {
        std::vector<Integer> d(live.size());
        Integer lhs = full;
        for (std::size_t s = 0; s < live.size(); ++s) {
            d[s] = std::max(lower[live[s]], t);
            lhs *= d[s];
        }
        Integer rhs(0);
        for (const auto& term : form.terms()) {
            if (term.mask == vars) {
                continue;
            }
            Integer p = abs(term.coefficient);
            for (std::size_t s = 0; s < live.size(); ++s) {
                if ((term.mask >> live[s]) & 1U) {
                    p *= d[s];
                }
            }
            rhs += p;
        }
        return lhs > rhs;
    };
    if (dominates(Integer(1))) {
        return Integer(1);
    }
    Integer lo(1);  // fails
    Integer hi(2);
    while (!dominates(hi)) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        Integer mid = (lo + hi) / 2;
        if (dominates(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

Integer dominance_bound(const MultilinearForm& form) {
    return dominance_threshold(form, std::vector<Integer>(kMaxVariables + 1, Integer(1))) - 1;
}

namespace {

using Clock = std::chrono::steady_clock;

struct SolverShared {
    Rational q;
    std::size_t k = 0;
    const SearchBudget* budget = nullptr;
    Clock::time_point deadline = Clock::time_point::max();
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> exhausted{false};
    std::atomic<bool> windowed{false};
};

struct Node {
    MultilinearForm form;
    std::vector<Integer> values;  // 0 marks a free entry
    std::vector<Integer> lower;   // lower bound on |m_j| for free j
};

class Solver {
public:
    explicit Solver(SolverShared& shared) : sh_(shared) {}

    std::vector<Path> take() { return std::move(found_); }

    // Children of the root, restricted by the reversal and negation symmetry.
    std::vector<Node> root_children(const Node& root) {
        const Integer t = dominance_threshold(root.form, root.lower);
        std::vector<Node> out;
        for (std::size_t i = 0; 2 * i <= sh_.k; ++i) {
            for (Integer v(1); v < t; ++v) {
                out.push_back(child(root, i, v, v));
            }
        }
        return out;
    }

    void solve(const Node& n) {
        if (stopped()) {
            return;
        }
        const bool paths_only = sh_.budget->paths_only;
        const VarMask vars = n.form.variables();
        if (vars == 0) {
            if (n.form.coefficient(0) == 0) {
                found_.emplace_back(n.values);
            }
            return;
        }
        if (paths_only && !completable(n)) {
            return;
        }
        const Integer full = n.form.full_coefficient();
        if (full == 0) {
            window(n);
            return;
        }
        std::vector<std::size_t> live;
        for (std::size_t i = 0; i <= sh_.k; ++i) {
            if ((vars >> i) & 1U) {
                live.push_back(i);
            }
        }
        if (live.size() == 1) {
            const std::size_t i = live[0];
            const Integer beta = n.form.coefficient(0);
            if (mpz_divisible_p(beta.get_mpz_t(), full.get_mpz_t()) != 0) {
                const Integer x = -beta / full;
                if (x != 0 && abs(x) >= n.lower[i]) {
                    leaf(n, {{i, x}});
                }
            }
            return;
        }
        if (live.size() == 2) {
            two_variables(n, live[0], live[1]);
            return;
        }
        const Integer t = dominance_threshold(n.form, n.lower);
        struct Branch {
            std::size_t terms;
            std::size_t var;
        };
        std::vector<Branch> order;
        for (auto i : live) {
            if (n.lower[i] < t) {
                order.push_back({n.form.terms_after_substitution(i), i});
            }
        }
        std::stable_sort(order.begin(), order.end(),
                         [](const Branch& x, const Branch& y) { return x.terms < y.terms; });
        for (const auto& br : order) {
            for (Integer v = n.lower[br.var]; v < t; ++v) {
                solve(child(n, br.var, v, v));
                solve(child(n, br.var, v, Integer(-v)));
                if (stopped()) {
                    return;
                }
            }
        }
    }

private:
    bool stopped() {
        if (sh_.exhausted.load(std::memory_order_relaxed)) {
            return true;
        }
        const auto count = sh_.nodes.fetch_add(1, std::memory_order_relaxed) + 1;
        if (count > sh_.budget->node_limit ||
            ((count & 0xfff) == 0 && sh_.deadline != Clock::time_point::max() && Clock::now() > sh_.deadline)) {
            sh_.exhausted = true;
            return true;
        }
        return false;
    }

    // m_i = value, which becomes the first minimiser of |m_j| over free j.
    Node child(const Node& n, std::size_t i, const Integer& absval, const Integer& value) {
        Node c{n.form.substitute(i, value), n.values, n.lower};
        c.values[i] = value;
        for (std::size_t j = 0; j <= sh_.k; ++j) {
            if (c.values[j] != 0 || j == i) {
                continue;
            }
            const Integer bound = j < i ? Integer(absval + 1) : absval;
            if (c.lower[j] < bound) {
                c.lower[j] = bound;
            }
        }
        return c;
    }

    void leaf(const Node& n, std::initializer_list<std::pair<std::size_t, Integer>> assign) {
        std::vector<Integer> v = n.values;
        for (const auto& [i, x] : assign) {
            v[i] = x;
        }
        found_.emplace_back(std::move(v));
    }

    // False when every completion of n has a vanishing prefix continuant, or
    // a vanishing continuant of a proper suffix. The first makes the
    // completion a non-path; the second makes its reversal one, and loops
    // are closed under reversal.
    bool completable(const Node& n) const {
        const std::size_t k = sh_.k;
        std::size_t f = 0;
        while (f <= k && n.values[f] != 0) {
            ++f;
        }
        if (f > 0) {
            Rational c(n.values[0]);
            for (std::size_t j = 1; j < f; ++j) {
                if (c.is_zero()) {
                    return false;
                }
                c = Rational(n.values[j]) + (sh_.q * c).inverse();
            }
            if (c.is_zero()) {
                return false;
            }
        }
        std::size_t g = k;
        while (n.values[g] != 0) {
            --g;  // a free entry exists, so this stops
        }
        if (g < k) {
            Rational c(n.values[k]);
            for (std::size_t j = k; j-- > g + 1;) {
                if (c.is_zero()) {
                    return false;
                }
                c = Rational(n.values[j]) + (sh_.q * c).inverse();
            }
            if (c.is_zero()) {
                return false;
            }
        }
        return true;
    }

    // alpha x y + beta x + gamma y + delta = 0  <=>
    // (alpha x + gamma)(alpha y + beta) = beta gamma - alpha delta.
    void two_variables(const Node& n, std::size_t xi, std::size_t yi) {
        const VarMask bx = VarMask{1} << xi;
        const VarMask by = VarMask{1} << yi;
        const Integer alpha = n.form.coefficient(bx | by);
        const Integer beta = n.form.coefficient(bx);
        const Integer gamma = n.form.coefficient(by);
        const Integer delta = n.form.coefficient(0);
        const Integer d = beta * gamma - alpha * delta;
        auto exact_div = [](const Integer& num, const Integer& den, Integer* out) {
            if (mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t()) == 0) {
                return false;
            }
            *out = num / den;
            return true;
        };
        if (d == 0) {
            // One factor vanishes, leaving the other variable unconstrained.
            Integer x;
            if (exact_div(-gamma, alpha, &x) && x != 0 && abs(x) >= n.lower[xi]) {
                Node c{n.form.substitute(xi, x), n.values, n.lower};
                c.values[xi] = x;
                solve(c);
            }
            Integer y;
            if (exact_div(-beta, alpha, &y) && y != 0 && abs(y) >= n.lower[yi]) {
                Node c{n.form.substitute(yi, y), n.values, n.lower};
                c.values[yi] = y;
                solve(c);
            }
            return;
        }
        auto divs = positive_divisors(d, sh_.deadline);
        if (!divs) {
            sh_.exhausted = true;
            return;
        }
        for (const auto& p : *divs) {
            for (int s : {1, -1}) {
                const Integer e = s * p;
                Integer x;
                Integer y;
                if (!exact_div(e - gamma, alpha, &x) || !exact_div(d / e - beta, alpha, &y)) {
                    continue;
                }
                if (x == 0 || y == 0 || abs(x) < n.lower[xi] || abs(y) < n.lower[yi]) {
                    continue;
                }
                leaf(n, {{xi, x}, {yi, y}});
            }
        }
    }

    // The full-product coefficient vanished: some block of assigned entries
    // has a zero continuant and the solutions are not bounded. Only the
    // window |m_j| <= entry_bound is searched and the result is marked
    // non-exhaustive.
    void window(const Node& n) {
        sh_.windowed = true;
        std::size_t i = 0;
        while (n.values[i] != 0) {
            ++i;
        }
        const long w = sh_.budget->entry_bound;
        for (long v = -w; v <= w; ++v) {
            if (v == 0 || abs(Integer(v)) < n.lower[i]) {
                continue;
            }
            Node c{n.form.substitute(i, Integer(v)), n.values, n.lower};
            c.values[i] = v;
            solve(c);
            if (sh_.exhausted) {
                return;
            }
        }
    }

    SolverShared& sh_;
    std::vector<Path> found_;
};

}  // namespace

SearchOutcome diophantine_search(const Integer& a, const Integer& b, std::size_t k, const SearchBudget& budget) {
    if (a < 1 || b < 1 || gcd(a, b) != 1) {
        throw std::invalid_argument("diophantine_search needs coprime a, b >= 1");
    }
    if (k < 1) {
        throw std::invalid_argument("diophantine_search needs k >= 1");
    }
    SolverShared sh;
    sh.q = Rational(a, b);
    sh.k = k;
    sh.budget = &budget;
    if (budget.time_limit.count() > 0) {
        sh.deadline = Clock::now() + budget.time_limit;
    }
    Node root{cleared_form(a, b, k).form, std::vector<Integer>(k + 1, Integer(0)),
              std::vector<Integer>(k + 1, Integer(1))};

    std::vector<Path> raw;
    if (k <= 2) {
        Solver s(sh);
        s.solve(root);
        raw = s.take();
    } else {
        Solver seed(sh);
        const std::vector<Node> tasks = seed.root_children(root);
        std::atomic<std::size_t> next{0};
        std::mutex mu;
        auto worker = [&] {
            Solver s(sh);
            for (std::size_t t = next++; t < tasks.size(); t = next++) {
                s.solve(tasks[t]);
            }
            auto part = s.take();
            std::lock_guard lock(mu);
            raw.insert(raw.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
        };
        const unsigned n = std::max(1U, budget.threads);
        std::vector<std::thread> pool;
        for (unsigned i = 1; i < n; ++i) {
            pool.emplace_back(worker);
        }
        worker();
        for (auto& th : pool) {
            th.join();
        }
        // Undo the symmetry restriction of the root branching.
        std::vector<Path> closed;
        for (const auto& m : raw) {
            for (auto& img : symmetry_images(m)) {
                closed.push_back(std::move(img));
            }
        }
        raw = std::move(closed);
    }

    SearchOutcome out;
    out.nodes = sh.nodes;
    for (const auto& m : raw) {
        const PathEval ev = eval(sh.q, m);
        if (ev.is_loop()) {
            out.add(sh.q, m);
        } else if (!budget.paths_only) {
            const Path repaired = suffix_repair(sh.q, m);
            if (!repaired.is_trivial()) {
                out.add(sh.q, repaired);
            }
        }
        if (!budget.paths_only) {
            out.solutions.push_back(m);
        }
    }
    out.exhaustive = !sh.exhausted && !sh.windowed;
    if (sh.exhausted) {
        out.notes.push_back("k=" + std::to_string(k) + ": budget exhausted after " + std::to_string(out.nodes) +
                            " nodes");
    }
    if (sh.windowed) {
        out.notes.push_back("k=" + std::to_string(k) + ": unbounded solution family, searched |m_j| <= " +
                            std::to_string(budget.entry_bound) + " only");
    }
    out.normalise();
    return out;
}

SearchOutcome diophantine_search_upto(const Integer& a, const Integer& b, const SearchBudget& budget) {
    SearchOutcome out;
    for (std::size_t k = 1; k <= budget.max_length; ++k) {
        out.merge(diophantine_search(a, b, k, budget));
    }
    return out;
}

namespace {

// Paths of the heuristic are stored as a parent-pointer tree.
struct BeamNode {
    std::uint32_t parent;
    Integer entry;
};

constexpr std::uint32_t kNoParent = 0xffffffffU;

Path unwind(const std::vector<BeamNode>& tree, std::uint32_t idx) {
    std::vector<Integer> rev;
    for (; idx != kNoParent; idx = tree[idx].parent) {
        rev.push_back(tree[idx].entry);
    }
    return Path(std::vector<Integer>(rev.rbegin(), rev.rend()));
}

struct RationalHash {
    std::size_t operator()(const Rational& r) const {
        IntegerHash h;
        return h(r.numerator()) * 31 + h(r.denominator());
    }
};

struct Frontier {
    std::uint32_t node;
    Rational value;
    Rational weight;
};

}  // namespace

SearchOutcome heuristic_search(const Rational& q, const SearchBudget& budget) {
    require_positive(q);
    SearchOutcome out;
    out.exhaustive = false;
    const Rational bound = budget.value_bound.abs();
    std::vector<BeamNode> tree;
    std::unordered_map<Rational, std::uint32_t, RationalHash> seen;
    std::vector<Frontier> frontier;

    auto seed = [&](const Integer& m0) {
        tree.push_back({kNoParent, m0});
        const auto idx = static_cast<std::uint32_t>(tree.size() - 1);
        seen.emplace(Rational(m0), idx);
        frontier.push_back({idx, Rational(m0), Rational(1)});
    };
    seed(Integer(1));
    if (q.denominator() != 1) {
        seed(q.denominator());
    }

    const Clock::time_point deadline =
        budget.time_limit.count() > 0 ? Clock::now() + budget.time_limit : Clock::time_point::max();
    for (std::size_t gen = 1; gen <= budget.heuristic_length && !frontier.empty(); ++gen) {
        std::vector<Frontier> next;
        for (const auto& f : frontier) {
            const Rational t = (q * f.value).inverse();
            const Rational w = f.weight * q * f.value * f.value;
            // m + t in (-C, C).
            const Rational lo = -t - bound;
            Integer m = lo.numerator();
            mpz_fdiv_q(m.get_mpz_t(), lo.numerator().get_mpz_t(), lo.denominator().get_mpz_t());
            for (;; ++m) {
                const Rational c = Rational(m) + t;
                if (c >= bound) {
                    break;
                }
                if (m == 0 || c <= -bound) {
                    continue;
                }
                ++out.nodes;
                if (c.is_zero()) {
                    Path loop = unwind(tree, f.node);
                    std::vector<Integer> e = loop.entries();
                    e.push_back(m);
                    out.add(q, Path(std::move(e)));
                    continue;
                }
                if (tree.size() >= kNoParent - 1) {
                    break;
                }
                tree.push_back({f.node, m});
                const auto idx = static_cast<std::uint32_t>(tree.size() - 1);
                auto [it, fresh] = seen.emplace(c, idx);
                if (!fresh) {
                    // Two proper paths of equal value: unequal weights give a loop.
                    const Path mine = unwind(tree, idx);
                    const Path theirs = unwind(tree, it->second);
                    if (weight_sq(q, theirs).value != w) {
                        out.add(q, loop_difference(q, mine, theirs));
                    }
                    tree.pop_back();
                    continue;
                }
                next.push_back({idx, c, w});
            }
        }
        std::sort(next.begin(), next.end(), [](const Frontier& x, const Frontier& y) {
            const int nx = cmp(abs(x.value.numerator()), abs(y.value.numerator()));
            if (nx != 0) {
                return nx < 0;
            }
            const int dx = cmp(x.value.denominator(), y.value.denominator());
            if (dx != 0) {
                return dx < 0;
            }
            return x.node < y.node;
        });
        if (next.size() > budget.beam_capacity) {
            next.resize(budget.beam_capacity);
        }
        frontier = std::move(next);
        if (budget.stop_at_first && out.nontrivial() != nullptr) {
            break;
        }
        if (Clock::now() > deadline) {
            out.notes.push_back("time limit reached at generation " + std::to_string(gen));
            break;
        }
    }
    out.normalise();
    return out;
}

SearchOutcome brute_force_enum(const Rational& q, std::size_t max_length, long entry_bound) {
    require_positive(q);
    SearchOutcome out;
    std::vector<Integer> m;
    // Depth-first over prefixes, carrying c(q, m_j).
    auto rec = [&](auto&& self, const Rational& c) -> void {
        const std::size_t j = m.size() - 1;
        if (c.is_zero()) {
            if (j >= 1) {
                out.add(q, Path(m));
            }
            return;  // extensions are not paths
        }
        if (j == max_length) {
            return;
        }
        const Rational t = (q * c).inverse();
        for (long v = -entry_bound; v <= entry_bound; ++v) {
            m.emplace_back(v);
            ++out.nodes;
            self(self, Rational(v) + t);
            m.pop_back();
        }
    };
    for (long v = -entry_bound; v <= entry_bound; ++v) {
        m.assign(1, Integer(v));
        rec(rec, Rational(v));
    }
    out.normalise();
    return out;
}

}  // namespace cfloops
