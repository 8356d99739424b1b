#include "cfloops/continuant.hpp"
#include "cfloops/fraction.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cfloops;

namespace {

Rational R(long p, long q = 1) { return Rational(Integer(p), Integer(q)); }

}  // namespace

TEST(Eval, SmallExamples) {
    const PathEval ev = eval(R(2, 3), Path{1, -1, -3});
    ASSERT_TRUE(ev.is_loop());
    EXPECT_EQ(ev.weight_sq->value, R(1, 9));
    EXPECT_EQ(weight_sq(R(2), Path{1, -1, 1}).value, R(1));
    EXPECT_TRUE(is_loop(R(2), Path{1, -1, 1}));
    // Length-1 loops at 1/b.
    EXPECT_EQ(weight_sq(R(1, 2), Path{1, -2}).value, R(1, 2));
    EXPECT_EQ(weight_sq(R(1, 5), Path{5, -1}).value, R(5));
}

TEST(Eval, DetectsZeroDenominator) {
    const PathEval ev = eval(R(1), Path{1, -1, 3});
    EXPECT_FALSE(ev.is_path());
    EXPECT_EQ(ev.failed_at, 2U);
    EXPECT_FALSE(ev.weight_sq.has_value());
    EXPECT_THROW(weight_sq(R(1), Path{1, -1, 3}), std::invalid_argument);
    EXPECT_FALSE(is_path(R(1), Path{0, 1}));
    EXPECT_TRUE(is_path(R(1), Path{0}));
}

TEST(Eval, RejectsNonPositiveQ) {
    EXPECT_THROW(eval(R(0), Path{1}), std::invalid_argument);
    EXPECT_THROW(eval(R(-1, 2), Path{1}), std::invalid_argument);
}

TEST(Path, ParseAndPrint) {
    EXPECT_EQ(Path::parse("(1, -1, -3)"), (Path{1, -1, -3}));
    EXPECT_EQ(Path::parse("1,-1,-3"), (Path{1, -1, -3}));
    EXPECT_EQ(Path::parse("1 -1 -3"), (Path{1, -1, -3}));
    EXPECT_EQ((Path{2, 0, -5}).str(), "(2, 0, -5)");
    EXPECT_THROW(Path::parse("(1,,2)"), std::invalid_argument);
    EXPECT_THROW(Path::parse(""), std::invalid_argument);
    EXPECT_TRUE(Path().is_trivial());
}

TEST(LoopGroup, SkipComposeInverse) {
    EXPECT_EQ(zero_skip(Path{3, 0, 4, 1}), (Path{7, 1}));
    EXPECT_EQ(zero_skip(Path{1, 2, 0, -2, 5}), Path{6});
    EXPECT_EQ(zero_skip(Path{0, 0, 4}), Path{4});
    EXPECT_EQ(zero_skip(Path{1, 2, 0, -2, -1}), Path{0});
    EXPECT_EQ(compose(Path{1, 2}, Path{3, 4}), (Path{1, 5, 4}));
    EXPECT_EQ(inverse(Path{1, -1, -3}), (Path{3, 1, -1}));
}

TEST(LoopGroup, DifferenceOfEqualValues) {
    const Rational q = R(2, 3);
    auto pair = equal_value_pair(q, Path{1, -1, -3}, Path{2, 1});
    ASSERT_TRUE(pair);
    const Path u = loop_difference(q, pair->first, pair->second);
    EXPECT_TRUE(is_loop(q, u));
    EXPECT_EQ(zero_skip(compose(u, pair->second)), pair->first);
    EXPECT_THROW(loop_difference(q, Path{1}, Path{2}), std::invalid_argument);
}

// Property suites: random vectors against the projective integer oracle and
// the algebraic laws of the loop group.
class Properties : public ::testing::Test {
protected:
    std::mt19937_64 rng{20240917};
};

TEST_F(Properties, EvalMatchesOracle) {
    for (int i = 0; i < 20000; ++i) {
        const Rational q = oracle::random_q(rng);
        const Path m = oracle::random_path(rng, 7, 6, true);
        const auto o = oracle::evaluate(q, m);
        const PathEval ev = eval(q, m);
        ASSERT_EQ(ev.is_path(), o.path) << q << ' ' << m;
        if (o.path) {
            EXPECT_EQ(ev.value(), o.value);
            EXPECT_EQ(ev.weight_sq->value, o.weight_sq);
            EXPECT_EQ(ev.weight_sq->odd_length, m.length() % 2 == 1);
        }
    }
}

TEST_F(Properties, ContinuantFormsAgree) {
    for (int i = 0; i < 10000; ++i) {
        const Rational q = oracle::random_q(rng);
        const Path m = oracle::random_path(rng, 8, 5, true);
        const bool path = is_path(q, m);
        ASSERT_EQ(p2_is_path(q, m), path);
        ASSERT_EQ(p2_is_loop(q, m), is_loop(q, m));
        if (path) {
            EXPECT_EQ(p2_weight_sq(q, m), weight_sq(q, m));
        } else {
            EXPECT_THROW(p2_weight_sq(q, m), std::invalid_argument);
        }
    }
}

TEST_F(Properties, ZeroSkipPreservesValueAndWeight) {
    int checked = 0;
    for (int i = 0; i < 20000; ++i) {
        const Rational q = oracle::random_q(rng);
        const Path m = oracle::random_path(rng, 8, 3, true);
        if (!is_path(q, m)) {
            continue;
        }
        const Path s = zero_skip(m);
        for (std::size_t j = 1; j + 1 < s.size(); ++j) {
            EXPECT_NE(s[j], 0) << m;
        }
        const auto o = oracle::evaluate(q, s);
        ASSERT_TRUE(o.path) << m << " -> " << s;
        EXPECT_EQ(o.value, eval(q, m).value());
        EXPECT_EQ(o.weight_sq, weight_sq(q, m).value);
        ++checked;
    }
    EXPECT_GT(checked, 1000);
}

TEST_F(Properties, GroupLaws) {
    for (int i = 0; i < 3000; ++i) {
        const Path x = oracle::random_path(rng, 4, 5);
        const Path y = oracle::random_path(rng, 4, 5);
        const Path z = oracle::random_path(rng, 4, 5);
        EXPECT_EQ(compose(compose(x, y), z), compose(x, compose(y, z)));
        EXPECT_EQ(compose(x, Path{0}), x);
        EXPECT_EQ(compose(Path{0}, x), x);
        EXPECT_EQ(zero_skip(compose(x, inverse(x))), Path{0});
        EXPECT_EQ(zero_skip(compose(inverse(x), x)), Path{0});
        EXPECT_EQ(inverse(inverse(x)), x);
        EXPECT_EQ(inverse(compose(x, y)), compose(inverse(y), inverse(x)));
    }
}

// For a loop u and a path n, c(un) = c(n) and w(un) = w(u) w(n). Loops come
// from the brute-force box so this does not depend on the solver.
TEST_F(Properties, WeightIsMultiplicative) {
    struct Case {
        Rational q;
        std::vector<Path> loops;
    };
    std::vector<Case> cases;
    for (const Rational& q : {R(2, 3), R(1, 2), R(3, 4), R(1, 3), R(1), R(2)}) {
        Case c{q, {}};
        // Every proper loop with length <= 3 and entries in [-6, 6].
        for (long a = -6; a <= 6; ++a) {
            for (long b = -6; b <= 6; ++b) {
                for (long d = -6; d <= 6; ++d) {
                    for (const Path& m : {Path{a, b}, Path{a, b, d}}) {
                        if (is_proper(m) && m[0] != 0 && is_loop(q, m)) {
                            c.loops.push_back(m);
                        }
                    }
                }
            }
        }
        ASSERT_FALSE(c.loops.empty()) << q;
        cases.push_back(std::move(c));
    }
    int checked = 0;
    for (int i = 0; i < 4000; ++i) {
        const Case& c = cases[i % cases.size()];
        const Path& u = c.loops[rng() % c.loops.size()];
        const Path n = oracle::random_path(rng, 4, 5);
        const Path un = compose(u, n);
        const auto on = oracle::evaluate(c.q, n);
        const auto oun = oracle::evaluate(c.q, un);
        if (!on.path || !oun.path) {
            continue;
        }
        EXPECT_EQ(oun.value, on.value);
        EXPECT_EQ(oun.weight_sq, weight_sq(c.q, u).value * on.weight_sq);
        // Two loops compose to a loop with the product weight.
        const Path& v = c.loops[rng() % c.loops.size()];
        const Path uv = compose(u, v);
        if (is_path(c.q, uv)) {
            EXPECT_TRUE(is_loop(c.q, uv));
            EXPECT_EQ(weight_sq(c.q, uv).value, weight_sq(c.q, u).value * weight_sq(c.q, v).value);
        }
        ++checked;
    }
    EXPECT_GT(checked, 500);
}

TEST_F(Properties, LoopDifferenceReconstructs) {
    int checked = 0;
    for (int i = 0; i < 20000 && checked < 2000; ++i) {
        const Rational q = oracle::random_q(rng, 8, 5);
        const Path m = oracle::random_path(rng, 4, 4);
        const Path n = oracle::random_path(rng, 4, 4);
        const auto om = oracle::evaluate(q, m);
        const auto on = oracle::evaluate(q, n);
        if (!om.path || !on.path) {
            continue;
        }
        // Shift n's last entry so both values agree when the gap is an integer.
        const Rational gap = om.value - on.value;
        if (!gap.is_integer()) {
            continue;
        }
        std::vector<Integer> e = n.entries();
        e.back() += gap.numerator();
        const Path n2(std::move(e));
        if (!is_proper(n2) || !is_path(q, n2)) {
            continue;
        }
        const Path u = loop_difference(q, m, n2);
        EXPECT_TRUE(is_proper(u));
        EXPECT_TRUE(is_loop(q, u)) << q << ' ' << m << ' ' << n2 << " -> " << u;
        EXPECT_EQ(zero_skip(compose(u, n2)), m);
        EXPECT_EQ(weight_sq(q, u).value, weight_sq(q, m).value / weight_sq(q, n2).value);
        ++checked;
    }
    EXPECT_GT(checked, 200);
}

TEST_F(Properties, SymmetryImagesOfLoops) {
    // Negation keeps the weight, reversal inverts it.
    for (const auto& [q, m] : std::vector<std::pair<Rational, Path>>{
             {R(2, 3), Path{1, -1, -3}}, {R(5, 3), Path{-1, 1, -1, -1, -3}}, {R(9, 4), Path{-1, 1, -1, 2, 2}}}) {
        const Rational w = weight_sq(q, m).value;
        std::vector<Integer> neg, rev(m.entries().rbegin(), m.entries().rend());
        for (const auto& x : m) {
            neg.push_back(-x);
        }
        EXPECT_TRUE(is_loop(q, Path(neg)));
        EXPECT_EQ(weight_sq(q, Path(neg)).value, w);
        EXPECT_TRUE(is_loop(q, Path(rev)));
        EXPECT_EQ(weight_sq(q, Path(rev)).value, w.inverse());
    }
}
