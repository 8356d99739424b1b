// One line per acceptance criterion; nonzero exit if any fails.

#include "cfloops/algebraic.hpp"
#include "cfloops/certificate.hpp"
#include "cfloops/continuant.hpp"
#include "cfloops/family.hpp"
#include "cfloops/scan.hpp"
#include "cfloops/search.hpp"
#include "cfloops/store.hpp"

#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <unistd.h>

using namespace cfloops;
namespace fs = std::filesystem;

namespace {

Rational R(long p, long q = 1) { return Rational(Integer(p), Integer(q)); }

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            if (ok) {
                detail << what;
            }
            ok = false;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& title, double budget_s, const std::function<void(Check&)>& body) {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.expect(false, std::string("exception: ") + e.what());
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(s <= budget_s, "over time budget");
    std::printf("%s %2d %s (%.2fs)%s%s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), s, c.ok ? "" : ": ",
                c.ok ? "" : c.detail.str().c_str());
    std::fflush(stdout);
    failures += c.ok ? 0 : 1;
}

std::string fixture(const char* name) { return std::string(CFLOOPS_FIXTURES) + "/" + name; }

bool zero_free(const Path& m) {
    return std::none_of(m.begin(), m.end(), [](const Integer& x) { return x == 0; });
}

bool within(const Path& m, long bound) {
    return std::all_of(m.begin(), m.end(), [&](const Integer& x) { return abs(x) <= bound; });
}

// Printed weights of the small-denominator loop table, by q.
const std::vector<std::pair<Rational, Rational>>& printed_weights() {
    static const std::vector<std::pair<Rational, Rational>> w = {
        // sqrt(1/b) rows hold 1/b.
        {R(1, 2), R(1, 2)},  {R(3, 2), R(1, 2)},  {R(5, 2), R(1, 4)},  {R(7, 2), R(1, 8)},   {R(1, 3), R(1, 3)},
        {R(2, 3), R(1, 3)},  {R(4, 3), R(1, 3)},  {R(5, 3), R(1, 9)},  {R(7, 3), R(1, 27)},  {R(8, 3), R(1, 9)},
        {R(10, 3), R(1, 81)}, {R(11, 3), R(1, 243)}, {R(1, 4), R(1, 4)}, {R(3, 4), R(1, 4)},  {R(5, 4), R(1, 4)},
        {R(7, 4), R(1, 8)},  {R(9, 4), R(1, 8)},  {R(11, 4), R(1, 32)}, {R(13, 4), R(1, 64)}, {R(15, 4), R(1, 4096)},
    };
    return w;
}

}  // namespace

int main() {
    criterion(1, "small-denominator loop table verifies exactly", 1.0, [](Check& c) {
        const auto certs = read_certificates(fixture("small_denominator_loops.jsonl"));
        c.expect(certs.size() == printed_weights().size(), "row count");
        for (const auto& cert : certs) {
            const Rational q = cert.q();
            const PathEval ev = eval(q, cert.path);
            c.expect(ev.is_loop(), q.str() + " not a loop");
            const auto it = std::find_if(printed_weights().begin(), printed_weights().end(),
                                         [&](const auto& p) { return p.first == q; });
            c.expect(it != printed_weights().end(), q.str() + " not printed");
            if (it == printed_weights().end() || !ev.is_loop()) {
                continue;
            }
            // Length-1 rows were printed as sqrt(w^2), so the table entry is w^2 there.
            const bool sqrt_row = cert.path.length() == 1;
            const Rational printed_sq = sqrt_row ? it->second : it->second * it->second;
            c.expect(ev.weight_sq->value == printed_sq, q.str() + " weight^2 " + ev.weight_sq->value.str() +
                                                            " vs printed^2 " + printed_sq.str());
            c.expect(verify(cert).ok, q.str() + " certificate");
        }
    });

    criterion(2, "worked examples 2/3 and 2", 0.1, [](Check& c) {
        const PathEval a = eval(R(2, 3), Path{1, -1, -3});
        c.expect(a.is_loop() && a.weight_sq->value == R(1, 9), "2/3");
        const PathEval b = eval(R(2), Path{1, -1, 1});
        c.expect(b.is_loop() && b.weight_sq->value == R(1), "2");
    });

    criterion(3, "7/2 has no weight!=1 loop of length <= 6 (exhaustive)", 1800.0, [](Check& c) {
        SearchBudget budget;
        budget.max_length = 6;
        const SearchOutcome out = diophantine_search_upto(Integer(7), Integer(2), budget);
        c.expect(out.exhaustive, "not exhaustive");
        c.expect(out.nontrivial() == nullptr, "found a loop");
        std::printf("     7/2: exhaustive_upto=6, %llu nodes\n", static_cast<unsigned long long>(out.nodes));
    });

    criterion(4, "brute force and solver agree on 20 random boxes", 600.0, [](Check& c) {
        std::mt19937_64 rng(2024);
        std::set<Rational> seen;
        while (seen.size() < 20) {
            const Rational q = oracle::random_q(rng, 15, 8);
            if (q >= R(4) || !seen.insert(q).second) {
                continue;
            }
            SearchBudget budget;
            budget.max_length = 4;
            budget.entry_bound = 8;
            const SearchOutcome dio = diophantine_search_upto(q.numerator(), q.denominator(), budget);
            std::set<Path> solver;
            for (const auto& l : dio.loops_found) {
                if (within(l.path, 8)) {
                    solver.insert(l.path);
                }
            }
            std::set<Path> brute;
            for (const auto& l : brute_force_enum(q, 4, 8).loops_found) {
                if (zero_free(l.path)) {
                    brute.insert(l.path);
                }
            }
            c.expect(solver == brute, q.str() + ": loop sets differ");
        }
    });

    criterion(5, "continuant form agrees with the engine on 10^4 inputs", 60.0, [](Check& c) {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 10000; ++i) {
            const Rational q = oracle::random_q(rng);
            const Path m = oracle::random_path(rng, 8, 6, true);
            const bool path = is_path(q, m);
            c.expect(p2_is_path(q, m) == path, "path " + m.str());
            c.expect(p2_is_loop(q, m) == is_loop(q, m), "loop " + m.str());
            if (path) {
                c.expect(p2_weight_sq(q, m) == weight_sq(q, m), "weight " + m.str());
            }
        }
    });

    criterion(6, "cleared form for 26/23, length 6, and bound M = 2", 5.0, [](Check& c) {
        const MultilinearForm f = cleared_form(Integer(26), Integer(23), 6).form;
        const int sign = f.full_coefficient() > 0 ? 1 : -1;
        std::map<int, std::set<Integer>> by_degree;
        for (const auto& t : f.terms()) {
            by_degree[__builtin_popcountll(t.mask)].insert(Integer(sign) * t.coefficient);
        }
        const std::map<int, std::set<Integer>> expected = {
            {7, {Integer(17576)}}, {5, {Integer(15548)}}, {3, {Integer(13754)}}, {1, {Integer(12167)}}};
        c.expect(by_degree == expected, "coefficients " + f.str());
        c.expect(f.term_count() == 21, "term count");
        c.expect(dominance_bound(f) == 2, "M = " + dominance_bound(f).get_str());
    });

    criterion(7, "printed families reproduce and transport to sampled b'", 60.0, [](Check& c) {
        const auto certs = read_certificates(fixture("families.jsonl"));
        c.expect(certs.size() == 5, "row count");
        for (const auto& cert : certs) {
            const FamilyCertificate printed = to_family(cert);
            const FamilyCertificate fresh = family_from_pair(cert.q(), cert.path, *cert.path2);
            const std::string tag = cert.q().str();
            c.expect(mpz_divisible_p(printed.modulus.get_mpz_t(), fresh.modulus.get_mpz_t()) != 0,
                     tag + ": N not a multiple of " + fresh.modulus.get_str());
            c.expect(verify_family(printed), tag + ": exception or modulus mismatch");
            c.expect(verify(cert).ok, tag + ": record");
            int sampled = 0;
            for (long bp = 1; bp <= 500 && sampled < 5; ++bp) {
                if (!printed.covers(Integer(bp)) || bp == cert.b) {
                    continue;
                }
                const auto mem = family_member(printed, Integer(bp));
                c.expect(mem.has_value(), tag + ": no witness at b'=" + std::to_string(bp));
                if (!mem) {
                    continue;
                }
                const auto om = oracle::evaluate(mem->q, mem->m);
                const auto on = oracle::evaluate(mem->q, mem->n);
                c.expect(om.path && on.path && om.value == on.value && om.weight_sq != on.weight_sq,
                         tag + ": witness fails at b'=" + std::to_string(bp));
                if (mem->loop) {
                    c.expect(is_loop(mem->q, *mem->loop) && !mem->loop_weight.is_one(), tag + ": loop");
                }
                ++sampled;
            }
            c.expect(sampled == 5, tag + ": fewer than 5 samples");
        }
    });

    criterion(8, "scan a <= 6, b <= 20, q < 1 certifies every q", 1200.0, [](Check& c) {
        const fs::path dir = fs::temp_directory_path() / ("cfloops_acceptance_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
        const fs::path file = dir / "store.jsonl";
        ScanOptions opts;
        opts.a_max = 6;
        opts.b_max = 20;
        opts.q_max = R(1);
        opts.resume = false;
        ScanSummary sum;
        {
            Store store(file);
            Ledger ledger(ledger_path(file));
            sum = scan(opts, store, ledger, [&](const Rational& q, const LedgerEntry& e) {
                c.expect(e.status == "certified", q.str() + " open");
            });
        }
        c.expect(sum.eligible == scan_range(6, 20, R(1)).size(), "eligible count");
        c.expect(sum.certified == sum.eligible, std::to_string(sum.open) + " open");
        for (const auto& v : verify_all(read_certificates(file))) {
            c.expect(v.ok, "stored record: " + v.message);
        }
        std::printf("     %zu eligible, %zu certified\n", sum.eligible, sum.certified);
        fs::remove_all(dir);
    });

    criterion(9, "alternating vector: |q^-(k-1) P_{2k-1}| < 1e-9 at 4cos^2(pi l/(2k+1)), k <= 10; binomial identity n <= 40", 60.0,
              [](Check& c) {
                  double worst = 0;
                  double worst_raw = 0;
                  for (long k = 1; k <= 10; ++k) {
                      for (long ell = 1; ell < 2 * k + 1; ++ell) {
                          if (std::gcd(ell, 2 * k + 1) != 1) {
                              continue;
                          }
                          const HeckeLoop h = hecke_loop(k, ell);
                          worst = std::max(worst, h.normalized_residual);
                          worst_raw = std::max(worst_raw, h.raw_residual);
                          c.expect(h.normalized_residual < 1e-9,
                                   "k=" + std::to_string(k) + " l=" + std::to_string(ell));
                      }
                  }
                  for (long n = 0; n <= 40; ++n) {
                      for (long m = 0; 2 * m <= n; ++m) {
                          c.expect(alt_binomial_identity(n, m), "n=" + std::to_string(n));
                      }
                  }
                  // The raw value is reported, not asserted: rounding q alone
                  // moves P_{2k-1} by more than 1e-9 once q^{k-1} is large.
                  std::printf("     worst |q^-(k-1) P| %.3g, worst raw |P| %.3g\n", worst, worst_raw);
              });

    criterion(10, "property suites", 300.0, [](Check& c) {
        std::mt19937_64 rng(10);
        // Group laws.
        for (int i = 0; i < 2000; ++i) {
            const Path x = oracle::random_path(rng, 4, 5), y = oracle::random_path(rng, 4, 5),
                       z = oracle::random_path(rng, 4, 5);
            c.expect(compose(compose(x, y), z) == compose(x, compose(y, z)), "associativity");
            c.expect(zero_skip(compose(x, inverse(x))) == Path{0}, "inverse");
        }
        // Zero-skip, loop difference and rescaling on random paths.
        int diffs = 0;
        for (int i = 0; i < 20000; ++i) {
            const Rational q = oracle::random_q(rng, 9, 5);
            const Path m = oracle::random_path(rng, 6, 3, true);
            const auto om = oracle::evaluate(q, m);
            if (!om.path) {
                continue;
            }
            const auto os = oracle::evaluate(q, zero_skip(m));
            c.expect(os.path && os.value == om.value && os.weight_sq == om.weight_sq, "zero skip " + m.str());
            const Path n = oracle::random_path(rng, 4, 3);
            const auto on = oracle::evaluate(q, n);
            if (is_proper(m) && on.path && (om.value - on.value).is_integer()) {
                std::vector<Integer> e = n.entries();
                e.back() += (om.value - on.value).numerator();
                const Path n2(e);
                if (is_proper(n2) && is_path(q, n2)) {
                    const Path u = loop_difference(q, m, n2);
                    c.expect(is_loop(q, u) && zero_skip(compose(u, n2)) == m, "loop difference");
                    // w(u n2) = w(u) w(n2) and c(u n2) = c(n2) = c(m).
                    const auto oun = oracle::evaluate(q, compose(u, n2));
                    if (oun.path) {
                        c.expect(oun.value == om.value &&
                                     oun.weight_sq == weight_sq(q, u).value * weight_sq(q, n2).value,
                                 "homomorphism");
                    }
                    ++diffs;
                }
            }
            if (zero_free(m)) {
                const RescaledLoop r = rescale_loop(q, m, R(2), R(3));
                const RescaledLoop back = rescale_loop(r.q, r.path, R(1, 2), R(1, 3));
                c.expect(back.q == q && back.path == m, "rescale round trip");
            }
        }
        c.expect(diffs > 100, "too few loop differences");
        // No proper loops for q >= 4; no odd loops when a > 1.
        for (const Rational& q : {R(4), R(9, 2), R(13, 3), R(6)}) {
            for (const auto& l : brute_force_enum(q, 4, 6).loops_found) {
                c.expect(!is_proper(l.path), q.str() + " proper loop " + l.path.str());
            }
        }
        for (const Rational& q : {R(2, 3), R(3, 2), R(5, 4), R(7, 3), R(2, 5)}) {
            for (const auto& l : brute_force_enum(q, 5, 4).loops_found) {
                c.expect(l.path.length() % 2 == 0, q.str() + " odd loop " + l.path.str());
            }
        }
    });

    std::printf("%d failure(s)\n", failures);
    return failures == 0 ? 0 : 1;
}
