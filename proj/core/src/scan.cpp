#include "cfloops/scan.hpp"

#include "cfloops/family.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace cfloops {

FamilyCertificate unit_seed_family(const Integer& a) {
    return family_from_pair(Rational(a, Integer(1)), Path{-1, 0, 2}, Path{1});
}

namespace {

bool accept(CertifyResult& res, Store& store, Certificate cert) {
    res.certified = res.certified || cert.kind != "family";
    if (res.method.empty() && cert.kind != "family") {
        res.method = cert.method;
    }
    if (store.append(cert)) {
        res.records.push_back(std::move(cert));
    }
    return true;
}

// A loop of weight != 1 found at q also covers a residue class of b.
void add_derived_family(CertifyResult& res, Store& store, const Rational& q, const Path& loop) {
    try {
        auto fam = family_from_pair(q, loop, Path());
        accept(res, store, family_certificate(fam, "derived"));
    } catch (const std::invalid_argument&) {
    }
}

bool found_loop(CertifyResult& res, Store& store, const Rational& q, const SearchOutcome& out,
                const std::string& method) {
    const FoundLoop* hit = nullptr;
    for (const auto& l : out.loops_found) {
        if (l.weight.is_one() || !is_proper(l.path)) {
            continue;
        }
        if (hit == nullptr || l.path.size() < hit->path.size()) {
            hit = &l;
        }
    }
    if (hit == nullptr) {
        return false;
    }
    Certificate cert = loop_certificate(q, canonical_loop(hit->path), method);
    if (res.exhaustive_upto) {
        cert.exhaustive_upto = res.exhaustive_upto;
    }
    accept(res, store, cert);
    add_derived_family(res, store, q, cert.path);
    return true;
}

}  // namespace

CertifyResult certify(const Rational& q, Store& store, const CertifyOptions& opts) {
    require_positive(q);
    CertifyResult res;
    const Integer a = q.numerator();
    const Integer b = q.denominator();
    const auto& m = opts.methods;

    if (m.count(1) != 0) {
        SearchOutcome closed = length1_loops(q);
        closed.merge(length2_loops(q));
        if (found_loop(res, store, q, closed, "1")) {
            return res;
        }
    }

    if (m.count(2) != 0) {
        std::vector<FamilyCertificate> fams = store.families_for(a);
        if (a >= 3) {
            fams.insert(fams.begin(), unit_seed_family(a));
        }
        for (const auto& fam : fams) {
            if (!fam.covers(b) || fam.base_q == q) {
                continue;
            }
            auto member = family_member(fam, b);
            if (!member || !member->loop || member->loop_weight.is_one()) {
                continue;
            }
            accept(res, store, family_certificate(fam, fam.base_q.denominator() == 1 ? "seed" : "derived"));
            Certificate cert = loop_certificate(q, canonical_loop(*member->loop), "2");
            cert.base_a = fam.a;
            cert.base_b = fam.base_q.denominator();
            accept(res, store, cert);
            return res;
        }
    }

    if (m.count(3) != 0) {
        SearchBudget budget = opts.budget;
        long clean = 0;
        for (std::size_t k = 1; k <= budget.max_length; ++k) {
            SearchOutcome out = diophantine_search(a, b, k, budget);
            res.notes.insert(res.notes.end(), out.notes.begin(), out.notes.end());
            if (found_loop(res, store, q, out, "3")) {
                return res;
            }
            if (out.exhaustive && clean == static_cast<long>(k) - 1) {
                clean = static_cast<long>(k);
                res.exhaustive_upto = clean;
            }
        }
    }

    if (m.count(4) != 0) {
        SearchBudget budget = opts.budget;
        budget.stop_at_first = true;
        SearchOutcome out = heuristic_search(q, budget);
        res.notes.insert(res.notes.end(), out.notes.begin(), out.notes.end());
        if (found_loop(res, store, q, out, "4")) {
            return res;
        }
    }

    if (opts.derivations) {
        // q = q0 / n with an odd-length loop at q0.
        for (long n = 2; n <= 64; ++n) {
            const Rational q0 = q * Rational(n);
            if (q0 >= Rational(4)) {
                break;
            }
            for (const auto* c : store.loops_for(q0)) {
                if (c->path.length() % 2 == 0) {
                    continue;
                }
                const auto w = odd_by_n_witness(q0, c->path, n);
                if (!w.witness.weight.is_one() && is_proper(w.witness.path)) {
                    Certificate cert = loop_certificate(q, canonical_loop(w.witness.path), "derived");
                    cert.base_a = q0.numerator();
                    cert.base_b = q0.denominator();
                    cert.n = n;
                    accept(res, store, cert);
                    return res;
                }
            }
        }
        for (long n = 2; n <= 64; ++n) {
            const Rational q0 = q * Rational(n);
            if (q0 >= Rational(4)) {
                break;
            }
            if (!store.loops_for(q0).empty()) {
                accept(res, store, closure_certificate(q0, n));
                return res;
            }
        }
    }
    return res;
}

std::vector<Rational> scan_range(long a_max, long b_max, const Rational& q_max) {
    const Rational cap = std::min(q_max, Rational(4));
    std::vector<Rational> out;
    for (long a = 1; a <= a_max; ++a) {
        for (long b = 1; b <= b_max; ++b) {
            if (std::gcd(a, b) != 1) {
                continue;
            }
            const Rational q(a, b);
            if (q < cap) {
                out.push_back(q);
            }
        }
    }
    return out;
}

ScanSummary scan(const ScanOptions& opts, Store& store, Ledger& ledger,
                 const std::function<void(const Rational&, const LedgerEntry&)>& progress) {
    if (opts.a_max < 1 || opts.b_max < 1 || opts.q_max.sign() <= 0) {
        throw std::invalid_argument("scan bounds must be positive");
    }
    ScanSummary sum;
    CertifyOptions copts = opts.certify;
    copts.budget.max_length = std::min(copts.budget.max_length, copts.scan_max_length);
    for (const auto& q : scan_range(opts.a_max, opts.b_max, opts.q_max)) {
        ++sum.eligible;
        if (const auto* e = ledger.find(q); opts.resume && e != nullptr) {
            ++sum.skipped;
            ++(e->status == "certified" ? sum.certified : sum.open);
            continue;
        }
        LedgerEntry entry;
        if (const Certificate* c = store.best_loop(q)) {
            entry = {"certified", c->method, c->exhaustive_upto};
        } else {
            const CertifyResult r = certify(q, store, copts);
            entry = {r.certified ? "certified" : "open", r.method, r.exhaustive_upto};
            for (const auto& rec : r.records) {
                if (rec.kind == "family") {
                    ledger.record_family(to_family(rec));
                }
            }
        }
        ++(entry.status == "certified" ? sum.certified : sum.open);
        ledger.record(q, entry);
        ledger.save();
        if (progress) {
            progress(q, entry);
        }
    }
    return sum;
}

std::string format_table1(const Store& store) {
    std::ostringstream os;
    os << std::left << std::setw(8) << "q" << "  " << std::setw(60) << "m" << "  " << "w_q(m)" << '\n';
    for (long b = 2; b <= 4; ++b) {
        for (long a = 1; a < 4 * b; ++a) {
            if (std::gcd(a, b) != 1) {
                continue;
            }
            const Rational q(a, b);
            os << std::setw(8) << q.str() << "  ";
            if (const Certificate* c = store.best_loop(q)) {
                os << std::setw(60) << c->path.str() << "  " << WeightSq{c->weight_sq, false}.display() << '\n';
            } else {
                os << std::setw(60) << "OPEN" << "  -" << '\n';
            }
        }
    }
    return os.str();
}

std::string format_table2(const Store& store) {
    std::vector<const Certificate*> fams;
    for (const auto& c : store.records()) {
        if (c.kind == "family") {
            fams.push_back(&c);
        }
    }
    std::sort(fams.begin(), fams.end(), [](const Certificate* x, const Certificate* y) {
        if (x->a != y->a) {
            return x->a < y->a;
        }
        if (x->b != y->b) {
            return x->b < y->b;
        }
        return *x->modulus < *y->modulus;
    });
    std::ostringstream os;
    os << std::left << std::setw(4) << "a" << std::setw(5) << "b" << std::setw(6) << "N" << std::setw(7) << "b''"
       << std::setw(30) << "m" << "n" << '\n';
    for (const auto* c : fams) {
        os << std::setw(4) << c->a.get_str() << std::setw(5) << c->b.get_str() << std::setw(6)
           << c->modulus->get_str() << std::setw(7) << (c->exception ? c->exception->get_str() : "none")
           << std::setw(30) << c->path.str() << c->path2->str() << '\n';
    }
    if (fams.empty()) {
        os << "(no families)\n";
    }
    return os.str();
}

}  // namespace cfloops
