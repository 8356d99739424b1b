// cfloops: search, certify and verify loops of weight != 1.
//
//   cfloops verify FILE...
//   cfloops search --a A --b B [--method 1|2|3|4] [--max-length K] ...
//   cfloops scan --a-max A --b-max B [--q-max Q] [--resume|--no-resume]
//   cfloops table 1|2
//
// Exit status: 0 success, 1 a certificate failed to verify, 2 bad input.

#include "cfloops/certificate.hpp"
#include "cfloops/scan.hpp"
#include "cfloops/store.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <numeric>

namespace {

using namespace cfloops;

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kBadInput = 2;

struct BudgetFlags {
    std::size_t max_length = 6;
    long entry_bound = 8;
    std::size_t beam = 100000;
    std::string value_bound = "2";
    std::size_t heuristic_length = 40;
    unsigned threads = 1;
    std::uint64_t node_limit = 200'000'000;
    double time_limit = 0;

    void attach(CLI::App* app) {
        app->add_option("--max-length", max_length, "Longest loop for the Diophantine solver")->check(CLI::PositiveNumber);
        app->add_option("--entry-bound", entry_bound, "Entry window for unbounded solution families")
            ->check(CLI::PositiveNumber);
        app->add_option("--beam", beam, "Heuristic beam capacity")->check(CLI::PositiveNumber);
        app->add_option("--value-bound", value_bound, "Heuristic bound C on |c(q, m)|");
        app->add_option("--heuristic-length", heuristic_length, "Heuristic generations")->check(CLI::PositiveNumber);
        app->add_option("--threads", threads, "Solver threads")->check(CLI::PositiveNumber);
        app->add_option("--node-limit", node_limit, "Solver node limit per length")->check(CLI::PositiveNumber);
        app->add_option("--time-limit", time_limit, "Seconds per search call, 0 for none")->check(CLI::NonNegativeNumber);
    }

    SearchBudget budget() const {
        SearchBudget b;
        b.max_length = max_length;
        b.entry_bound = entry_bound;
        b.beam_capacity = beam;
        b.value_bound = Rational::parse(value_bound);
        if (b.value_bound.sign() <= 0) {
            throw std::invalid_argument("--value-bound must be positive");
        }
        b.heuristic_length = heuristic_length;
        b.threads = threads;
        b.node_limit = node_limit;
        b.time_limit = std::chrono::milliseconds(static_cast<long long>(time_limit * 1000));
        return b;
    }
};

int run_verify(const std::vector<std::string>& files) {
    std::vector<Certificate> certs;
    std::vector<std::string> origin;
    for (const auto& f : files) {
        try {
            auto part = read_certificates(f);
            for (auto& c : part) {
                certs.push_back(std::move(c));
                origin.push_back(f);
            }
        } catch (const ParseError& e) {
            std::cerr << "parse error: " << e.what() << '\n';
            return kBadInput;
        }
    }
    const auto verdicts = verify_all(certs);
    int failed = 0;
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const auto& c = certs[i];
        std::cout << (verdicts[i].ok ? "OK   " : "FAIL ") << c.kind << ' ' << c.q().str() << ' ' << c.path.str()
                  << ": " << verdicts[i].message << '\n';
        failed += verdicts[i].ok ? 0 : 1;
    }
    std::cout << certs.size() - failed << '/' << certs.size() << " certificates verified\n";
    return failed == 0 ? kOk : kVerifyFailed;
}

int run_search(long a, long b, int method, const BudgetFlags& flags, const std::string& store_file) {
    if (a < 1 || b < 1 || std::gcd(a, b) != 1) {
        std::cerr << "search needs coprime positive --a and --b\n";
        return kBadInput;
    }
    const Rational q(a, b);
    CertifyOptions opts;
    opts.budget = flags.budget();
    if (method != 0) {
        opts.methods = {method};
        opts.derivations = false;
    }
    Store store(store_file);
    const CertifyResult r = certify(q, store, opts);
    for (const auto& note : r.notes) {
        std::cout << "note: " << note << '\n';
    }
    for (const auto& rec : r.records) {
        std::cout << "stored: " << to_json_line(rec) << '\n';
    }
    if (r.certified) {
        for (const auto& rec : r.records) {
            if (rec.kind != "family") {
                std::cout << "q=" << q.str() << " certified by method " << rec.method << ": " << rec.path.str()
                          << " weight^2 " << rec.weight_sq.str() << '\n';
                break;
            }
        }
    } else if (r.exhaustive_upto) {
        std::cout << "q=" << q.str() << " open: no weight!=1 loop, lengths <= " << *r.exhaustive_upto
                  << ", exhaustive\n";
    } else {
        std::cout << "q=" << q.str() << " open: nothing found within budget\n";
    }
    return kOk;
}

int run_scan(long a_max, long b_max, const std::string& q_max, bool resume, const BudgetFlags& flags,
             std::size_t scan_length, const std::string& store_file) {
    ScanOptions opts;
    opts.a_max = a_max;
    opts.b_max = b_max;
    opts.q_max = Rational::parse(q_max);
    opts.resume = resume;
    opts.certify.budget = flags.budget();
    opts.certify.scan_max_length = scan_length;
    Store store(store_file);
    Ledger ledger(ledger_path(store_file));
    const auto sum = scan(opts, store, ledger, [](const Rational& q, const LedgerEntry& e) {
        std::cout << q.str() << ' ' << e.status << (e.method.empty() ? "" : " method " + e.method) << '\n';
    });
    std::cout << "eligible " << sum.eligible << ", certified " << sum.certified << ", open " << sum.open
              << ", resumed " << sum.skipped << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loops of weight != 1 for continued fractions with parameter q"};
    app.require_subcommand(1);
    std::string store_file = cfloops::default_store_path().string();
    app.add_option("--store", store_file, "Certificate store (JSON Lines); default $CFLOOPS_STORE")
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Re-verify certificate files");
    std::vector<std::string> files;
    verify->add_option("files", files, "Certificate files")->required();

    auto* search = app.add_subcommand("search", "Search one q = a/b and store what is found");
    long a = 0;
    long b = 0;
    int method = 0;
    search->add_option("--a", a, "Numerator")->required();
    search->add_option("--b", b, "Denominator")->required();
    search->add_option("--method", method, "Only this method (1-4); default escalates 1, 2, 3, 4")
        ->check(CLI::Range(1, 4));
    BudgetFlags search_flags;
    search_flags.attach(search);
    search->add_option("--store", store_file, "Certificate store");

    auto* scan = app.add_subcommand("scan", "Certify every reduced q in a range");
    long a_max = 0;
    long b_max = 0;
    std::string q_max = "4";
    bool resume = true;
    std::size_t scan_length = 4;
    scan->add_option("--a-max", a_max, "Largest numerator")->required()->check(CLI::PositiveNumber);
    scan->add_option("--b-max", b_max, "Largest denominator")->required()->check(CLI::PositiveNumber);
    scan->add_option("--q-max", q_max, "Only q below this (capped at 4)");
    scan->add_flag("--resume,!--no-resume", resume, "Skip q already in the ledger");
    scan->add_option("--scan-length", scan_length, "Diophantine length limit inside the scan")
        ->check(CLI::PositiveNumber);
    BudgetFlags scan_flags;
    scan_flags.attach(scan);
    scan->add_option("--store", store_file, "Certificate store");

    auto* table = app.add_subcommand("table", "Print table 1 (loops) or table 2 (families) from the store");
    int which = 1;
    table->add_option("which", which, "1 or 2")->required()->check(CLI::IsMember({1, 2}));
    table->add_option("--store", store_file, "Certificate store");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kBadInput;
    }

    try {
        if (verify->parsed()) {
            return run_verify(files);
        }
        if (search->parsed()) {
            return run_search(a, b, method, search_flags, store_file);
        }
        if (scan->parsed()) {
            return run_scan(a_max, b_max, q_max, resume, scan_flags, scan_length, store_file);
        }
        Store store(store_file);
        std::cout << (which == 1 ? format_table1(store) : format_table2(store));
        return kOk;
    } catch (const cfloops::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
}
