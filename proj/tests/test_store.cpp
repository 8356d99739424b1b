#include "cfloops/certificate.hpp"
#include "cfloops/scan.hpp"
#include "cfloops/store.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace cfloops;
namespace fs = std::filesystem;

namespace {

Rational R(long p, long q = 1) { return Rational(Integer(p), Integer(q)); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class StoreTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("cfloops_store_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
                std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        ::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    }
    void TearDown() override {
        fs::remove_all(dir_);
        ::unsetenv("SOURCE_DATE_EPOCH");
    }
    fs::path dir_;
};

}  // namespace

TEST_F(StoreTest, RoundTripAllKinds) {
    std::vector<Certificate> certs = {
        loop_certificate(R(2, 3), Path{1, -1, -3}, "1"),
        family_certificate(family_from_pair(R(5, 3), Path{-1, 1, -1, -1, -3}, Path{0}), "fixture"),
        closure_certificate(R(2, 3), 2),
    };
    Certificate bounded = loop_certificate(R(1, 2), Path{1, -2}, "1");
    bounded.exhaustive_upto = 3;
    certs.push_back(bounded);
    for (const auto& c : certs) {
        const std::string line = to_json_line(c);
        EXPECT_EQ(line.find('\n'), std::string::npos);
        const Certificate back = parse_certificate(line);
        EXPECT_EQ(to_json_line(back), line);
        EXPECT_TRUE(verify(back).ok) << line << ": " << verify(back).message;
    }
    EXPECT_EQ(certs[0].timestamp, "2023-11-14T22:13:20Z");
    const std::string fam = to_json_line(certs[1]);
    EXPECT_NE(fam.find("\"exception\":null"), std::string::npos) << fam;
    EXPECT_NE(fam.find("\"N\":10"), std::string::npos) << fam;

    // Entries beyond 64 bits go out as strings.
    Certificate huge = certs[0];
    huge.path = Path(std::vector<Integer>{Integer("123456789012345678901234567890"), Integer(1)});
    const std::string hl = to_json_line(huge);
    EXPECT_NE(hl.find("\"123456789012345678901234567890\""), std::string::npos);
    EXPECT_EQ(parse_certificate(hl).path, huge.path);
}

TEST_F(StoreTest, TamperedRecordsFail) {
    Certificate c = loop_certificate(R(2, 3), Path{1, -1, -3}, "1");
    c.weight_sq = R(1, 3);
    EXPECT_FALSE(verify(c).ok);
    c = loop_certificate(R(2, 3), Path{1, -1, -3}, "1");
    c.path = Path{1, -1, -4};
    EXPECT_FALSE(verify(c).ok);
    // Weight 1 loops are not witnesses.
    EXPECT_FALSE(verify(loop_certificate(R(2), Path{1, -1, 1}, "1")).ok);
    // Non-reduced q.
    c = loop_certificate(R(2, 3), Path{1, -1, -3}, "1");
    c.a = 4;
    c.b = 6;
    EXPECT_FALSE(verify(c).ok);

    Certificate f = family_certificate(family_from_pair(R(5, 3), Path{-1, 1, -1, -1, -3}, Path{0}), "fixture");
    Certificate g = f;
    g.modulus = Integer(7);
    EXPECT_FALSE(verify(g).ok);
    g = f;
    g.weight_sq = R(1, 8);
    EXPECT_FALSE(verify(g).ok);

    // Closure needs a certified base.
    const Certificate cl = closure_certificate(R(2, 3), 3);
    EXPECT_TRUE(verify(cl).ok);
    EXPECT_FALSE(verify_all({cl})[0].ok);
    const auto v = verify_all({loop_certificate(R(2, 3), Path{1, -1, -3}, "1"), cl});
    EXPECT_TRUE(v[0].ok && v[1].ok);
    Certificate wrong = cl;
    wrong.n = 4;
    EXPECT_FALSE(verify(wrong).ok);
}

TEST_F(StoreTest, MalformedInputIsAParseError) {
    EXPECT_THROW(parse_certificate("{"), ParseError);
    EXPECT_THROW(parse_certificate("[1,2]"), ParseError);
    EXPECT_THROW(parse_certificate(R"({"kind":"loop","a":2,"b":3})"), ParseError);
    EXPECT_THROW(parse_certificate(R"({"kind":"wat","a":2,"b":3,"path":[1],"weight_sq_num":1,"weight_sq_den":1,"method":"1"})"),
                 ParseError);
    EXPECT_THROW(parse_certificate(R"({"kind":"loop","a":2,"b":3,"path":[1,"x"],"weight_sq_num":1,"weight_sq_den":1,"method":"1"})"),
                 ParseError);
    EXPECT_THROW(parse_certificate(R"({"kind":"loop","a":2,"b":3,"path":[1],"weight_sq_num":1,"weight_sq_den":0,"method":"1"})"),
                 ParseError);
    EXPECT_THROW(parse_certificate(R"({"kind":"family","a":2,"b":3,"path":[1],"weight_sq_num":1,"weight_sq_den":1,"method":"1"})"),
                 ParseError);

    const fs::path file = dir_ / "bad.jsonl";
    std::ofstream(file) << to_json_line(loop_certificate(R(2, 3), Path{1, -1, -3}, "1")) << "\nnot json\n";
    try {
        read_certificates(file);
        FAIL() << "expected a parse error";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
    }
    EXPECT_THROW(Store{file}, ParseError);
}

TEST_F(StoreTest, AppendDedupAndTornLine) {
    const fs::path file = dir_ / "s.jsonl";
    {
        Store s(file);
        EXPECT_TRUE(s.append(loop_certificate(R(2, 3), Path{1, -1, -3}, "1")));
        EXPECT_FALSE(s.append(loop_certificate(R(2, 3), Path{1, -1, -3}, "3")));
        EXPECT_TRUE(s.append(loop_certificate(R(2, 3), Path{3, 1, -1}, "1")));
    }
    const std::string good = slurp(file);
    // A writer killed mid-record.
    std::ofstream(file, std::ios::app) << R"({"kind":"loop","a":5,"b":)";
    {
        Store s(file);
        EXPECT_EQ(s.records().size(), 2U);
        EXPECT_EQ(s.best_loop(R(2, 3))->path, (Path{1, -1, -3}));
        EXPECT_EQ(s.best_loop(R(5, 3)), nullptr);
    }
    EXPECT_EQ(slurp(file), good);
    // A complete last record that only lacks its newline is kept.
    std::ofstream(file, std::ios::app) << to_json_line(loop_certificate(R(1, 2), Path{1, -2}, "1"));
    {
        Store s(file);
        EXPECT_EQ(s.records().size(), 3U);
    }
    EXPECT_EQ(slurp(file).back(), '\n');
    // Duplicates already in the file are ignored on load.
    std::ofstream(file, std::ios::app) << to_json_line(loop_certificate(R(1, 2), Path{1, -2}, "1")) << '\n';
    EXPECT_EQ(Store(file).records().size(), 3U);
}

TEST_F(StoreTest, ScanResumeReproducesLedger) {
    ScanOptions opts;
    opts.a_max = 3;
    opts.b_max = 7;
    opts.q_max = R(1);

    const fs::path full_store = dir_ / "full.jsonl";
    {
        Store store(full_store);
        Ledger ledger(ledger_path(full_store));
        const ScanSummary s = scan(opts, store, ledger);
        EXPECT_EQ(s.eligible, scan_range(3, 7, R(1)).size());
        EXPECT_EQ(s.certified, s.eligible);
        EXPECT_EQ(s.open, 0U);
    }

    // Interrupted run: the first pass stops at a smaller range.
    const fs::path part_store = dir_ / "part.jsonl";
    {
        Store store(part_store);
        Ledger ledger(ledger_path(part_store));
        ScanOptions first = opts;
        first.a_max = 2;
        scan(first, store, ledger);
    }
    {
        Store store(part_store);
        Ledger ledger(ledger_path(part_store));
        const ScanSummary s = scan(opts, store, ledger);
        EXPECT_GT(s.skipped, 0U);
    }
    EXPECT_EQ(slurp(ledger_path(part_store)), slurp(ledger_path(full_store)));
    // Every stored record verifies.
    for (const auto& v : verify_all(read_certificates(part_store))) {
        EXPECT_TRUE(v.ok) << v.message;
    }

    // Same options twice give byte-identical stores.
    const fs::path again = dir_ / "again.jsonl";
    {
        Store store(again);
        Ledger ledger(ledger_path(again));
        scan(opts, store, ledger);
    }
    EXPECT_EQ(slurp(again), slurp(full_store));
    EXPECT_EQ(slurp(ledger_path(again)), slurp(ledger_path(full_store)));
}

TEST_F(StoreTest, LedgerSurvivesReload) {
    const fs::path file = dir_ / "x.ledger";
    Ledger l(file);
    l.record(R(2, 3), {"certified", "1", std::nullopt});
    l.record(R(7, 2), {"open", "3", 6});
    l.record_family(unit_seed_family(Integer(5)));
    l.save();
    EXPECT_FALSE(fs::exists(file.string() + ".tmp"));
    Ledger back(file);
    EXPECT_EQ(back.entries(), l.entries());
    EXPECT_EQ(back.families(), l.families());
    EXPECT_EQ(back.dump(), l.dump());
    EXPECT_EQ(back.find(R(7, 2))->exhaustive_upto, 6);
}

TEST(StorePath, EnvironmentDefault) {
    ::setenv("CFLOOPS_STORE", "/tmp/elsewhere.jsonl", 1);
    EXPECT_EQ(default_store_path(), fs::path("/tmp/elsewhere.jsonl"));
    ::unsetenv("CFLOOPS_STORE");
    EXPECT_EQ(default_store_path(), fs::path("cfloops-store.jsonl"));
    EXPECT_EQ(ledger_path("a/b.jsonl"), fs::path("a/b.jsonl.ledger"));
}
