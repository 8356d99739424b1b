#pragma once

// Append-only certificate store (JSON Lines) and the scan ledger.

#include "cfloops/certificate.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cfloops {

/// Reads every record of a JSON Lines file. Blank lines are skipped. Throws
/// ParseError naming the line on the first malformed record.
std::vector<Certificate> read_certificates(const std::filesystem::path& file);

class Store {
public:
    /// Loads `file` if it exists. A torn final line (no trailing newline, as
    /// left by a killed writer) is cut off; any other malformed line throws.
    explicit Store(std::filesystem::path file);

    const std::filesystem::path& file() const { return file_; }
    const std::vector<Certificate>& records() const { return records_; }

    /// Appends and flushes; returns false for a duplicate.
    bool append(const Certificate& cert);

    std::vector<const Certificate*> loops_for(const Rational& q) const;
    std::vector<FamilyCertificate> families_for(const Integer& a) const;

    /// Shortest loop certificate for q, if any.
    const Certificate* best_loop(const Rational& q) const;

private:
    std::filesystem::path file_;
    std::vector<Certificate> records_;
    std::set<std::string> keys_;
};

struct LedgerEntry {
    std::string status;  // "certified" or "open"
    std::string method;
    std::optional<long> exhaustive_upto;

    friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Scan progress, keyed by "a/b". Saved atomically (write then rename).
class Ledger {
public:
    explicit Ledger(std::filesystem::path file);

    const std::filesystem::path& file() const { return file_; }
    const std::map<std::string, LedgerEntry>& entries() const { return entries_; }
    /// Residue classes "+-r mod N" known per a, with pending exceptions.
    const std::map<std::string, std::set<std::string>>& families() const { return families_; }

    const LedgerEntry* find(const Rational& q) const;
    void record(const Rational& q, LedgerEntry entry);
    void record_family(const FamilyCertificate& fam);
    void save() const;

    /// The ledger as JSON text (what save writes).
    std::string dump() const;

private:
    std::filesystem::path file_;
    std::map<std::string, LedgerEntry> entries_;
    std::map<std::string, std::set<std::string>> families_;
};

/// CFLOOPS_STORE if set, else "cfloops-store.jsonl".
std::filesystem::path default_store_path();

/// The ledger belonging to a store: the same path with ".ledger" appended.
std::filesystem::path ledger_path(const std::filesystem::path& store);

}  // namespace cfloops
