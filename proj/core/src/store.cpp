#include "cfloops/store.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace cfloops {

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<Certificate> parse_lines(const std::string& text, const fs::path& file) {
    std::vector<Certificate> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(parse_certificate(line));
        } catch (const ParseError& e) {
            throw ParseError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw ParseError(file.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

std::vector<Certificate> read_certificates(const fs::path& file) {
    if (!fs::exists(file)) {
        throw ParseError(file.string() + ": no such file");
    }
    return parse_lines(slurp(file), file);
}

Store::Store(fs::path file) : file_(std::move(file)) {
    if (!fs::exists(file_)) {
        return;
    }
    std::string text = slurp(file_);
    if (!text.empty() && text.back() != '\n') {
        const auto cut = text.rfind('\n');
        const std::size_t start = cut == std::string::npos ? 0 : cut + 1;
        bool complete = true;
        try {
            parse_certificate(text.substr(start));
        } catch (const std::exception&) {
            complete = false;
        }
        if (complete) {
            // Only the newline is missing.
            text += '\n';
            std::ofstream(file_, std::ios::app | std::ios::binary) << '\n';
        } else {
            text.resize(start);
            fs::resize_file(file_, text.size());
        }
    }
    for (auto& c : parse_lines(text, file_)) {
        if (keys_.insert(c.key()).second) {
            records_.push_back(std::move(c));
        }
    }
}

bool Store::append(const Certificate& cert) {
    if (!keys_.insert(cert.key()).second) {
        return false;
    }
    if (file_.has_parent_path()) {
        fs::create_directories(file_.parent_path());
    }
    std::ofstream out(file_, std::ios::app | std::ios::binary);
    out << to_json_line(cert) << '\n';
    out.flush();
    if (!out) {
        throw std::runtime_error("cannot write " + file_.string());
    }
    records_.push_back(cert);
    return true;
}

std::vector<const Certificate*> Store::loops_for(const Rational& q) const {
    std::vector<const Certificate*> out;
    for (const auto& c : records_) {
        if (c.kind == "loop" && c.a == q.numerator() && c.b == q.denominator()) {
            out.push_back(&c);
        }
    }
    return out;
}

std::vector<FamilyCertificate> Store::families_for(const Integer& a) const {
    std::vector<FamilyCertificate> out;
    for (const auto& c : records_) {
        if (c.kind == "family" && c.a == a) {
            out.push_back(to_family(c));
        }
    }
    return out;
}

const Certificate* Store::best_loop(const Rational& q) const {
    const Certificate* best = nullptr;
    for (const auto* c : loops_for(q)) {
        if (best == nullptr || c->path.size() < best->path.size() ||
            (c->path.size() == best->path.size() && c->path < best->path)) {
            best = c;
        }
    }
    return best;
}

Ledger::Ledger(fs::path file) : file_(std::move(file)) {
    if (!fs::exists(file_)) {
        return;
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(slurp(file_));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(file_.string() + ": " + e.what());
    }
    const nlohmann::json entries = j.value("entries", nlohmann::json::object());
    const nlohmann::json families = j.value("families", nlohmann::json::object());
    for (const auto& [key, v] : entries.items()) {
        LedgerEntry e;
        e.status = v.value("status", "open");
        e.method = v.value("method", "");
        if (v.contains("exhaustive_upto") && v["exhaustive_upto"].is_number_integer()) {
            e.exhaustive_upto = v["exhaustive_upto"].get<long>();
        }
        entries_[key] = e;
    }
    for (const auto& [a, list] : families.items()) {
        for (const auto& s : list) {
            families_[a].insert(s.get<std::string>());
        }
    }
}

const LedgerEntry* Ledger::find(const Rational& q) const {
    auto it = entries_.find(q.str());
    return it == entries_.end() ? nullptr : &it->second;
}

void Ledger::record(const Rational& q, LedgerEntry entry) { entries_[q.str()] = std::move(entry); }

void Ledger::record_family(const FamilyCertificate& fam) {
    std::string s = "+-" + fam.residue.get_str() + " mod " + fam.modulus.get_str();
    if (fam.exception) {
        s += " except " + fam.exception->get_str();
    }
    families_[fam.a.get_str()].insert(s);
}

std::string Ledger::dump() const {
    nlohmann::ordered_json j;
    j["version"] = kToolVersion;
    nlohmann::ordered_json entries = nlohmann::ordered_json::object();
    for (const auto& [key, e] : entries_) {
        nlohmann::ordered_json v;
        v["status"] = e.status;
        v["method"] = e.method;
        if (e.exhaustive_upto) {
            v["exhaustive_upto"] = *e.exhaustive_upto;
        }
        entries[key] = v;
    }
    j["entries"] = entries;
    nlohmann::ordered_json fams = nlohmann::ordered_json::object();
    for (const auto& [a, set] : families_) {
        fams[a] = std::vector<std::string>(set.begin(), set.end());
    }
    j["families"] = fams;
    return j.dump(1);
}

void Ledger::save() const {
    const fs::path tmp = file_.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
        out << dump() << '\n';
        out.flush();
        if (!out) {
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    fs::rename(tmp, file_);
}

fs::path default_store_path() {
    if (const char* env = std::getenv("CFLOOPS_STORE"); env != nullptr && *env != '\0') {
        return env;
    }
    return "cfloops-store.jsonl";
}

fs::path ledger_path(const fs::path& store) { return store.string() + ".ledger"; }

}  // namespace cfloops
