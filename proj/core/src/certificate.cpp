#include "cfloops/certificate.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <map>
#include <set>

namespace cfloops {

using nlohmann::json;

namespace {

json int_json(const Integer& x) {
    if (fits_int64(x)) {
        return json(to_int64(x));
    }
    return json(x.get_str());
}

json path_json(const Path& m) {
    json arr = json::array();
    for (const auto& x : m) {
        arr.push_back(int_json(x));
    }
    return arr;
}

Integer int_from(const json& j, const char* field) {
    if (j.is_number_integer()) {
        return Integer(std::to_string(j.get<std::int64_t>()));
    }
    if (j.is_number_unsigned()) {
        return Integer(std::to_string(j.get<std::uint64_t>()));
    }
    if (j.is_string()) {
        try {
            return parse_integer(j.get<std::string>());
        } catch (const std::invalid_argument&) {
        }
    }
    throw ParseError(std::string("field '") + field + "' is not an integer");
}

Path path_from(const json& j, const char* field) {
    if (!j.is_array() || j.empty()) {
        throw ParseError(std::string("field '") + field + "' is not a non-empty integer array");
    }
    std::vector<Integer> e;
    for (const auto& x : j) {
        e.push_back(int_from(x, field));
    }
    return Path(std::move(e));
}

const json& require(const json& obj, const char* field) {
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) {
        throw ParseError(std::string("missing field '") + field + "'");
    }
    return *it;
}

std::optional<Integer> opt_int(const json& obj, const char* field) {
    auto it = obj.find(field);
    if (it == obj.end() || it->is_null()) {
        return std::nullopt;
    }
    return int_from(*it, field);
}

std::optional<long> opt_long(const json& obj, const char* field) {
    auto v = opt_int(obj, field);
    if (!v) {
        return std::nullopt;
    }
    if (!v->fits_slong_p()) {
        throw ParseError(std::string("field '") + field + "' out of range");
    }
    return v->get_si();
}

}  // namespace

std::string Certificate::key() const {
    std::string k = kind + "|" + a.get_str() + "/" + b.get_str() + "|" + path.str();
    if (path2) {
        k += "|" + path2->str();
    }
    if (modulus) {
        k += "|N" + modulus->get_str();
    }
    if (n) {
        k += "|n" + std::to_string(*n);
    }
    return k;
}

std::string to_json_line(const Certificate& c) {
    // ordered_json keeps the field order stable for diffs.
    nlohmann::ordered_json j;
    j["kind"] = c.kind;
    j["a"] = int_json(c.a);
    j["b"] = int_json(c.b);
    j["path"] = path_json(c.path);
    if (c.path2) {
        j["path2"] = path_json(*c.path2);
    }
    j["weight_sq_num"] = int_json(c.weight_sq.numerator());
    j["weight_sq_den"] = int_json(c.weight_sq.denominator());
    j["weight_display"] = WeightSq{c.weight_sq, false}.display();
    j["method"] = c.method;
    if (c.modulus) {
        j["N"] = int_json(*c.modulus);
    }
    if (c.residue) {
        j["residue"] = int_json(*c.residue);
    }
    if (c.kind == "family") {
        j["exception"] = c.exception ? int_json(*c.exception) : json(nullptr);
    }
    if (c.exhaustive_upto) {
        j["exhaustive_upto"] = *c.exhaustive_upto;
    }
    if (c.base_a) {
        j["base_a"] = int_json(*c.base_a);
    }
    if (c.base_b) {
        j["base_b"] = int_json(*c.base_b);
    }
    if (c.n) {
        j["n"] = *c.n;
    }
    if (!c.timestamp.empty()) {
        j["timestamp"] = c.timestamp;
    }
    j["version"] = c.version;
    return j.dump();
}

Certificate parse_certificate(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ParseError("record is not an object");
    }
    Certificate c;
    const json& kind = require(j, "kind");
    if (!kind.is_string()) {
        throw ParseError("field 'kind' is not a string");
    }
    c.kind = kind.get<std::string>();
    if (c.kind != "loop" && c.kind != "family" && c.kind != "closure") {
        throw ParseError("unknown kind '" + c.kind + "'");
    }
    c.a = int_from(require(j, "a"), "a");
    c.b = int_from(require(j, "b"), "b");
    if (c.b == 0) {
        throw ParseError("field 'b' is zero");
    }
    c.path = path_from(require(j, "path"), "path");
    if (auto it = j.find("path2"); it != j.end() && !it->is_null()) {
        c.path2 = path_from(*it, "path2");
    }
    const Integer num = int_from(require(j, "weight_sq_num"), "weight_sq_num");
    const Integer den = int_from(require(j, "weight_sq_den"), "weight_sq_den");
    if (den == 0) {
        throw ParseError("field 'weight_sq_den' is zero");
    }
    c.weight_sq = Rational(num, den);
    const json& method = require(j, "method");
    c.method = method.is_string() ? method.get<std::string>() : method.dump();
    c.modulus = opt_int(j, "N");
    c.residue = opt_int(j, "residue");
    c.exception = opt_int(j, "exception");
    c.exhaustive_upto = opt_long(j, "exhaustive_upto");
    c.base_a = opt_int(j, "base_a");
    c.base_b = opt_int(j, "base_b");
    c.n = opt_long(j, "n");
    if (auto it = j.find("timestamp"); it != j.end() && it->is_string()) {
        c.timestamp = it->get<std::string>();
    }
    if (auto it = j.find("version"); it != j.end() && it->is_string()) {
        c.version = it->get<std::string>();
    }
    if (c.kind == "family" && (!c.path2 || !c.modulus || !c.residue)) {
        throw ParseError("family record needs path2, N and residue");
    }
    if (c.kind == "closure" && (!c.base_a || !c.base_b || !c.n)) {
        throw ParseError("closure record needs base_a, base_b and n");
    }
    return c;
}

Verdict verify(const Certificate& c) {
    try {
        if (c.a < 1 || c.b < 1 || gcd(c.a, c.b) != 1) {
            return {false, "a, b must be coprime positive integers"};
        }
        const Rational q = c.q();
        if (c.kind == "loop") {
            const PathEval ev = eval(q, c.path);
            if (!ev.is_path()) {
                return {false, c.path.str() + " is not a path at " + q.str()};
            }
            if (!ev.value().is_zero()) {
                return {false, "c(" + q.str() + ", " + c.path.str() + ") = " + ev.value().str() + " != 0"};
            }
            if (!is_proper(c.path)) {
                return {false, c.path.str() + " is not proper"};
            }
            if (ev.weight_sq->value != c.weight_sq) {
                return {false, "weight^2 is " + ev.weight_sq->value.str() + ", record says " + c.weight_sq.str()};
            }
            if (c.weight_sq == Rational(1)) {
                return {false, "weight^2 = 1 does not witness non-uniqueness"};
            }
            return {true, "loop of weight^2 " + c.weight_sq.str()};
        }
        if (c.kind == "family") {
            const FamilyCertificate fam = to_family(c);
            if (!verify_family(fam)) {
                const auto fresh = family_from_pair(q, c.path, *c.path2);
                return {false, "family data does not match: least modulus " + fresh.modulus.get_str() +
                                   (fresh.exception ? ", exception " + fresh.exception->get_str() : ", no exception")};
            }
            const Rational ratio = weight_sq(q, c.path).value / weight_sq(q, *c.path2).value;
            if (ratio != c.weight_sq) {
                return {false, "weight^2 ratio is " + ratio.str() + ", record says " + c.weight_sq.str()};
            }
            return {true, "family b' = +-" + c.residue->get_str() + " (mod " + c.modulus->get_str() + ")"};
        }
        // closure
        if (*c.n < 1 || *c.base_a < 1 || *c.base_b < 1) {
            return {false, "closure needs positive base and n"};
        }
        const Rational base(*c.base_a, *c.base_b);
        if (base / Rational(*c.n) != q) {
            return {false, "base / n != q"};
        }
        return {true, "closure of " + base.str() + " by n = " + std::to_string(*c.n)};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
}

std::vector<Verdict> verify_all(const std::vector<Certificate>& certs) {
    std::vector<Verdict> out;
    std::set<std::string> certified;
    std::vector<FamilyCertificate> families;
    out.reserve(certs.size());
    for (const auto& c : certs) {
        out.push_back(verify(c));
        if (!out.back().ok) {
            continue;
        }
        if (c.kind == "loop") {
            certified.insert(c.q().str());
        } else if (c.kind == "family") {
            families.push_back(to_family(c));
        }
    }
    auto base_certified = [&](const Rational& base) {
        if (certified.count(base.str()) != 0) {
            return true;
        }
        for (const auto& f : families) {
            if (f.a == base.numerator() && f.covers(base.denominator())) {
                return true;
            }
        }
        return false;
    };
    for (std::size_t i = 0; i < certs.size(); ++i) {
        const auto& c = certs[i];
        if (c.kind == "closure" && out[i].ok && !base_certified(Rational(*c.base_a, *c.base_b))) {
            out[i] = {false, "closure base " + Rational(*c.base_a, *c.base_b).str() + " has no certificate"};
        }
    }
    return out;
}

Certificate loop_certificate(const Rational& q, const Path& loop, std::string method) {
    Certificate c;
    c.kind = "loop";
    c.a = q.numerator();
    c.b = q.denominator();
    c.path = loop;
    c.weight_sq = weight_sq(q, loop).value;
    c.method = std::move(method);
    c.timestamp = utc_timestamp();
    return c;
}

Certificate family_certificate(const FamilyCertificate& fam, std::string method) {
    Certificate c;
    c.kind = "family";
    c.a = fam.base_q.numerator();
    c.b = fam.base_q.denominator();
    c.path = fam.witness_m;
    c.path2 = fam.witness_n;
    c.weight_sq = weight_sq(fam.base_q, fam.witness_m).value / weight_sq(fam.base_q, fam.witness_n).value;
    c.method = std::move(method);
    c.modulus = fam.modulus;
    c.residue = fam.residue;
    c.exception = fam.exception;
    c.timestamp = utc_timestamp();
    return c;
}

FamilyCertificate to_family(const Certificate& c) {
    if (c.kind != "family") {
        throw std::invalid_argument("not a family certificate");
    }
    FamilyCertificate f;
    f.a = c.a;
    f.base_q = c.q();
    f.modulus = *c.modulus;
    f.residue = *c.residue;
    f.exception = c.exception;
    f.witness_m = c.path;
    f.witness_n = *c.path2;
    return f;
}

Certificate closure_certificate(const Rational& base, long n) {
    Certificate c;
    c.kind = "closure";
    const Rational q = base / Rational(n);
    c.a = q.numerator();
    c.b = q.denominator();
    c.path = Path();
    c.weight_sq = Rational(1);
    c.method = "derived";
    c.base_a = base.numerator();
    c.base_b = base.denominator();
    c.n = n;
    c.timestamp = utc_timestamp();
    return c;
}

std::string utc_timestamp() {
    std::time_t t = 0;
    // SOURCE_DATE_EPOCH pins the clock for reproducible stores.
    if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env != nullptr && *env != '\0') {
        t = static_cast<std::time_t>(std::strtoll(env, nullptr, 10));
    } else {
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace cfloops
