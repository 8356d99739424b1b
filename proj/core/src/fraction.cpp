#include "cfloops/fraction.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cfloops {

Path::Path(std::initializer_list<long> entries) {
    if (entries.size() == 0) {
        throw std::invalid_argument("a path has at least one entry");
    }
    entries_.reserve(entries.size());
    for (long e : entries) {
        entries_.emplace_back(e);
    }
}

Path::Path(std::vector<Integer> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw std::invalid_argument("a path has at least one entry");
    }
}

Path Path::parse(std::string_view text) {
    std::vector<Integer> out;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            out.push_back(parse_integer(token));
            token.clear();
        }
    };
    std::size_t open = 0;
    std::size_t close = 0;
    std::size_t commas = 0;
    for (char ch : text) {
        if (ch == '(' || ch == '[') {
            ++open;
            flush();
        } else if (ch == ')' || ch == ']') {
            ++close;
            flush();
        } else if (ch == ',' || std::isspace(static_cast<unsigned char>(ch))) {
            flush();
            if (ch == ',' && ++commas != out.size()) {
                throw std::invalid_argument("malformed path: " + std::string(text));
            }
        } else if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+') {
            if ((ch == '-' || ch == '+') && !token.empty()) {
                throw std::invalid_argument("malformed path: " + std::string(text));
            }
            token.push_back(ch);
        } else {
            throw std::invalid_argument("malformed path: " + std::string(text));
        }
    }
    flush();
    if (open > 1 || close > 1 || open != close || (commas > 0 && out.size() != commas + 1)) {
        throw std::invalid_argument("malformed path: " + std::string(text));
    }
    return Path(std::move(out));
}

Path Path::prefix(std::size_t j) const {
    return Path(std::vector<Integer>(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(j + 1)));
}

Path Path::suffix(std::size_t j) const {
    return Path(std::vector<Integer>(entries_.begin() + static_cast<std::ptrdiff_t>(j), entries_.end()));
}

std::string Path::str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i > 0) {
            s += ", ";
        }
        s += entries_[i].get_str();
    }
    return s + ")";
}

bool operator<(const Path& x, const Path& y) {
    if (x.size() != y.size()) {
        return x.size() < y.size();
    }
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
}

std::ostream& operator<<(std::ostream& os, const Path& m) {
    return os << m.str();
}

std::string WeightSq::display() const {
    Rational root;
    if (rational_sqrt(value, &root)) {
        return root.str();
    }
    return "sqrt(" + value.str() + ")";
}

void require_positive(const Rational& q) {
    if (q.sign() <= 0) {
        throw std::invalid_argument("q must be positive, got " + q.str());
    }
}

PathEval eval(const Rational& q, const Path& m) {
    require_positive(q);
    PathEval out;
    out.prefix_values.reserve(m.size());
    out.prefix_values.emplace_back(m[0]);
    Rational w2(1);
    for (std::size_t j = 1; j < m.size(); ++j) {
        const Rational& prev = out.prefix_values.back();
        if (prev.is_zero()) {
            out.failed_at = j;
            return out;
        }
        const Rational denom = q * prev;
        w2 *= denom * prev;
        out.prefix_values.push_back(Rational(m[j]) + denom.inverse());
    }
    out.weight_sq = WeightSq{std::move(w2), m.length() % 2 == 1};
    return out;
}

bool is_path(const Rational& q, const Path& m) {
    return eval(q, m).is_path();
}

bool is_proper(const Path& m) {
    for (std::size_t j = 0; j + 1 < m.size(); ++j) {
        if (m[j] == 0) {
            return false;
        }
    }
    return true;
}

bool is_loop(const Rational& q, const Path& m) {
    return eval(q, m).is_loop();
}

WeightSq weight_sq(const Rational& q, const Path& m) {
    auto ev = eval(q, m);
    if (!ev.weight_sq) {
        throw std::invalid_argument(m.str() + " is not a path for q=" + q.str());
    }
    return *ev.weight_sq;
}

Path zero_skip(const Path& m) {
    std::vector<Integer> out;
    out.reserve(m.size());
    for (const Integer& e : m) {
        out.push_back(e);
        while (out.size() >= 3 && out[out.size() - 2] == 0) {
            Integer tail = std::move(out.back());
            out.pop_back();
            out.pop_back();
            out.back() += tail;
        }
    }
    return Path(std::move(out));
}

Path compose(const Path& m, const Path& n) {
    std::vector<Integer> out(m.begin(), m.end());
    out.back() += n[0];
    out.insert(out.end(), n.begin() + 1, n.end());
    return Path(std::move(out));
}

Path inverse(const Path& m) {
    std::vector<Integer> out;
    out.reserve(m.size());
    for (auto it = m.entries().rbegin(); it != m.entries().rend(); ++it) {
        out.push_back(-*it);
    }
    return Path(std::move(out));
}

Path loop_difference(const Rational& q, const Path& m, const Path& n) {
    const auto em = eval(q, m);
    const auto en = eval(q, n);
    if (!em.is_path() || !is_proper(m) || !en.is_path() || !is_proper(n)) {
        throw std::invalid_argument("loop_difference needs two proper paths");
    }
    if (em.value() != en.value()) {
        throw std::invalid_argument("loop_difference needs equal values, got " + em.value().str() + " and " +
                                    en.value().str());
    }
    return zero_skip(compose(m, inverse(n)));
}

std::optional<std::pair<Path, Path>> equal_value_pair(const Rational& q, const Path& loop, const Path& n) {
    const Path joined = compose(loop, n);
    if (!is_path(q, joined) || !is_path(q, n)) {
        return std::nullopt;
    }
    return std::make_pair(zero_skip(joined), zero_skip(n));
}

}  // namespace cfloops
