#ifndef CURVETAU_POLY_HPP
#define CURVETAU_POLY_HPP

#include "series.hpp"

#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

namespace curvetau {

// Sparse polynomial in X, Y over Q. No zero coefficients are stored.
class BivariatePoly {
public:
    using Monomial = std::pair<int, int>; // (deg X, deg Y)
    using Terms = std::map<Monomial, Rational>;

    BivariatePoly() = default;

    static BivariatePoly term(int a, int b, const Rational& c) {
        BivariatePoly p;
        p.set(a, b, c);
        return p;
    }

    static BivariatePoly variable_x() { return term(1, 0, 1); }
    static BivariatePoly variable_y() { return term(0, 1, 1); }
    static BivariatePoly constant(const Rational& c) { return term(0, 0, c); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational coeff(int a, int b) const {
        auto it = terms_.find({a, b});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void set(int a, int b, const Rational& c) {
        if (c == 0)
            terms_.erase({a, b});
        else
            terms_[{a, b}] = c;
    }

    void add_term(int a, int b, const Rational& c) { set(a, b, coeff(a, b) + c); }

    int total_degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.first + m.second);
        return d;
    }

    int degree_x() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.first);
        return d;
    }

    int degree_y() const {
        int d = -1;
        for (const auto& [m, c] : terms_) d = std::max(d, m.second);
        return d;
    }

    // Order of vanishing at the origin.
    int order_at_origin() const {
        int d = std::numeric_limits<int>::max();
        for (const auto& [m, c] : terms_) d = std::min(d, m.first + m.second);
        return terms_.empty() ? -1 : d;
    }

    bool in_maximal_ideal() const { return coeff(0, 0) == 0; }

    friend BivariatePoly operator+(const BivariatePoly& p, const BivariatePoly& q) {
        BivariatePoly r = p;
        for (const auto& [m, c] : q.terms_) r.add_term(m.first, m.second, c);
        return r;
    }

    friend BivariatePoly operator-(const BivariatePoly& p, const BivariatePoly& q) {
        BivariatePoly r = p;
        for (const auto& [m, c] : q.terms_) r.add_term(m.first, m.second, -c);
        return r;
    }

    friend BivariatePoly operator*(const BivariatePoly& p, const BivariatePoly& q) {
        BivariatePoly r;
        for (const auto& [mp, cp] : p.terms_)
            for (const auto& [mq, cq] : q.terms_)
                r.add_term(mp.first + mq.first, mp.second + mq.second, cp * cq);
        return r;
    }

    friend BivariatePoly operator*(const Rational& c, const BivariatePoly& p) {
        BivariatePoly r;
        for (const auto& [m, cp] : p.terms_) r.add_term(m.first, m.second, c * cp);
        return r;
    }

    friend bool operator==(const BivariatePoly& p, const BivariatePoly& q) {
        return p.terms_ == q.terms_;
    }

    BivariatePoly derivative_x() const {
        BivariatePoly r;
        for (const auto& [m, c] : terms_)
            if (m.first > 0) r.add_term(m.first - 1, m.second, Rational(m.first) * c);
        return r;
    }

    BivariatePoly derivative_y() const {
        BivariatePoly r;
        for (const auto& [m, c] : terms_)
            if (m.second > 0) r.add_term(m.first, m.second - 1, Rational(m.second) * c);
        return r;
    }

    // Exact divisibility test in Q[X,Y]: single-divisor multivariate division
    // under lex order; the remainder vanishes iff d | p.
    bool divides(const BivariatePoly& p) const {
        if (is_zero()) return p.is_zero();
        BivariatePoly rem = p;
        Monomial lead = lead_monomial();
        const Rational lead_c = terms_.at(lead);
        while (!rem.is_zero()) {
            // scan for a remaining term divisible by the lead monomial
            std::optional<Monomial> target;
            for (auto it = rem.terms_.rbegin(); it != rem.terms_.rend(); ++it) {
                if (it->first.first >= lead.first && it->first.second >= lead.second) {
                    target = it->first;
                    break;
                }
            }
            if (!target) return false;
            Rational q = rem.terms_.at(*target) / lead_c;
            int da = target->first - lead.first;
            int db = target->second - lead.second;
            for (const auto& [m, c] : terms_)
                rem.add_term(m.first + da, m.second + db, -q * c);
        }
        return true;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // highest total degree first, plain Y before mixed, for readability
        std::multimap<int, Monomial, std::greater<int>> by_deg;
        for (const auto& [m, c] : terms_) by_deg.insert({m.first + m.second, m});
        for (const auto& [d, m] : by_deg) {
            const Rational c = terms_.at(m);
            Rational a = abs(c);
            if (!first)
                os << (c > 0 ? " + " : " - ");
            else if (c < 0)
                os << "-";
            first = false;
            bool has_vars = m.first > 0 || m.second > 0;
            if (a != 1 || !has_vars) os << a.str();
            if (m.first > 0) {
                if (a != 1) os << "*";
                os << "X";
                if (m.first > 1) os << "^" << m.first;
            }
            if (m.second > 0) {
                if (a != 1 || m.first > 0) os << "*";
                os << "Y";
                if (m.second > 1) os << "^" << m.second;
            }
        }
        return os.str();
    }

    // Grammar: sum of signed terms; a term is an optional rational
    // coefficient ("2", "3/4") and monomial factors "X", "Y", "X^2",
    // separated by optional '*'. Example: "Y^2 - 2*X^3 + 1/2*X*Y".
    static BivariatePoly parse(const std::string& text);

private:
    Terms terms_;

    Monomial lead_monomial() const { return terms_.rbegin()->first; }
};

class PolyParseError : public std::runtime_error {
public:
    PolyParseError(const std::string& msg, size_t pos)
        : std::runtime_error(msg + " at column " + std::to_string(pos + 1)), pos_(pos) {}
    size_t position() const { return pos_; }

private:
    size_t pos_;
};

inline BivariatePoly BivariatePoly::parse(const std::string& text) {
    BivariatePoly result;
    size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    auto parse_uint = [&]() -> Integer {
        size_t start = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == start) throw PolyParseError("expected integer", i);
        return Integer(text.substr(start, i - start));
    };

    skip_ws();
    if (i == text.size()) throw PolyParseError("empty polynomial", i);
    bool expect_term = true;
    int sign = 1;
    while (i < text.size()) {
        skip_ws();
        if (i == text.size()) break;
        char ch = text[i];
        if (ch == '+' || ch == '-') {
            if (expect_term && ch == '-') {
                sign = -sign;
                ++i;
                continue;
            }
            if (expect_term) throw PolyParseError("unexpected sign", i);
            sign = (ch == '-') ? -1 : 1;
            expect_term = true;
            ++i;
            continue;
        }
        if (!expect_term) throw PolyParseError("expected '+' or '-'", i);

        // one term: coefficient and/or monomial factors
        Rational coeff(1);
        int dx = 0, dy = 0;
        bool saw_factor = false;
        bool allow_more = true;
        while (allow_more && i < text.size()) {
            skip_ws();
            if (i >= text.size()) break;
            char c = text[i];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                Integer num = parse_uint();
                if (i < text.size() && text[i] == '/') {
                    ++i;
                    Integer den = parse_uint();
                    if (den == 0) throw PolyParseError("zero denominator", i);
                    coeff *= Rational(num, den);
                } else {
                    coeff *= Rational(num);
                }
                saw_factor = true;
            } else if (c == 'X' || c == 'x' || c == 'Y' || c == 'y') {
                ++i;
                int e = 1;
                if (i < text.size() && text[i] == '^') {
                    ++i;
                    e = static_cast<int>(parse_uint());
                }
                if (c == 'X' || c == 'x') dx += e; else dy += e;
                saw_factor = true;
            } else if (c == '*') {
                ++i;
                continue;
            } else if (c == '+' || c == '-') {
                allow_more = false;
            } else {
                throw PolyParseError(std::string("unexpected character '") + c + "'", i);
            }
        }
        if (!saw_factor) throw PolyParseError("empty term", i);
        result.add_term(dx, dy, Rational(sign) * coeff);
        expect_term = false;
        sign = 1;
    }
    if (expect_term) throw PolyParseError("dangling sign", i);
    return result;
}

// Substitution p(x(t), y(t)), Horner in Y then in X. Local parametrizations
// only: both series must vanish at the origin (order >= 1, where a
// zero-to-precision component counts as vanishing).
inline TruncatedSeries eval_poly(const BivariatePoly& p, const TruncatedSeries& x,
                                 const TruncatedSeries& y) {
    auto positive_order = [](const TruncatedSeries& s) {
        auto o = s.order();
        return !o || *o >= 1;
    };
    if (!positive_order(x) || !positive_order(y))
        throw std::invalid_argument("eval_poly: parametrization must have positive order");

    if (p.is_zero()) return TruncatedSeries::zero(std::min(x.trunc(), y.trunc()));

    // rows[b] = sum_a c_{a,b} X^a, evaluated by Horner in X; then Horner in Y.
    int max_y = p.degree_y();
    std::vector<std::vector<Rational>> rows(static_cast<size_t>(max_y + 1));
    for (const auto& [m, c] : p.terms()) {
        auto& row = rows[static_cast<size_t>(m.second)];
        if (static_cast<int>(row.size()) <= m.first) row.resize(static_cast<size_t>(m.first + 1));
        row[static_cast<size_t>(m.first)] = c;
    }
    auto eval_x = [&](const std::vector<Rational>& row) {
        TruncatedSeries acc = TruncatedSeries::zero();
        for (auto it = row.rbegin(); it != row.rend(); ++it)
            acc = acc * x + TruncatedSeries::constant(*it);
        return acc;
    };
    TruncatedSeries acc = TruncatedSeries::zero();
    for (int b = max_y; b >= 0; --b)
        acc = acc * y + eval_x(rows[static_cast<size_t>(b)]);
    return acc;
}

} // namespace curvetau

#endif
