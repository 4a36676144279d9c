#ifndef CURVETAU_SERIES_HPP
#define CURVETAU_SERIES_HPP

#include "rational.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

namespace curvetau {

/*
 * Truncated Laurent series over Q in one local parameter t.
 *
 * A series carries three pieces of knowledge:
 *
 *   - coefficients are zero below `offset` (by construction),
 *   - coefficients on [offset, trunc) are tracked exactly,
 *   - coefficients at >= trunc are unknown.
 *
 * trunc == kExactTrunc means the series has finite known support
 * (a Laurent polynomial): every untracked coefficient is a true zero.
 * This is the state of polynomial parametrizations and of anything
 * computed from them by ring operations, and it is what lets a
 * vanishing evaluation certify an exact zero instead of a
 * zero-to-precision one.
 *
 * Truncation propagates conservatively:
 *   add:  T = min(T_s, T_u)
 *   mul:  T = min(T_s + ord(u), T_u + ord(s)),
 * with ord replaced by the truncation level when the factor has no
 * visible order. A coefficient is stored only if it is provably exact.
 */
class TruncatedSeries {
public:
    static constexpr long kExactTrunc = std::numeric_limits<long>::max() / 4;

    TruncatedSeries() : offset_(0), trunc_(kExactTrunc) {}

    TruncatedSeries(long offset, std::vector<Rational> coeffs, long trunc)
        : offset_(offset), trunc_(trunc), coeffs_(std::move(coeffs)) {
        if (trunc_ < kExactTrunc && offset_ + static_cast<long>(coeffs_.size()) > trunc_)
            throw std::invalid_argument("series coefficients extend past truncation");
        normalize();
    }

    static TruncatedSeries zero(long trunc = kExactTrunc) {
        return TruncatedSeries(0, {}, trunc);
    }

    static TruncatedSeries constant(const Rational& c) {
        return monomial(0, c);
    }

    static TruncatedSeries monomial(long e, const Rational& c, long trunc = kExactTrunc) {
        if (c == 0) return zero(trunc);
        return TruncatedSeries(e, {c}, trunc);
    }

    long offset() const { return offset_; }
    long trunc() const { return trunc_; }
    // First exponent beyond the stored coefficients (tracked ones past this
    // point are zero).
    long support_end() const { return offset_ + size(); }
    bool is_exact() const { return trunc_ >= kExactTrunc; }

    // No visible nonzero coefficient. For an exact series this is a true zero.
    bool is_zero_to_precision() const { return coeffs_.empty(); }
    bool is_exact_zero() const { return coeffs_.empty() && is_exact(); }

    // Order of the first nonzero coefficient; nullopt when zero-to-precision.
    std::optional<long> order() const {
        if (coeffs_.empty()) return std::nullopt;
        return offset_;
    }

    // Tracked coefficient at exponent e. Asking past the truncation is a bug.
    const Rational& coeff(long e) const {
        if (e >= trunc_) throw std::logic_error("coefficient beyond truncation requested");
        long idx = e - offset_;
        if (idx < 0 || idx >= static_cast<long>(coeffs_.size())) return zero_rat();
        return coeffs_[static_cast<size_t>(idx)];
    }

    // Re-truncate to a lower level (dropping knowledge) or, for exact
    // series, to any level. Raising the truncation of an inexact series
    // would claim knowledge we do not have.
    TruncatedSeries truncated(long t) const {
        if (t > trunc_) throw std::logic_error("cannot raise truncation of inexact series");
        std::vector<Rational> c;
        for (long e = offset_; e < std::min(t, offset_ + size()); ++e)
            c.push_back(coeff(e));
        return TruncatedSeries(offset_, std::move(c), t);
    }

    TruncatedSeries operator-() const {
        std::vector<Rational> c(coeffs_);
        for (auto& q : c) q = -q;
        return TruncatedSeries(offset_, std::move(c), trunc_);
    }

    friend TruncatedSeries operator+(const TruncatedSeries& s, const TruncatedSeries& u) {
        long t = std::min(s.trunc_, u.trunc_);
        long lo = std::min(s.offset_, u.offset_);
        long hi = std::min(t, std::max(s.offset_ + s.size(), u.offset_ + u.size()));
        std::vector<Rational> c;
        c.reserve(static_cast<size_t>(std::max<long>(0, hi - lo)));
        for (long e = lo; e < hi; ++e) c.push_back(s.coeff_or_zero(e) + u.coeff_or_zero(e));
        return TruncatedSeries(lo, std::move(c), t);
    }

    friend TruncatedSeries operator-(const TruncatedSeries& s, const TruncatedSeries& u) {
        return s + (-u);
    }

    friend TruncatedSeries operator*(const TruncatedSeries& s, const TruncatedSeries& u) {
        long t = std::min(add_sat(s.trunc_, u.effective_order()),
                          add_sat(u.trunc_, s.effective_order()));
        if (s.coeffs_.empty() || u.coeffs_.empty())
            return zero(t);
        long lo = s.offset_ + u.offset_;
        long hi = std::min(t, s.offset_ + s.size() + u.offset_ + u.size() - 1);
        std::vector<Rational> c(static_cast<size_t>(std::max<long>(0, hi - lo)));
        for (long i = 0; i < s.size(); ++i) {
            if (s.coeffs_[static_cast<size_t>(i)] == 0) continue;
            for (long j = 0; j < u.size(); ++j) {
                long e = s.offset_ + i + u.offset_ + j;
                if (e >= hi) break;
                c[static_cast<size_t>(e - lo)] +=
                    s.coeffs_[static_cast<size_t>(i)] * u.coeffs_[static_cast<size_t>(j)];
            }
        }
        return TruncatedSeries(lo, std::move(c), t);
    }

    TruncatedSeries& operator+=(const TruncatedSeries& u) { return *this = *this + u; }
    TruncatedSeries& operator*=(const TruncatedSeries& u) { return *this = *this * u; }

    friend TruncatedSeries operator*(const Rational& q, const TruncatedSeries& s) {
        if (q == 0) return zero(s.trunc_);
        std::vector<Rational> c(s.coeffs_);
        for (auto& x : c) x *= q;
        return TruncatedSeries(s.offset_, std::move(c), s.trunc_);
    }

    // Equality of tracked knowledge below the common truncation.
    friend bool agree_below_common_trunc(const TruncatedSeries& s, const TruncatedSeries& u) {
        long t = std::min(s.trunc_, u.trunc_);
        long lo = std::min(s.offset_, u.offset_);
        for (long e = lo; e < std::min(t, std::max(s.offset_ + s.size(), u.offset_ + u.size())); ++e)
            if (s.coeff_or_zero(e) != u.coeff_or_zero(e)) return false;
        return true;
    }

    std::string str() const {
        if (coeffs_.empty()) return is_exact() ? "0" : "O(t^" + std::to_string(trunc_) + ")";
        std::ostringstream os;
        bool first = true;
        for (long e = offset_; e < offset_ + size(); ++e) {
            const Rational& q = coeff(e);
            if (q == 0) continue;
            if (!first) os << (q > 0 ? " + " : " - ");
            else if (q < 0) os << "-";
            first = false;
            Rational a = abs(q);
            if (a != 1 || e == 0) os << a.str();
            if (e != 0) {
                if (a != 1) os << "*";
                os << "t";
                if (e != 1) os << "^" << e;
            }
        }
        if (!is_exact()) os << " + O(t^" << trunc_ << ")";
        return os.str();
    }

private:
    long offset_;
    long trunc_;
    std::vector<Rational> coeffs_; // dense on [offset_, offset_ + size())

    long size() const { return static_cast<long>(coeffs_.size()); }

    // Lower bound for the order used in truncation propagation.
    long effective_order() const { return coeffs_.empty() ? trunc_ : offset_; }

    const Rational& coeff_or_zero(long e) const {
        long idx = e - offset_;
        if (idx < 0 || idx >= size()) return zero_rat();
        return coeffs_[static_cast<size_t>(idx)];
    }

    static const Rational& zero_rat() {
        static const Rational z(0);
        return z;
    }

    static long add_sat(long a, long b) {
        if (a >= kExactTrunc || b >= kExactTrunc) return kExactTrunc;
        return std::min(a + b, static_cast<long>(kExactTrunc));
    }

    void normalize() {
        size_t lead = 0;
        while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
        if (lead > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(lead));
            offset_ += static_cast<long>(lead);
        }
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
        if (coeffs_.empty() && trunc_ < kExactTrunc) offset_ = std::min(offset_, trunc_);
    }
};

} // namespace curvetau

#endif
