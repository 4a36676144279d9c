#ifndef CURVETAU_LINALG_HPP
#define CURVETAU_LINALG_HPP

#include "rational.hpp"

#include <map>
#include <vector>

namespace curvetau {

using RatVec = std::vector<Rational>;

/*
 * Incremental row echelon form over Q. Rows are inserted one at a time,
 * reduced against the current pivots, and kept with leading coefficient 1.
 * Pivot columns are unique, so the pivot set of a finished basis is exactly
 * the set of "leading positions" realizable by the row space -- which is
 * what turns a triangularized basis into a rank-1 value set.
 */
class EchelonBasis {
public:
    explicit EchelonBasis(size_t cols) : cols_(cols) {}

    size_t cols() const { return cols_; }
    size_t rank() const { return rows_.size(); }

    // Reduce v against the basis in place; afterwards v has no component on
    // any pivot column.
    void reduce(RatVec& v) const {
        for (const auto& [p, idx] : pivot_rows_) {
            if (v[p] == 0) continue;
            const RatVec& row = rows_[idx];
            Rational factor = v[p];
            for (size_t c = p; c < cols_; ++c)
                if (row[c] != 0) v[c] -= factor * row[c];
        }
    }

    // Insert a vector; returns the new pivot column, or -1 if v lies in the
    // current row space.
    long insert(RatVec v) {
        if (v.size() != cols_) throw std::logic_error("row width mismatch");
        reduce(v);
        size_t p = 0;
        while (p < cols_ && v[p] == 0) ++p;
        if (p == cols_) return -1;
        Rational lead = v[p];
        for (size_t c = p; c < cols_; ++c)
            if (v[c] != 0) v[c] /= lead;
        pivot_rows_[p] = rows_.size();
        rows_.push_back(std::move(v));
        return static_cast<long>(p);
    }

    bool contains(RatVec v) const {
        reduce(v);
        for (const auto& x : v)
            if (x != 0) return false;
        return true;
    }

    const std::vector<RatVec>& rows() const { return rows_; }

    std::vector<size_t> pivots() const {
        std::vector<size_t> ps;
        ps.reserve(pivot_rows_.size());
        for (const auto& [p, idx] : pivot_rows_) ps.push_back(p);
        return ps;
    }

private:
    size_t cols_;
    std::vector<RatVec> rows_;
    std::map<size_t, size_t> pivot_rows_; // pivot column -> row index, ordered
};

inline size_t rank_of(const std::vector<RatVec>& rows, size_t cols) {
    EchelonBasis b(cols);
    for (const auto& r : rows) b.insert(r);
    return b.rank();
}

} // namespace curvetau

#endif
