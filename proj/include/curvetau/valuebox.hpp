#ifndef CURVETAU_VALUEBOX_HPP
#define CURVETAU_VALUEBOX_HPP

#include "errors.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

namespace curvetau {

using Point = std::vector<long>;

inline std::string point_str(const Point& p) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << ")";
    return os.str();
}

// Visit every lattice point of the closed box [lo, hi], row-major (last
// axis fastest), matching the bitset index layout.
inline void for_each_point(const Point& lo, const Point& hi,
                           const std::function<void(const Point&)>& fn) {
    const size_t r = lo.size();
    for (size_t i = 0; i < r; ++i)
        if (lo[i] > hi[i]) return;
    Point p = lo;
    while (true) {
        fn(p);
        int axis = static_cast<int>(r) - 1;
        while (axis >= 0 && p[static_cast<size_t>(axis)] == hi[static_cast<size_t>(axis)]) --axis;
        if (axis < 0) break;
        ++p[static_cast<size_t>(axis)];
        for (size_t k = static_cast<size_t>(axis) + 1; k < r; ++k) p[k] = lo[k];
    }
}

/*
 * Finite representation of a value set E of a fractional ideal:
 * the minimum delta0, a certified conductor c with c + N^r inside E, and a
 * membership bitset on the box [delta0, hi] with hi = c + margin.
 *
 * Membership of an arbitrary point uses the clamp rule
 *     alpha in E  <=>  inf(alpha, c) in bits   (for alpha >= delta0),
 * which is exactly how such sets are finitely represented in the good
 * semigroup literature; certify() checks the rule against every stored bit
 * of the margin, and the doubling stability suite re-checks it per ideal.
 */
class ValueSetBox {
public:
    static constexpr long kMargin = 2;

    int rank() const { return static_cast<int>(lo_.size()); }
    const Point& min_point() const { return lo_; }
    const Point& conductor() const { return cond_; }
    const Point& box_top() const { return hi_; }

    // rank-1 conveniences
    long min1() const { require_rank1(); return lo_[0]; }
    long cond1() const { require_rank1(); return cond_[0]; }

    bool raw_bit(const Point& p) const {
        size_t idx = 0;
        for (size_t i = 0; i < lo_.size(); ++i) {
            if (p[i] < lo_[i] || p[i] > hi_[i]) throw std::logic_error("raw_bit outside box");
            idx = idx * static_cast<size_t>(hi_[i] - lo_[i] + 1) + static_cast<size_t>(p[i] - lo_[i]);
        }
        return bits_[idx] != 0;
    }

    // Clamp-rule membership in the (infinite) represented set.
    bool member(const Point& p) const {
        Point q(p.size());
        for (size_t i = 0; i < p.size(); ++i) {
            if (p[i] < lo_[i]) return false;
            q[i] = std::min(p[i], cond_[i]);
        }
        return raw_bit(q);
    }

    bool member1(long z) const { require_rank1(); return member({z}); }

    // ---- fibers ---------------------------------------------------------

    // Closed i-fiber nonempty: some beta in E with beta_i = alpha_i and
    // beta_j >= alpha_j elsewhere.
    bool closed_fiber_nonempty(int i, const Point& alpha) const {
        return fiber_scan(alpha, {i}, /*strict=*/false);
    }

    // Open fiber F_J: pr_J(beta) = pr_J(alpha), beta_k > alpha_k off J.
    bool open_fiber_nonempty(const std::vector<int>& J, const Point& alpha) const {
        return fiber_scan(alpha, J, /*strict=*/true);
    }

    // ---- distinguished points -------------------------------------------

    std::vector<Point> maximal_points() const {
        std::vector<Point> out;
        if (rank() == 1) return out; // every 1-fiber contains the point itself
        for_each_point(lo_, cond_, [&](const Point& p) {
            if (!raw_bit(p)) return;
            for (int i = 0; i < rank(); ++i)
                if (open_fiber_nonempty({i}, p)) return;
            out.push_back(p);
        });
        return out;
    }

    std::vector<Point> relative_maximals() const {
        std::vector<Point> out;
        const int r = rank();
        for (const Point& p : maximal_points()) {
            bool rm = true;
            // every J with #J >= 2 must have a nonempty fiber; #J = r holds
            // trivially for a member.
            for (unsigned mask = 0; mask < (1u << r) && rm; ++mask) {
                int sz = __builtin_popcount(mask);
                if (sz < 2 || sz == r) continue;
                std::vector<int> J;
                for (int i = 0; i < r; ++i)
                    if (mask & (1u << i)) J.push_back(i);
                if (!open_fiber_nonempty(J, p)) rm = false;
            }
            if (rm) out.push_back(p);
        }
        return out;
    }

    // ---- projections and derived rank-1 sets ----------------------------

    // pr_J of the set, as its own certified box. J must be nonempty,
    // strictly increasing.
    ValueSetBox project(const std::vector<int>& J) const {
        if (J.empty()) throw std::invalid_argument("projection needs a nonempty index set");
        const size_t s = J.size();
        Point plo(s), phi(s);
        for (size_t a = 0; a < s; ++a) {
            plo[a] = lo_[static_cast<size_t>(J[a])];
            phi[a] = hi_[static_cast<size_t>(J[a])];
        }
        std::vector<int> dropped;
        for (int i = 0; i < rank(); ++i)
            if (std::find(J.begin(), J.end(), i) == J.end()) dropped.push_back(i);

        std::vector<char> pbits;
        pbits.reserve(box_volume(plo, phi));
        Point full(lo_.size());
        for_each_point(plo, phi, [&](const Point& g) {
            bool hit = false;
            // witnesses can be clamped into [lo, c] on the dropped axes
            Point dlo, dhi;
            for (int k : dropped) {
                dlo.push_back(lo_[static_cast<size_t>(k)]);
                dhi.push_back(cond_[static_cast<size_t>(k)]);
            }
            for_each_point(dlo, dhi, [&](const Point& d) {
                if (hit) return;
                for (size_t a = 0; a < s; ++a) full[static_cast<size_t>(J[a])] = g[a];
                for (size_t b = 0; b < dropped.size(); ++b)
                    full[static_cast<size_t>(dropped[b])] = d[b];
                if (raw_bit(full)) hit = true;
            });
            pbits.push_back(hit ? 1 : 0);
        });
        ValueSetBox p = certify(plo, phi, pbits, "projection");
        for (size_t a = 0; a < s; ++a) {
            if (p.cond_[a] > cond_[static_cast<size_t>(J[a])])
                throw ConductorNotStabilized("projection conductor exceeds projected conductor at axis " +
                                             std::to_string(J[a]));
            if (p.lo_[a] != lo_[static_cast<size_t>(J[a])])
                throw ConductorNotStabilized("projection minimum disagrees with projected minimum");
        }
        return p;
    }

    // N_i read off the box via the fiber characterization: delta in N_i
    // iff (c_1, ..., delta, ..., c_r) is a member.
    ValueSetBox n_set(int i) const {
        if (rank() == 1) return *this; // N over the empty complement is E itself
        std::vector<char> bits;
        Point p = cond_;
        for (long z = lo_[static_cast<size_t>(i)]; z <= hi_[static_cast<size_t>(i)]; ++z) {
            p[static_cast<size_t>(i)] = z;
            bits.push_back(raw_bit(p) ? 1 : 0);
        }
        return certify({lo_[static_cast<size_t>(i)]}, {hi_[static_cast<size_t>(i)]}, bits,
                       "n_set");
    }

    // nu_i(N_L): the i-orders of elements vanishing on every branch in L,
    // computed on the projection to L u {i} through its closed fibers at the
    // conductor. L = {} returns the plain projection E_i.
    ValueSetBox nu_partial_n(int i, std::vector<int> L) const {
        if (std::find(L.begin(), L.end(), i) != L.end())
            throw std::invalid_argument("nu_partial_n: i must not lie in L");
        if (L.empty()) return project({i});
        std::vector<int> axes = L;
        axes.push_back(i);
        std::sort(axes.begin(), axes.end());
        ValueSetBox P = project(axes);
        int ipos = static_cast<int>(std::find(axes.begin(), axes.end(), i) - axes.begin());

        std::vector<char> bits;
        for (long z = P.lo_[static_cast<size_t>(ipos)]; z <= P.hi_[static_cast<size_t>(ipos)]; ++z) {
            Point alpha = P.cond_;
            alpha[static_cast<size_t>(ipos)] = z;
            bits.push_back(P.closed_fiber_nonempty(ipos, alpha) ? 1 : 0);
        }
        return certify({P.lo_[static_cast<size_t>(ipos)]}, {P.hi_[static_cast<size_t>(ipos)]},
                       bits, "nu_partial_n");
    }

    // ---- theta ----------------------------------------------------------

    // Theta_i as the count of relative-maximal last coordinates over all
    // subsets J of {0..i} containing i (0-based branches).
    std::vector<long> theta_via_rm() const {
        const int r = rank();
        std::vector<long> theta(static_cast<size_t>(r), 0);
        for (int i = 1; i < r; ++i) {
            std::set<long> last;
            for (unsigned mask = 0; mask < (1u << (i + 1)); ++mask) {
                if (!(mask & (1u << i))) continue;
                std::vector<int> J;
                for (int a = 0; a <= i; ++a)
                    if (mask & (1u << a)) J.push_back(a);
                if (J.size() < 2) continue; // rank-1 sets have no maximal points
                ValueSetBox proj = (static_cast<int>(J.size()) == r) ? *this : project(J);
                for (const Point& p : proj.relative_maximals()) last.insert(p.back());
            }
            theta[static_cast<size_t>(i)] = static_cast<long>(last.size());
        }
        return theta;
    }

    // Theta_i as #(E_i \ nu_i(N_{[0,i)})): members of E_i below the
    // conductor of the initial-segment projection whose closed fiber there
    // is empty.
    std::vector<long> theta_via_fiber() const {
        const int r = rank();
        std::vector<long> theta(static_cast<size_t>(r), 0);
        for (int i = 1; i < r; ++i) {
            std::vector<int> axes(static_cast<size_t>(i + 1));
            for (int a = 0; a <= i; ++a) axes[static_cast<size_t>(a)] = a;
            ValueSetBox P = (i + 1 == r) ? *this : project(axes);
            ValueSetBox Ei = P.project({i});
            long count = 0;
            for (long z = Ei.min1(); z < P.cond_[static_cast<size_t>(i)]; ++z) {
                if (!Ei.member1(z)) continue;
                Point alpha = P.cond_;
                alpha[static_cast<size_t>(i)] = z;
                if (!P.closed_fiber_nonempty(i, alpha)) ++count;
            }
            theta[static_cast<size_t>(i)] = count;
        }
        return theta;
    }

    // ---- rank-1 counting helpers ----------------------------------------

    // Gaps of a rank-1 set: integers >= min missing from it.
    long gap_count() const {
        require_rank1();
        long g = 0;
        for (long z = lo_[0]; z < cond_[0]; ++z)
            if (!member1(z)) ++g;
        return g;
    }

    // #(A \ B) for rank-1 sets with B subseteq A; finite because both
    // contain everything past max(c(A), c(B)).
    static long set_difference_count(const ValueSetBox& A, const ValueSetBox& B) {
        A.require_rank1();
        B.require_rank1();
        long end = std::max(A.cond1(), B.cond1());
        long count = 0;
        for (long z = std::min(A.min1(), B.min1()); z < end; ++z) {
            bool a = A.member1(z), b = B.member1(z);
            if (b && !a)
                throw OracleMismatch("set_difference_count: inner set not contained in outer at " +
                                     std::to_string(z));
            if (a && !b) ++count;
        }
        return count;
    }

    // Translate the whole representation by an integer vector.
    ValueSetBox translated(const Point& shift) const {
        ValueSetBox t = *this;
        for (size_t i = 0; i < lo_.size(); ++i) {
            t.lo_[i] += shift[i];
            t.cond_[i] += shift[i];
            t.hi_[i] += shift[i];
        }
        return t;
    }

    std::vector<long> members1() const {
        require_rank1();
        std::vector<long> out;
        for (long z = lo_[0]; z <= hi_[0]; ++z)
            if (member1(z)) out.push_back(z);
        return out;
    }

    // Raw bitset over [min, conductor] in row-major order, for reports.
    std::vector<char> canonical_bits() const {
        std::vector<char> out;
        for_each_point(lo_, cond_, [&](const Point& p) { out.push_back(raw_bit(p) ? 1 : 0); });
        return out;
    }

    // ---- construction ----------------------------------------------------

    // Certify a raw scan: locate the minimum, saturate for a conductor
    // candidate, and check the clamp rule against every stored bit. The box
    // is re-based to [min, conductor + margin].
    static ValueSetBox certify(const Point& scan_lo, const Point& scan_hi,
                               const std::vector<char>& scan_bits, const char* what) {
        const size_t r = scan_lo.size();
        ValueSetBox raw;
        raw.lo_ = scan_lo;
        raw.hi_ = scan_hi;
        raw.cond_ = scan_hi; // temporary: raw_bit only needs lo_/hi_
        raw.bits_ = scan_bits;

        // minimum
        Point mn(r, 0);
        bool any = false;
        for_each_point(scan_lo, scan_hi, [&](const Point& p) {
            if (!raw.raw_bit(p)) return;
            if (!any) {
                mn = p;
                any = true;
            } else {
                for (size_t i = 0; i < r; ++i) mn[i] = std::min(mn[i], p[i]);
            }
        });
        if (!any)
            throw ConductorNotStabilized(std::string(what) + ": no member found in scan box");
        if (!raw.raw_bit(mn))
            throw ConductorNotStabilized(std::string(what) +
                                         ": componentwise minimum is not attained (box too small)");

        // conductor candidate by saturation from the top corner
        std::optional<Point> cand = saturation_conductor(raw, mn);
        if (!cand)
            throw ConductorNotStabilized(std::string(what) + ": scan box is not saturated at the top");
        for (size_t i = 0; i < r; ++i)
            if ((*cand)[i] + kMargin > scan_hi[i])
                throw ConductorNotStabilized(std::string(what) +
                                             ": conductor margin does not fit the scan box");

        // re-base to [mn, cand + margin]
        ValueSetBox out;
        out.lo_ = mn;
        out.cond_ = *cand;
        out.hi_ = *cand;
        for (size_t i = 0; i < r; ++i) out.hi_[i] += kMargin;
        out.bits_.assign(box_volume(out.lo_, out.hi_), 0);
        size_t idx = 0;
        for_each_point(out.lo_, out.hi_, [&](const Point& p) {
            out.bits_[idx++] = raw.raw_bit(p) ? 1 : 0;
        });

        // clamp-rule consistency across the whole stored box
        for_each_point(out.lo_, out.hi_, [&](const Point& p) {
            if (out.raw_bit(p) != out.member(p))
                throw ConductorNotStabilized(std::string(what) +
                                             ": clamp rule violated at " + point_str(p));
        });
        return out;
    }

private:
    Point lo_, cond_, hi_;
    std::vector<char> bits_; // row-major over [lo_, hi_]

    void require_rank1() const {
        if (rank() != 1) throw std::logic_error("rank-1 value set expected");
    }

    static size_t box_volume(const Point& lo, const Point& hi) {
        size_t v = 1;
        for (size_t i = 0; i < lo.size(); ++i) v *= static_cast<size_t>(hi[i] - lo[i] + 1);
        return v;
    }

    // Fixed coordinates J at alpha, remaining ones >= (or >) alpha; scans up
    // to the conductor where membership becomes constant.
    bool fiber_scan(const Point& alpha, const std::vector<int>& J, bool strict) const {
        const int r = rank();
        Point slo, shi;
        std::vector<int> free_axes;
        for (int k = 0; k < r; ++k) {
            if (std::find(J.begin(), J.end(), k) != J.end()) continue;
            free_axes.push_back(k);
            long start = alpha[static_cast<size_t>(k)] + (strict ? 1 : 0);
            start = std::max(start, lo_[static_cast<size_t>(k)]);
            slo.push_back(start);
            shi.push_back(std::max(start, cond_[static_cast<size_t>(k)]));
        }
        bool found = false;
        Point p = alpha;
        for_each_point(slo, shi, [&](const Point& f) {
            if (found) return;
            for (size_t a = 0; a < free_axes.size(); ++a)
                p[static_cast<size_t>(free_axes[a])] = f[a];
            if (member(p)) found = true;
        });
        return found;
    }

    static std::optional<Point> saturation_conductor(const ValueSetBox& raw, const Point& mn) {
        const size_t r = raw.lo_.size();
        if (!raw.raw_bit(raw.hi_)) return std::nullopt;
        // U(p) = every stored point >= p is set; computed by downward DP.
        std::vector<char> U(raw.bits_.size(), 0);
        auto index_of = [&](const Point& p) {
            size_t idx = 0;
            for (size_t i = 0; i < r; ++i)
                idx = idx * static_cast<size_t>(raw.hi_[i] - raw.lo_[i] + 1) +
                      static_cast<size_t>(p[i] - raw.lo_[i]);
            return idx;
        };
        // iterate points in reverse row-major order
        std::vector<Point> pts;
        for_each_point(raw.lo_, raw.hi_, [&](const Point& p) { pts.push_back(p); });
        Point best;
        bool have = false;
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
            const Point& p = *it;
            bool ok = raw.raw_bit(p);
            for (size_t i = 0; ok && i < r; ++i) {
                if (p[i] == raw.hi_[i]) continue;
                Point q = p;
                ++q[i];
                if (!U[index_of(q)]) ok = false;
            }
            U[index_of(p)] = ok ? 1 : 0;
            if (ok) {
                if (!have) {
                    best = p;
                    have = true;
                } else {
                    for (size_t i = 0; i < r; ++i) best[i] = std::min(best[i], p[i]);
                }
            }
        }
        if (!have) return std::nullopt;
        if (!U[index_of(best)]) return std::nullopt; // saturated region not inf-closed
        return best;
    }
};

} // namespace curvetau

#endif
