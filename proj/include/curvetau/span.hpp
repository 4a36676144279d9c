#ifndef CURVETAU_SPAN_HPP
#define CURVETAU_SPAN_HPP

#include "curve.hpp"
#include "linalg.hpp"
#include "valuebox.hpp"

#include <algorithm>
#include <vector>

namespace curvetau {

/*
 * Finite realization of fractional-ideal arithmetic.
 *
 * An O-module generated by g_1..g_m is realized below a value bound as the
 * Q-span of the products X^a Y^b * g_k: the degree cap is chosen so that
 * every omitted product has value >= bound in all coordinates, hence the
 * span carries exactly the tracked knowledge of the module on the window.
 * All membership questions then become exact rank computations:
 *
 *   alpha in nu(W)   iff   dim W_{>=alpha+e_i} < dim W_{>=alpha} for all i,
 *
 * where W_{>=beta} kills all coefficients below beta_i in coordinate i.
 * (Over an infinite field a vector space is not a finite union of proper
 * subspaces, so the r one-column drops can be realized simultaneously.)
 */

// Tracked exponent window, branch-major flattening.
struct Window {
    std::vector<long> lo; // per-branch lowest tracked exponent
    std::vector<long> hi; // per-branch first untracked exponent

    int rank() const { return static_cast<int>(lo.size()); }

    size_t cols() const {
        size_t n = 0;
        for (size_t i = 0; i < lo.size(); ++i) n += static_cast<size_t>(hi[i] - lo[i]);
        return n;
    }

    size_t col(int branch, long e) const {
        size_t base = 0;
        for (int j = 0; j < branch; ++j) base += static_cast<size_t>(hi[static_cast<size_t>(j)] - lo[static_cast<size_t>(j)]);
        return base + static_cast<size_t>(e - lo[static_cast<size_t>(branch)]);
    }
};

struct GeneratingFamily {
    std::vector<KElement> gens;
    bool over_module = true; // O-module span (monomial multiples) vs plain Q-span

    // min finite order per branch; the family must be nonvanishing on every
    // branch so that the module contains a regular element.
    std::vector<long> min_orders(int r) const {
        std::vector<long> m(static_cast<size_t>(r));
        for (int i = 0; i < r; ++i) {
            bool seen = false;
            long best = 0;
            for (const auto& g : gens) {
                auto o = g.comp[static_cast<size_t>(i)].order();
                if (o && (!seen || *o < best)) {
                    best = *o;
                    seen = true;
                }
            }
            if (!seen)
                throw std::invalid_argument(
                    "generating family vanishes identically on branch " + std::to_string(i + 1) +
                    ": not a fractional ideal family");
            m[static_cast<size_t>(i)] = best;
        }
        return m;
    }
};

inline GeneratingFamily family_from_polys(const Curve& curve, const std::vector<BivariatePoly>& ps) {
    GeneratingFamily fam;
    for (const auto& p : ps) fam.gens.push_back(lift(curve, p));
    return fam;
}

// Flatten the window coefficients of z. Components must be tracked through
// the window top (exact components always are).
inline RatVec flatten(const KElement& z, const Window& win) {
    RatVec row(win.cols());
    for (int i = 0; i < win.rank(); ++i) {
        const TruncatedSeries& s = z.comp[static_cast<size_t>(i)];
        if (s.trunc() < win.hi[static_cast<size_t>(i)])
            throw PrecisionExhausted("component " + std::to_string(i + 1) + " tracked to " +
                                     std::to_string(s.trunc()) + " but window needs " +
                                     std::to_string(win.hi[static_cast<size_t>(i)]));
        for (long e = s.offset(); e < win.lo[static_cast<size_t>(i)] && e < s.support_end(); ++e)
            if (s.coeff(e) != 0)
                throw std::logic_error("flatten: nonzero coefficient below the window");
        for (long e = std::max(win.lo[static_cast<size_t>(i)], s.offset());
             e < std::min(win.hi[static_cast<size_t>(i)], s.support_end()); ++e)
            row[win.col(i, e)] = s.coeff(e);
    }
    return row;
}

struct SpanSpace {
    Window win;
    EchelonBasis basis{0};
    std::vector<long> gen_min; // per branch, min finite generator order
    int degree_cap = 0;
};

// Q-basis of the module span on the window. The degree cap guarantees every
// omitted monomial product has value >= win.hi componentwise.
inline SpanSpace span_space(const Curve& curve, const GeneratingFamily& fam, const Window& win) {
    const int r = curve.rank();
    SpanSpace sp;
    sp.win = win;
    sp.gen_min = fam.min_orders(r);
    sp.basis = EchelonBasis(win.cols());

    int cap = 0; // plain Q-span keeps only the generators themselves
    if (fam.over_module) {
        for (int i = 0; i < r; ++i) {
            const Branch& b = curve.branch(i);
            long m = TruncatedSeries::kExactTrunc;
            if (auto o = b.param_x.order()) m = std::min(m, *o);
            if (auto o = b.param_y.order()) m = std::min(m, *o);
            if (m >= TruncatedSeries::kExactTrunc)
                throw std::invalid_argument("branch parametrization has no finite order");
            long need = win.hi[static_cast<size_t>(i)] - sp.gen_min[static_cast<size_t>(i)];
            if (need > 0) cap = std::max<int>(cap, static_cast<int>((need + m - 1) / m));
        }
    }
    sp.degree_cap = cap;

    // per-branch power tables of the lifted coordinates
    std::vector<std::vector<TruncatedSeries>> xp(static_cast<size_t>(r)), yp(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
        const Branch& b = curve.branch(i);
        xp[static_cast<size_t>(i)].push_back(TruncatedSeries::constant(1));
        yp[static_cast<size_t>(i)].push_back(TruncatedSeries::constant(1));
        for (int d = 1; d <= cap; ++d) {
            xp[static_cast<size_t>(i)].push_back(xp[static_cast<size_t>(i)].back() * b.param_x);
            yp[static_cast<size_t>(i)].push_back(yp[static_cast<size_t>(i)].back() * b.param_y);
        }
    }

    for (int a = 0; a <= cap; ++a) {
        for (int b = 0; b + a <= cap; ++b) {
            for (const auto& g : fam.gens) {
                KElement prod;
                bool relevant = false;
                for (int i = 0; i < r; ++i) {
                    TruncatedSeries s = xp[static_cast<size_t>(i)][static_cast<size_t>(a)] *
                                        yp[static_cast<size_t>(i)][static_cast<size_t>(b)] *
                                        g.comp[static_cast<size_t>(i)];
                    if (auto o = s.order(); o && *o < win.hi[static_cast<size_t>(i)]) relevant = true;
                    prod.comp.push_back(std::move(s));
                }
                if (!relevant) continue; // value >= bound everywhere
                sp.basis.insert(flatten(prod, win));
            }
        }
    }
    return sp;
}

// ---------------------------------------------------------------------------
// rank-drop membership scan

namespace detail {

struct BoxGrid {
    Point lo, hi; // inclusive
    size_t index(const Point& p) const {
        size_t idx = 0;
        for (size_t i = 0; i < lo.size(); ++i)
            idx = idx * static_cast<size_t>(hi[i] - lo[i] + 1) + static_cast<size_t>(p[i] - lo[i]);
        return idx;
    }
    size_t size() const {
        size_t v = 1;
        for (size_t i = 0; i < lo.size(); ++i) v *= static_cast<size_t>(hi[i] - lo[i] + 1);
        return v;
    }
};

// dims[p] = dim { w in W : window coefficient (i,e) of w vanishes for all
// e < p_i }, for every p in [lo, hi]. Column-rank formulation: dim W minus
// the rank of the killed-column set, swept incrementally along the last
// axis with state copies on the earlier ones (each new column is a single
// linear condition, so neighbouring dims differ by at most one).
inline void box_dims_recurse(const SpanSpace& sp, const BoxGrid& grid, int axis,
                             EchelonBasis state, Point& prefix, std::vector<long>& dims) {
    const int r = static_cast<int>(grid.lo.size());
    const long m = static_cast<long>(sp.basis.rank());
    auto colvec = [&](int br, long e) {
        RatVec v(sp.basis.rank());
        size_t c = sp.win.col(br, e);
        for (size_t k = 0; k < sp.basis.rank(); ++k) v[k] = sp.basis.rows()[k][c];
        return v;
    };
    for (long e = sp.win.lo[static_cast<size_t>(axis)]; e < grid.lo[static_cast<size_t>(axis)]; ++e)
        state.insert(colvec(axis, e));
    if (axis == r - 1) {
        for (long b = grid.lo[static_cast<size_t>(axis)]; b <= grid.hi[static_cast<size_t>(axis)]; ++b) {
            if (b > grid.lo[static_cast<size_t>(axis)]) state.insert(colvec(axis, b - 1));
            prefix[static_cast<size_t>(axis)] = b;
            dims[grid.index(prefix)] = m - static_cast<long>(state.rank());
        }
        return;
    }
    for (long b = grid.lo[static_cast<size_t>(axis)]; b <= grid.hi[static_cast<size_t>(axis)]; ++b) {
        prefix[static_cast<size_t>(axis)] = b;
        box_dims_recurse(sp, grid, axis + 1, state, prefix, dims);
        if (b < grid.hi[static_cast<size_t>(axis)]) state.insert(colvec(axis, b));
    }
}

inline std::vector<long> box_dims(const SpanSpace& sp, const BoxGrid& grid) {
    std::vector<long> dims(grid.size(), 0);
    Point prefix(grid.lo.size());
    box_dims_recurse(sp, grid, 0, EchelonBasis(sp.basis.rank()), prefix, dims);
    return dims;
}

} // namespace detail

// Raw membership bits of nu(W) on [lo, hi] by the rank-drop criterion.
inline std::vector<char> rank_drop_bits(const SpanSpace& sp, const Point& lo, const Point& hi) {
    const int r = sp.win.rank();
    detail::BoxGrid dgrid;
    dgrid.lo = lo;
    dgrid.hi = hi;
    for (int i = 0; i < r; ++i) dgrid.hi[static_cast<size_t>(i)] += 1; // need dims at p + e_i
    for (int i = 0; i < r; ++i)
        if (dgrid.hi[static_cast<size_t>(i)] > sp.win.hi[static_cast<size_t>(i)])
            throw PrecisionExhausted("rank-drop scan needs window top " +
                                     std::to_string(dgrid.hi[static_cast<size_t>(i)]) +
                                     " on branch " + std::to_string(i + 1));
    std::vector<long> dims = detail::box_dims(sp, dgrid);

    std::vector<char> bits;
    for_each_point(lo, hi, [&](const Point& p) {
        long dp = dims[dgrid.index(p)];
        bool in = dp > 0;
        for (int i = 0; in && i < r; ++i) {
            Point q = p;
            ++q[static_cast<size_t>(i)];
            if (dims[dgrid.index(q)] >= dp) in = false;
        }
        bits.push_back(in ? 1 : 0);
    });
    return bits;
}

// ---------------------------------------------------------------------------
// rank-1 sets from triangularized bases

// Orders realized on one branch by the subspace of the span vanishing on
// every branch in `killed`: reorder columns (killed block first, then the
// target branch), re-triangularize, and read the pivots falling in the
// target block. Valid below the window top once the window covers the
// conductor on every killed branch.
inline std::vector<long> kernel_orders(const SpanSpace& sp, int target,
                                       const std::vector<int>& killed) {
    const int r = sp.win.rank();
    std::vector<int> order;
    for (int l : killed) order.push_back(l);
    order.push_back(target);
    for (int i = 0; i < r; ++i)
        if (i != target && std::find(killed.begin(), killed.end(), i) == killed.end())
            order.push_back(i);

    std::vector<size_t> perm; // new column index -> old column index
    for (int br : order)
        for (long e = sp.win.lo[static_cast<size_t>(br)]; e < sp.win.hi[static_cast<size_t>(br)]; ++e)
            perm.push_back(sp.win.col(br, e));

    size_t killed_cols = 0;
    for (int l : killed)
        killed_cols += static_cast<size_t>(sp.win.hi[static_cast<size_t>(l)] - sp.win.lo[static_cast<size_t>(l)]);
    size_t target_cols = static_cast<size_t>(sp.win.hi[static_cast<size_t>(target)] -
                                             sp.win.lo[static_cast<size_t>(target)]);

    EchelonBasis eb(perm.size());
    for (const auto& row : sp.basis.rows()) {
        RatVec v(perm.size());
        for (size_t c = 0; c < perm.size(); ++c) v[c] = row[perm[c]];
        eb.insert(std::move(v));
    }
    std::vector<long> orders;
    for (size_t p : eb.pivots())
        if (p >= killed_cols && p < killed_cols + target_cols)
            orders.push_back(sp.win.lo[static_cast<size_t>(target)] +
                             static_cast<long>(p - killed_cols));
    std::sort(orders.begin(), orders.end());
    return orders;
}

// Certify a rank-1 value set from an explicit order list. `mult` is the
// multiplicity of the branch semigroup acting on the set: a run of `mult`
// consecutive members proves everything above the run start is a member.
inline ValueSetBox rank1_from_orders(const std::vector<long>& orders, long window_top, long mult,
                                     const char* what) {
    if (orders.empty())
        throw PrecisionExhausted(std::string(what) + ": no finite orders below window top");
    if (mult < 1) throw std::invalid_argument("multiplicity must be positive");
    std::set<long> s(orders.begin(), orders.end());
    long run_start = 0;
    long run = 0;
    bool found = false;
    for (long z = *s.begin(); z < window_top; ++z) {
        if (s.count(z)) {
            if (run == 0) run_start = z;
            if (++run >= mult) {
                found = true;
                break;
            }
        } else {
            run = 0;
        }
    }
    if (!found)
        throw PrecisionExhausted(std::string(what) + ": no run of " + std::to_string(mult) +
                                 " consecutive members below " + std::to_string(window_top));
    // the run proves membership above run_start; anything below is explicit
    long cond = run_start;
    while (cond > *s.begin() && s.count(cond - 1)) --cond;
    for (long z = run_start; z < window_top; ++z)
        if (!s.count(z))
            throw ConductorNotStabilized(std::string(what) + ": gap at " + std::to_string(z) +
                                         " above a certified conductor run");
    long lo = *s.begin();
    long hi = std::min(window_top - 1, cond + ValueSetBox::kMargin);
    if (hi < cond + ValueSetBox::kMargin)
        throw PrecisionExhausted(std::string(what) + ": window too small for conductor margin");
    std::vector<char> bits;
    for (long z = lo; z <= hi; ++z) bits.push_back(s.count(z) ? 1 : 0);
    return ValueSetBox::certify({lo}, {hi}, bits, what);
}

// Value semigroup of one branch with its conductor (the branch Milnor
// number for plane branches).
inline ValueSetBox branch_semigroup(const Curve& curve, int i, long window_top) {
    Curve sub = curve.subcurve({i});
    GeneratingFamily one = family_from_polys(sub, {BivariatePoly::constant(1)});
    Window win{{0}, {window_top}};
    SpanSpace sp = span_space(sub, one, win);
    std::vector<long> orders = kernel_orders(sp, 0, {});
    long mult = 0;
    for (long o : orders)
        if (o > 0) {
            mult = o;
            break;
        }
    if (mult == 0) mult = 1; // smooth branch: semigroup is all of N
    return rank1_from_orders(orders, window_top, mult, "branch semigroup");
}

// ---------------------------------------------------------------------------
// certified value sets

struct ValueSetResult {
    ValueSetBox box;
    SpanSpace span; // kept for kernel oracles against the same window
};

// Compute nu(module) on [min, min + growth], certify the conductor by
// saturation plus the N-set cross-check (c(E) must equal the run-length
// conductors of the kernel value sets), and return the boxed set.
inline ValueSetResult value_set_once(const Curve& curve, const GeneratingFamily& fam,
                                     const std::vector<long>& growth,
                                     const std::vector<long>& mults) {
    const int r = curve.rank();
    std::vector<long> gmin = fam.min_orders(r);

    Window win;
    win.lo.resize(static_cast<size_t>(r));
    win.hi.resize(static_cast<size_t>(r));
    Point scan_lo(static_cast<size_t>(r)), scan_hi(static_cast<size_t>(r));
    for (int i = 0; i < r; ++i) {
        scan_lo[static_cast<size_t>(i)] = gmin[static_cast<size_t>(i)];
        scan_hi[static_cast<size_t>(i)] = gmin[static_cast<size_t>(i)] + growth[static_cast<size_t>(i)];
        win.lo[static_cast<size_t>(i)] = gmin[static_cast<size_t>(i)];
        win.hi[static_cast<size_t>(i)] =
            scan_hi[static_cast<size_t>(i)] + 2 + std::max<long>(mults[static_cast<size_t>(i)], 1);
    }

    SpanSpace sp = span_space(curve, fam, win);
    std::vector<char> bits = rank_drop_bits(sp, scan_lo, scan_hi);
    ValueSetBox box = ValueSetBox::certify(scan_lo, scan_hi, bits, "value set");

    // Corollary-style certificate: the conductor must match the run-length
    // conductors of the kernel sets nu_i(N_{I\{i}}).
    for (int i = 0; i < r; ++i) {
        std::vector<int> others;
        for (int j = 0; j < r; ++j)
            if (j != i) others.push_back(j);
        std::vector<long> ords = kernel_orders(sp, i, others);
        ValueSetBox ni = rank1_from_orders(ords, win.hi[static_cast<size_t>(i)],
                                           mults[static_cast<size_t>(i)], "kernel N-set");
        if (ni.cond1() != box.conductor()[static_cast<size_t>(i)])
            throw ConductorNotStabilized(
                "conductor cross-check failed on branch " + std::to_string(i + 1) + ": box " +
                std::to_string(box.conductor()[static_cast<size_t>(i)]) + " vs N-set " +
                std::to_string(ni.cond1()));
    }
    return {std::move(box), std::move(sp)};
}

// Doubling driver around value_set_once. A PrecisionExhausted from the scan
// also doubles: with exact parametrizations bigger windows are always
// available, and a truncated input eventually surfaces the error at the cap.
inline ValueSetResult value_set(const Curve& curve, const GeneratingFamily& fam,
                                std::vector<long> growth, const std::vector<long>& mults,
                                long growth_cap) {
    while (true) {
        try {
            return value_set_once(curve, fam, growth, mults);
        } catch (const ConductorNotStabilized&) {
        } catch (const PrecisionExhausted&) {
        }
        long mx = 0;
        for (auto& g : growth) {
            g *= 2;
            mx = std::max(mx, g);
        }
        if (mx > growth_cap)
            throw ConductorNotStabilized("value set did not stabilize below the growth cap " +
                                         std::to_string(growth_cap));
    }
}

} // namespace curvetau

#endif
