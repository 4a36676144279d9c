#ifndef CURVETAU_COLENGTH_HPP
#define CURVETAU_COLENGTH_HPP

#include "span.hpp"

#include <numeric>

namespace curvetau {

/*
 * Colengths of fractional ideals from their value sets.
 *
 * The truncation colength is the GH formula
 *     l(I/I(gamma)) = sum_i (gamma_i - delta0_i - #gaps(E_i) - Theta_i(E)),
 * and the colength of a pair J <= I combines per-branch lengths
 * #(E_i \ D_i) with the fiber-side Theta corrections. Everything here is a
 * finite count over certified boxes; the independent check is a rank
 * difference of the two spans on a common window.
 */

inline long colength_truncation(const ValueSetBox& E, const Point& gamma) {
    const int r = E.rank();
    const Point& c = E.conductor();
    const Point& d0 = E.min_point();
    for (int i = 0; i < r; ++i)
        if (gamma[static_cast<size_t>(i)] < c[static_cast<size_t>(i)])
            throw std::invalid_argument("colength_truncation needs gamma >= conductor");
    std::vector<long> theta = E.theta_via_fiber();
    long total = 0;
    for (int i = 0; i < r; ++i) {
        ValueSetBox Ei = E.project({i});
        total += gamma[static_cast<size_t>(i)] - d0[static_cast<size_t>(i)] - Ei.gap_count() -
                 theta[static_cast<size_t>(i)];
    }
    return total;
}

// l(I/J) via the N-set fiber counts (Corollary-style route): per branch,
//   #(E_i \ D_i) + #(D_i \ nu_i(N_{[1,i)}(J))) - #(E_i \ nu_i(N_{[1,i)}(I))).
inline long colength_pair(const ValueSetBox& E, const ValueSetBox& D) {
    const int r = E.rank();
    long total = 0;
    for (int i = 0; i < r; ++i) {
        ValueSetBox Ei = E.project({i});
        ValueSetBox Di = D.project({i});
        long ell_i = ValueSetBox::set_difference_count(Ei, Di);
        std::vector<int> L;
        for (int a = 0; a < i; ++a) L.push_back(a);
        long corr_D = ValueSetBox::set_difference_count(Di, D.nu_partial_n(i, L));
        long corr_E = ValueSetBox::set_difference_count(Ei, E.nu_partial_n(i, L));
        total += ell_i + corr_D - corr_E;
    }
    return total;
}

// Same quantity through the Theta decomposition (Proposition-style route);
// kept as a distinct code path so the two can be compared.
inline long colength_pair_theta(const ValueSetBox& E, const ValueSetBox& D) {
    const int r = E.rank();
    std::vector<long> thetaE = E.theta_via_fiber();
    std::vector<long> thetaD = D.theta_via_fiber();
    long total = 0;
    for (int i = 0; i < r; ++i) {
        long ell_i = ValueSetBox::set_difference_count(E.project({i}), D.project({i}));
        total += ell_i + thetaD[static_cast<size_t>(i)] - thetaE[static_cast<size_t>(i)];
    }
    return total;
}

// Inclusion witness: every inner generator must lie in the Q-span of the
// outer products on the window. With the window top at least c(E)+1 the
// witness is rigorous: the invisible tail lies in the outer ideal anyway.
inline bool certify_inclusion(const Curve& curve, const GeneratingFamily& outer,
                              const GeneratingFamily& inner, const std::vector<long>& bound) {
    const int r = curve.rank();
    std::vector<long> olo = outer.min_orders(r);
    std::vector<long> ilo = inner.min_orders(r);
    Window win;
    for (int i = 0; i < r; ++i) {
        win.lo.push_back(std::min(olo[static_cast<size_t>(i)], ilo[static_cast<size_t>(i)]));
        win.hi.push_back(bound[static_cast<size_t>(i)]);
    }
    SpanSpace osp = span_space(curve, outer, win);
    for (const auto& g : inner.gens)
        if (!osp.basis.contains(flatten(g, win))) return false;
    return true;
}

// Independent colength: dim over Q of span(outer)/span(inner) on a common
// window with top >= c(D) + 1, computed as a rank difference.
inline long colength_oracle(const Curve& curve, const GeneratingFamily& outer,
                            const GeneratingFamily& inner, const std::vector<long>& bound) {
    const int r = curve.rank();
    std::vector<long> olo = outer.min_orders(r);
    std::vector<long> ilo = inner.min_orders(r);
    Window win;
    for (int i = 0; i < r; ++i) {
        win.lo.push_back(std::min(olo[static_cast<size_t>(i)], ilo[static_cast<size_t>(i)]));
        win.hi.push_back(bound[static_cast<size_t>(i)]);
    }
    SpanSpace osp = span_space(curve, outer, win);
    SpanSpace isp = span_space(curve, inner, win);
    return static_cast<long>(osp.basis.rank()) - static_cast<long>(isp.basis.rank());
}

inline GeneratingFamily scaled_family(const Curve& curve, const BivariatePoly& h,
                                      const GeneratingFamily& fam) {
    GeneratingFamily out;
    KElement hk = lift(curve, h);
    for (const auto& g : fam.gens) out.gens.push_back(hk * g);
    return out;
}

// Both sides of l(M/hL) = nu(h) + l(M/L) on a one-branch curve, each side
// computed by its own rank oracle.
inline std::pair<long, long> lemma_tec_check(const Curve& curve, const BivariatePoly& h,
                                             const GeneratingFamily& M, const GeneratingFamily& L,
                                             const std::vector<long>& bound) {
    if (curve.rank() != 1) throw std::invalid_argument("lemma_tec_check is a rank-1 statement");
    auto vh = nu(curve, h);
    if (!vh[0].is_finite())
        throw std::invalid_argument("lemma_tec_check: h must be regular on the branch");
    GeneratingFamily hL = scaled_family(curve, h, L);
    std::vector<long> shifted_bound = bound;
    long lhs = colength_oracle(curve, M, hL, shifted_bound);
    long rhs = vh[0].v + colength_oracle(curve, M, L, bound);
    return {lhs, rhs};
}

} // namespace curvetau

#endif
