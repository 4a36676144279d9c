#ifndef CURVETAU_MACAULAY_HPP
#define CURVETAU_MACAULAY_HPP

#include "errors.hpp"
#include "linalg.hpp"
#include "poly.hpp"

namespace curvetau {

/*
 * Macaulay-truncation colength of an ideal I = <g_1,...,g_s> in Q[[X,Y]]:
 *
 *   dim Q[[X,Y]]/(I + m^d) = #monomials(deg < d) - rank{ pi_{<d}(m * g) },
 *
 * where m runs over monomials of degree <= d (higher multiples only touch
 * degrees >= d). The dimension is nondecreasing in d and equality of two
 * consecutive values forces I + m^d = I + m^{d+1}, hence m^d <= I since
 * ideals of the formal power series ring are closed; the stable value is
 * the colength. No stabilization below the cap means the ideal does not
 * have finite colength (non-reduced input).
 */
inline long macaulay_colength(const std::vector<BivariatePoly>& gens, int degree_cap) {
    auto monomials_below = [](int d) { return static_cast<size_t>(d) * static_cast<size_t>(d + 1) / 2; };
    auto col_of = [](int a, int b) {
        int d = a + b; // monomials grouped by total degree, then by X-degree
        return static_cast<size_t>(d) * static_cast<size_t>(d + 1) / 2 + static_cast<size_t>(a);
    };

    long prev = -1;
    int start = 1;
    for (const auto& g : gens)
        if (!g.is_zero()) start = std::max(start, g.order_at_origin());
    for (int d = start; d <= degree_cap; ++d) {
        EchelonBasis basis(monomials_below(d));
        for (const auto& g : gens) {
            if (g.is_zero()) continue;
            for (int a = 0; a <= d; ++a) {
                for (int b = 0; a + b <= d; ++b) {
                    if (g.order_at_origin() + a + b >= d) continue; // lands entirely in m^d
                    RatVec row(monomials_below(d));
                    bool nonzero = false;
                    for (const auto& [m, c] : g.terms()) {
                        int ma = m.first + a, mb = m.second + b;
                        if (ma + mb >= d) continue;
                        row[col_of(ma, mb)] = c;
                        nonzero = true;
                    }
                    if (nonzero) basis.insert(std::move(row));
                }
            }
        }
        long dim = static_cast<long>(monomials_below(d)) - static_cast<long>(basis.rank());
        if (dim == prev) return dim;
        prev = dim;
    }
    throw NonIsolated("Macaulay colength did not stabilize below degree cap " +
                      std::to_string(degree_cap));
}

} // namespace curvetau

#endif
