#ifndef CURVETAU_TJURINA_HPP
#define CURVETAU_TJURINA_HPP

#include "colength.hpp"
#include "macaulay.hpp"

#include <memory>
#include <optional>

namespace curvetau {

struct Settings {
    long precision_cap = 4096; // ceiling for scan growth and window tops
    int degree_cap = 64;       // Macaulay stabilization cap
    long bound_multiplier = 4; // initial window size factor
};

struct JacobianIdeal {
    GeneratingFamily gens; // lifts of f_X, f_Y
    ValueSetResult delta;  // value set with its span
    std::vector<ValueSetBox> delta_branch; // Delta_i as rank-1 sets
};

struct TjurinaReport {
    long tau_formula = 0;
    long tau_oracle = 0;
    std::vector<long> tau_branch;
    std::vector<long> corrections; // #(Delta_i \ nu_i(N_{[1,i)})), first entry 0
    std::vector<std::vector<long>> imatrix;
    long sum_intersections = 0;
    std::vector<long> mu_branch;
    long mu_formula = 0;
    long mu_oracle = 0;
};

struct PartitionReport {
    std::vector<int> J, K; // 0-based original labels
    long tau_total = 0;    // decomposition total, checked against tau(C)
    long tau_J = 0, tau_K = 0;
    long i_JK = 0;
    std::vector<long> cross_terms; // one per k in K, in K order
};

struct DimcaVerdict {
    std::vector<int> J, K;
    long lhs = 0;   // tau(C) - tau(C_J) - tau(C_K)
    long rhs = 0;   // 2 I(C_J, C_K) - 1
    long slack = 0; // rhs - lhs, nonnegative by the theorem
    long first_term = 0, first_bound = 0;        // Delta-term vs I(f_{j+1}, f^J) - 1
    std::vector<long> later_terms, later_bounds; // vs I(f_k, f^J)
    bool certificates_hold = false;
};

inline bool equal_rank1(const ValueSetBox& A, const ValueSetBox& B) {
    if (A.min1() != B.min1() || A.cond1() != B.cond1()) return false;
    for (long z = A.min1(); z <= std::max(A.cond1(), B.cond1()); ++z)
        if (A.member1(z) != B.member1(z)) return false;
    return true;
}

/*
 * Per-curve computation cache. Everything is computed lazily with the
 * growth/precision policy: windows start at bound_multiplier * (mu_i +
 * sum_j I(i,j)) and double until the conductor certificates pass, capped by
 * precision_cap.
 */
class Workspace {
public:
    explicit Workspace(Curve curve, Settings settings = {})
        : curve_(std::move(curve)), settings_(settings) {}

    const Curve& curve() const { return curve_; }
    const Settings& settings() const { return settings_; }
    int rank() const { return curve_.rank(); }

    const ValidationReport& validation() {
        if (!validation_) validation_ = validate(curve_, settings_.precision_cap);
        return *validation_;
    }

    const ValueSetBox& gamma_branch(int i) {
        ensure_branch_data();
        return gamma_branch_[static_cast<size_t>(i)];
    }

    long mu_branch(int i) { return gamma_branch(i).cond1(); }

    long mult_branch(int i) {
        ensure_branch_data();
        return mult_[static_cast<size_t>(i)];
    }

    const std::vector<std::vector<long>>& imatrix() {
        if (imatrix_.empty()) imatrix_ = intersection_matrix(curve_);
        return imatrix_;
    }

    long sum_intersections() {
        const auto& m = imatrix();
        long s = 0;
        for (int i = 0; i < rank(); ++i)
            for (int j = i + 1; j < rank(); ++j) s += m[static_cast<size_t>(i)][static_cast<size_t>(j)];
        return s;
    }

    const ValueSetResult& gamma() {
        if (!gamma_) {
            GeneratingFamily one = family_from_polys(curve_, {BivariatePoly::constant(1)});
            gamma_ = value_set(curve_, one, default_growth(), mults(), settings_.precision_cap);
        }
        return *gamma_;
    }

    const JacobianIdeal& jacobian() {
        if (!jacobian_) jacobian_ = build_jacobian();
        return *jacobian_;
    }

    // tau(C_i) by the rank-1 machinery: #(Gamma_i \ nu_i(J(f_i))).
    long tau_branch(int i) {
        ensure_branch_data();
        return tau_branch_[static_cast<size_t>(i)];
    }

    long tau_oracle() {
        if (!tau_oracle_) {
            BivariatePoly f = curve_.product_poly();
            tau_oracle_ = macaulay_colength({f, f.derivative_x(), f.derivative_y()},
                                            settings_.degree_cap);
        }
        return *tau_oracle_;
    }

    // (oracle, formula); exact agreement is part of the contract.
    std::pair<long, long> milnor() {
        BivariatePoly f = curve_.product_poly();
        long oracle = macaulay_colength({f.derivative_x(), f.derivative_y()}, settings_.degree_cap);
        long formula = 1 - rank();
        for (int i = 0; i < rank(); ++i) formula += mu_branch(i);
        formula += 2 * sum_intersections();
        if (oracle != formula)
            throw OracleMismatch("Milnor oracle " + std::to_string(oracle) + " != formula " +
                                 std::to_string(formula));
        return {oracle, formula};
    }

    TjurinaReport tjurina_formula() {
        TjurinaReport rep;
        const int r = rank();
        rep.imatrix = imatrix();
        rep.sum_intersections = sum_intersections();
        for (int i = 0; i < r; ++i) {
            rep.tau_branch.push_back(tau_branch(i));
            rep.mu_branch.push_back(mu_branch(i));
        }
        const JacobianIdeal& jac = jacobian();
        rep.corrections.assign(static_cast<size_t>(r), 0);
        for (int i = 1; i < r; ++i) {
            std::vector<int> L;
            for (int a = 0; a < i; ++a) L.push_back(a);
            rep.corrections[static_cast<size_t>(i)] = ValueSetBox::set_difference_count(
                jac.delta.box.project({i}), jac.delta.box.nu_partial_n(i, L));
        }
        rep.tau_formula = rep.sum_intersections;
        for (int i = 0; i < r; ++i)
            rep.tau_formula += rep.tau_branch[static_cast<size_t>(i)] +
                               rep.corrections[static_cast<size_t>(i)];
        rep.tau_oracle = tau_oracle();
        if (rep.tau_formula != rep.tau_oracle)
            throw OracleMismatch("tau formula " + std::to_string(rep.tau_formula) +
                                 " != Macaulay oracle " + std::to_string(rep.tau_oracle));
        auto mm = milnor();
        rep.mu_oracle = mm.first;
        rep.mu_formula = mm.second;
        return rep;
    }

    // Theorem-style partition decomposition for an arbitrary proper subset J
    // (normalized to an initial segment by permuting branches).
    PartitionReport tjurina_partition(std::vector<int> J) {
        const int r = rank();
        std::sort(J.begin(), J.end());
        if (J.empty() || static_cast<int>(J.size()) >= r)
            throw std::invalid_argument("partition needs a proper nonempty branch subset");
        std::vector<int> K;
        for (int i = 0; i < r; ++i)
            if (std::find(J.begin(), J.end(), i) == J.end()) K.push_back(i);

        std::vector<int> perm = J;
        perm.insert(perm.end(), K.begin(), K.end());
        bool identity = true;
        for (int i = 0; i < r; ++i)
            if (perm[static_cast<size_t>(i)] != i) identity = false;

        if (!identity) {
            Workspace permuted(curve_.permuted(perm), settings_);
            PartitionReport rep = permuted.initial_segment_partition(static_cast<int>(J.size()));
            // restore original labels
            rep.J = J;
            rep.K = K;
            if (rep.tau_total != tau_oracle())
                throw OracleMismatch("partition total changed under branch permutation");
            return rep;
        }
        return initial_segment_partition(static_cast<int>(J.size()));
    }

    DimcaVerdict dimca_check(const std::vector<int>& J) {
        PartitionReport part = tjurina_partition(J);
        DimcaVerdict v;
        v.J = part.J;
        v.K = part.K;
        v.lhs = part.tau_total - part.tau_J - part.tau_K;
        v.rhs = 2 * part.i_JK - 1;
        v.slack = v.rhs - v.lhs;

        // per-term certificates on the J-first ordering
        const auto& m = imatrix();
        auto i_with_fJ = [&](int orig_k) {
            long s = 0;
            for (int orig_i : part.J) s += m[static_cast<size_t>(orig_k)][static_cast<size_t>(orig_i)];
            return s;
        };
        v.first_term = part.cross_terms.at(0);
        v.first_bound = i_with_fJ(part.K.at(0)) - 1;
        v.certificates_hold = v.first_term <= v.first_bound;
        for (size_t a = 1; a < part.K.size(); ++a) {
            v.later_terms.push_back(part.cross_terms.at(a));
            v.later_bounds.push_back(i_with_fJ(part.K.at(a)));
            if (v.later_terms.back() > v.later_bounds.back()) v.certificates_hold = false;
        }

        // r-fold corollary: tau(C) - sum tau_i <= mu(C) - sum mu_i
        long tau_gap = tau_oracle();
        long mu_gap = milnor().first;
        for (int i = 0; i < rank(); ++i) {
            tau_gap -= tau_branch(i);
            mu_gap -= mu_branch(i);
        }
        if (tau_gap > mu_gap) v.certificates_hold = false;

        if (v.slack < 0)
            throw OracleMismatch("Dimca inequality violated: slack " + std::to_string(v.slack));
        return v;
    }

    // Both sides of the Delorme identity nu(h_Y (f_i)_X - h_X (f_i)_Y) =
    // nu(h) + mu_i - 1 on branch i. A degenerate left side surfaces as a
    // non-finite valuation for the caller to report.
    std::pair<Valuation, long> delorme_check(int i, const BivariatePoly& h) {
        if (!h.in_maximal_ideal())
            throw std::invalid_argument("Delorme identity needs h in the maximal ideal");
        const Branch& b = curve_.branch(i);
        const BivariatePoly& f = b.poly;
        TruncatedSeries lhs_series =
            eval_poly(h.derivative_y(), b.param_x, b.param_y) *
                eval_poly(f.derivative_x(), b.param_x, b.param_y) -
            eval_poly(h.derivative_x(), b.param_x, b.param_y) *
                eval_poly(f.derivative_y(), b.param_x, b.param_y);
        auto vh = nu(curve_, h)[static_cast<size_t>(i)];
        if (!vh.is_finite())
            throw std::invalid_argument("Delorme identity needs h regular on the branch");
        return {valuation_of(lhs_series), vh.v + mu_branch(i) - 1};
    }

    // Lambda = Delta - c(Gamma) + (1,...,1): the value set of the module of
    // differentials mod torsion, recovered from the Jacobian side.
    ValueSetBox lambda_shift() {
        const ValueSetBox& delta = jacobian().delta.box;
        const ValueSetBox& gam = gamma().box;
        Point shift = gam.conductor();
        for (auto& s : shift) s = 1 - s;
        return delta.translated(shift);
    }

    std::vector<long> mults() {
        ensure_branch_data();
        return mult_;
    }

    std::vector<long> default_growth() {
        ensure_branch_data();
        const auto& m = imatrix();
        std::vector<long> g(static_cast<size_t>(rank()));
        for (int i = 0; i < rank(); ++i) {
            long s = 0;
            for (int j = 0; j < rank(); ++j)
                if (j != i) s += m[static_cast<size_t>(i)][static_cast<size_t>(j)];
            g[static_cast<size_t>(i)] = mu_branch(i) + s + 4;
        }
        return g;
    }

private:
    Curve curve_;
    Settings settings_;
    std::optional<ValidationReport> validation_;
    std::vector<ValueSetBox> gamma_branch_;
    std::vector<long> mult_;
    std::vector<long> tau_branch_;
    std::vector<std::vector<long>> imatrix_;
    std::optional<ValueSetResult> gamma_;
    std::optional<JacobianIdeal> jacobian_;
    std::optional<long> tau_oracle_;

    // Rank-1 value set of a generator family on branch i, with doubling.
    ValueSetBox rank1_set(int i, const std::vector<BivariatePoly>& gens, long mult) {
        Curve sub = curve_.subcurve({i});
        for (long top = 32; top <= settings_.precision_cap; top *= 2) {
            try {
                GeneratingFamily fam = family_from_polys(sub, gens);
                Window win{{std::min(0L, fam.min_orders(1)[0])}, {top}};
                SpanSpace sp = span_space(sub, fam, win);
                return rank1_from_orders(kernel_orders(sp, 0, {}), top, mult, "rank-1 value set");
            } catch (const PrecisionExhausted&) {
            } catch (const ConductorNotStabilized&) {
            }
        }
        throw PrecisionExhausted("rank-1 value set did not stabilize below precision cap");
    }

    void ensure_branch_data() {
        if (!gamma_branch_.empty()) return;
        validation();
        const int r = rank();
        for (int i = 0; i < r; ++i) {
            // multiplicity first: smallest positive order of x_i, y_i
            const Branch& b = curve_.branch(i);
            long mult = TruncatedSeries::kExactTrunc;
            if (auto o = b.param_x.order()) mult = std::min(mult, *o);
            if (auto o = b.param_y.order()) mult = std::min(mult, *o);
            ValueSetBox gi = rank1_set(i, {BivariatePoly::constant(1)}, mult);
            mult_.push_back(mult);
            gamma_branch_.push_back(gi);
            ValueSetBox ji = rank1_set(
                i, {b.poly.derivative_x(), b.poly.derivative_y()}, mult);
            tau_branch_.push_back(ValueSetBox::set_difference_count(gi, ji));
        }
    }

    JacobianIdeal build_jacobian() {
        ensure_branch_data();
        const int r = rank();
        BivariatePoly f = curve_.product_poly();
        JacobianIdeal jac;
        jac.gens = family_from_polys(curve_, {f.derivative_x(), f.derivative_y()});
        jac.delta = value_set(curve_, jac.gens, default_growth(), mults(), settings_.precision_cap);

        // Delta_i must factor as nu_i(prod_{j != i} f_j) + nu_i(J(f_i)).
        for (int i = 0; i < r; ++i) {
            ValueSetBox proj = jac.delta.box.project({i});
            const Branch& b = curve_.branch(i);
            ValueSetBox jb = rank1_set(i, {b.poly.derivative_x(), b.poly.derivative_y()},
                                       mult_[static_cast<size_t>(i)]);
            long shift = 0;
            for (int j = 0; j < r; ++j)
                if (j != i) shift += imatrix()[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (!equal_rank1(proj, jb.translated({shift})))
                throw OracleMismatch("Delta_" + std::to_string(i + 1) +
                                     " does not match the product factorization");
            jac.delta_branch.push_back(proj);
        }
        return jac;
    }

    PartitionReport initial_segment_partition(int j) {
        const int r = rank();
        PartitionReport rep;
        for (int i = 0; i < j; ++i) rep.J.push_back(i);
        for (int k = j; k < r; ++k) rep.K.push_back(k);

        std::vector<int> Jidx = rep.J, Kidx = rep.K;
        Workspace wsJ(curve_.subcurve(Jidx), settings_);
        Workspace wsK(curve_.subcurve(Kidx), settings_);
        rep.tau_J = wsJ.tjurina_formula().tau_formula;
        rep.tau_K = wsK.tjurina_formula().tau_formula;

        const auto& m = imatrix();
        for (int i : Jidx)
            for (int k : Kidx) rep.i_JK += m[static_cast<size_t>(i)][static_cast<size_t>(k)];

        const JacobianIdeal& jac = jacobian();
        for (int k : Kidx) {
            std::vector<int> L1, L2;
            for (int a = j; a < k; ++a) L1.push_back(a);
            for (int a = 0; a < k; ++a) L2.push_back(a);
            ValueSetBox from = jac.delta.box.nu_partial_n(k, L1); // L1 empty: Delta_k itself
            ValueSetBox to = jac.delta.box.nu_partial_n(k, L2);
            rep.cross_terms.push_back(ValueSetBox::set_difference_count(from, to));
        }

        rep.tau_total = rep.tau_J + rep.tau_K + rep.i_JK;
        for (long t : rep.cross_terms) rep.tau_total += t;
        if (rep.tau_total != tau_oracle())
            throw OracleMismatch("partition decomposition " + std::to_string(rep.tau_total) +
                                 " != tau oracle " + std::to_string(tau_oracle()));

        verify_lema_equal(j, wsJ);
        return rep;
    }

    // Delta_i = nu_i(f^K) + Delta^J_i and the matching N-set identity, for
    // every i in the initial segment J.
    void verify_lema_equal(int j, Workspace& wsJ) {
        const int r = rank();
        const JacobianIdeal& jac = jacobian();
        const JacobianIdeal& jacJ = wsJ.jacobian();
        for (int i = 0; i < j; ++i) {
            long shift = 0;
            for (int k = j; k < r; ++k) shift += imatrix()[static_cast<size_t>(i)][static_cast<size_t>(k)];
            ValueSetBox lhs = jac.delta.box.project({i});
            ValueSetBox rhs = jacJ.delta.box.project({i}).translated({shift});
            if (!equal_rank1(lhs, rhs))
                throw OracleMismatch("Delta_i = nu_i(f^K) + Delta^J_i fails at branch " +
                                     std::to_string(i + 1));
            if (j >= 2) {
                std::vector<int> L;
                for (int a = 0; a < j; ++a)
                    if (a != i) L.push_back(a);
                ValueSetBox nl = jac.delta.box.nu_partial_n(i, L);
                ValueSetBox nlJ = wsJ.jacobian().delta.box.nu_partial_n(i, L).translated({shift});
                if (!equal_rank1(nl, nlJ))
                    throw OracleMismatch("nu_i(N_{J\\{i}}) shift identity fails at branch " +
                                         std::to_string(i + 1));
            }
        }
    }
};

} // namespace curvetau

#endif
