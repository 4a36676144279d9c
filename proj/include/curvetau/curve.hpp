#ifndef CURVETAU_CURVE_HPP
#define CURVETAU_CURVE_HPP

#include "errors.hpp"
#include "poly.hpp"

#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

namespace curvetau {

/*
 * A reduced plane curve given as branches. Each branch carries its
 * irreducible defining polynomial f_i together with a primitive local
 * parametrization (x_i(t), y_i(t)); the engine validates consistency
 * between the two instead of deriving one from the other.
 *
 * All valuation data flows through the identification of the local ring
 * with a subring of prod_i Q((t_i)): a polynomial is "lifted" by
 * substituting every branch parametrization, and its value vector is the
 * tuple of t-orders of the components.
 */
struct Branch {
    BivariatePoly poly;
    TruncatedSeries param_x;
    TruncatedSeries param_y;
};

class Curve {
public:
    explicit Curve(std::vector<Branch> branches) : branches_(std::move(branches)) {
        if (branches_.empty()) throw std::invalid_argument("curve needs at least one branch");
    }

    int rank() const { return static_cast<int>(branches_.size()); }
    const Branch& branch(int i) const { return branches_.at(static_cast<size_t>(i)); }
    const std::vector<Branch>& branches() const { return branches_; }

    BivariatePoly product_poly() const {
        BivariatePoly f = BivariatePoly::constant(1);
        for (const auto& b : branches_) f = f * b.poly;
        return f;
    }

    // Product over a subset of branch indices; empty subset gives 1.
    BivariatePoly product_poly(const std::vector<int>& subset) const {
        BivariatePoly f = BivariatePoly::constant(1);
        for (int i : subset) f = f * branch(i).poly;
        return f;
    }

    Curve subcurve(const std::vector<int>& subset) const {
        std::vector<Branch> bs;
        for (int i : subset) bs.push_back(branch(i));
        return Curve(std::move(bs));
    }

    Curve permuted(const std::vector<int>& order) const { return subcurve(order); }

private:
    std::vector<Branch> branches_;
};

// An element of the total fraction ring, one Laurent series per branch.
struct KElement {
    std::vector<TruncatedSeries> comp;

    int rank() const { return static_cast<int>(comp.size()); }

    friend KElement operator+(const KElement& a, const KElement& b) {
        KElement r;
        for (int i = 0; i < a.rank(); ++i) r.comp.push_back(a.comp[static_cast<size_t>(i)] + b.comp[static_cast<size_t>(i)]);
        return r;
    }
    friend KElement operator*(const KElement& a, const KElement& b) {
        KElement r;
        for (int i = 0; i < a.rank(); ++i) r.comp.push_back(a.comp[static_cast<size_t>(i)] * b.comp[static_cast<size_t>(i)]);
        return r;
    }
};

// One coordinate of a value vector: a finite order, an "at least T"
// precision floor, or a symbolically certified infinity.
struct Valuation {
    enum class Kind { finite, at_least, infinity };
    Kind kind = Kind::finite;
    long v = 0;

    static Valuation finite(long x) { return {Kind::finite, x}; }
    static Valuation at_least(long t) { return {Kind::at_least, t}; }
    static Valuation inf() { return {Kind::infinity, 0}; }

    bool is_finite() const { return kind == Kind::finite; }
    bool is_infinity() const { return kind == Kind::infinity; }

    std::string str() const {
        switch (kind) {
            case Kind::finite: return std::to_string(v);
            case Kind::at_least: return ">=" + std::to_string(v);
            default: return "inf";
        }
    }
};

inline Valuation valuation_of(const TruncatedSeries& s) {
    if (auto o = s.order()) return Valuation::finite(*o);
    if (s.is_exact_zero()) return Valuation::inf();
    return Valuation::at_least(s.trunc());
}

inline KElement lift(const Curve& curve, const BivariatePoly& p) {
    KElement z;
    z.comp.reserve(static_cast<size_t>(curve.rank()));
    for (const auto& b : curve.branches()) z.comp.push_back(eval_poly(p, b.param_x, b.param_y));
    return z;
}

inline std::vector<Valuation> nu(const Curve& curve, const KElement& z) {
    std::vector<Valuation> vals;
    for (const auto& s : z.comp) vals.push_back(valuation_of(s));
    return vals;
}

// Valuation vector of a polynomial. A component that merely vanishes to
// precision is upgraded to a certified infinity when f_i divides p exactly;
// truncated data alone never certifies a zero.
inline std::vector<Valuation> nu(const Curve& curve, const BivariatePoly& p) {
    std::vector<Valuation> vals = nu(curve, lift(curve, p));
    for (int i = 0; i < curve.rank(); ++i) {
        auto& val = vals[static_cast<size_t>(i)];
        if (val.kind == Valuation::Kind::at_least && curve.branch(i).poly.divides(p))
            val = Valuation::inf();
    }
    return vals;
}

struct ValidationReport {
    bool ok = false;
    long precision = 0;
    // order_matrix[i][j] = ord of f_j along branch i (diagonal: certified zero).
    std::vector<std::vector<Valuation>> order_matrix;
    std::vector<std::string> messages;

    std::string str() const {
        std::ostringstream os;
        os << (ok ? "valid" : "INVALID") << " (precision " << precision << ")\n";
        for (const auto& m : messages) os << "  " << m << "\n";
        return os.str();
    }
};

namespace detail {

inline long param_exp_gcd(const TruncatedSeries& s) {
    long g = 0;
    for (long e = s.offset(); e < s.support_end(); ++e)
        if (s.coeff(e) != 0) g = std::gcd(g, e);
    return g;
}

} // namespace detail

// Checks every Branch/Curve invariant at the given precision and collects
// the pairwise orders needed later for intersection multiplicities.
inline ValidationReport validate(const Curve& curve, long precision) {
    ValidationReport rep;
    rep.precision = precision;
    const int r = curve.rank();

    for (int i = 0; i < r; ++i) {
        const Branch& b = curve.branch(i);
        auto check_param = [&](const TruncatedSeries& s, const char* name) {
            auto o = s.order();
            if (o && *o < 1)
                throw ValidationError(ValidationError::Kind::bad_parametrization,
                                      "branch " + std::to_string(i + 1) + ": " + name +
                                          " must vanish at the origin");
        };
        check_param(b.param_x, "param_x");
        check_param(b.param_y, "param_y");
        if (b.param_x.is_zero_to_precision() && b.param_y.is_zero_to_precision())
            throw ValidationError(ValidationError::Kind::bad_parametrization,
                                  "branch " + std::to_string(i + 1) + ": parametrization is zero");

        long g = std::gcd(detail::param_exp_gcd(b.param_x), detail::param_exp_gcd(b.param_y));
        if (g > 1)
            throw ValidationError(ValidationError::Kind::non_primitive,
                                  "branch " + std::to_string(i + 1) +
                                      ": parametrization exponents share gcd " + std::to_string(g));
    }

    rep.order_matrix.assign(static_cast<size_t>(r), {});
    for (int i = 0; i < r; ++i) {
        for (int j = 0; j < r; ++j) {
            const Branch& bi = curve.branch(i);
            TruncatedSeries v = eval_poly(curve.branch(j).poly, bi.param_x, bi.param_y);
            Valuation val = valuation_of(v);
            if (i == j) {
                if (val.is_finite())
                    throw ValidationError(ValidationError::Kind::branch_not_on_curve,
                                          "branch " + std::to_string(i + 1) + ": f_" +
                                              std::to_string(i + 1) +
                                              "(x(t),y(t)) has finite order " +
                                              std::to_string(val.v));
                // Exact parametrizations certify the zero symbolically.
            } else {
                if (!val.is_finite())
                    throw ValidationError(ValidationError::Kind::non_reduced,
                                          "branches " + std::to_string(i + 1) + " and " +
                                              std::to_string(j + 1) +
                                              " are indistinguishable at this precision");
            }
            rep.order_matrix[static_cast<size_t>(i)].push_back(val);
        }
    }

    for (int i = 0; i < r; ++i) {
        std::ostringstream os;
        os << "branch " << (i + 1) << ": f = " << curve.branch(i).poly.str()
           << ", x = " << curve.branch(i).param_x.str()
           << ", y = " << curve.branch(i).param_y.str();
        rep.messages.push_back(os.str());
    }
    rep.ok = true;
    return rep;
}

// I(f_i, f_j) = nu_i(f_j) = ord along branch i of the other defining
// polynomial; symmetry is enforced rather than assumed.
inline long intersection_multiplicity(const Curve& curve, int i, int j) {
    if (i == j) throw std::invalid_argument("intersection multiplicity needs distinct branches");
    auto ord_on = [&](int a, int bidx) -> long {
        const Branch& b = curve.branch(a);
        TruncatedSeries v = eval_poly(curve.branch(bidx).poly, b.param_x, b.param_y);
        auto o = v.order();
        if (!o) {
            if (v.is_exact_zero())
                throw ValidationError(ValidationError::Kind::non_reduced,
                                      "branches coincide: intersection multiplicity undefined");
            throw PrecisionExhausted("intersection multiplicity beyond precision " +
                                     std::to_string(v.trunc()));
        }
        return *o;
    };
    long ij = ord_on(i, j);
    long ji = ord_on(j, i);
    if (ij != ji)
        throw OracleMismatch("intersection multiplicity asymmetry: I(" + std::to_string(i) + "," +
                             std::to_string(j) + ")=" + std::to_string(ij) + " vs " +
                             std::to_string(ji));
    return ij;
}

inline std::vector<std::vector<long>> intersection_matrix(const Curve& curve) {
    const int r = curve.rank();
    std::vector<std::vector<long>> m(static_cast<size_t>(r), std::vector<long>(static_cast<size_t>(r), 0));
    for (int i = 0; i < r; ++i)
        for (int j = i + 1; j < r; ++j)
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                m[static_cast<size_t>(j)][static_cast<size_t>(i)] = intersection_multiplicity(curve, i, j);
    return m;
}

} // namespace curvetau

#endif
