#ifndef CURVETAU_DOCUMENT_HPP
#define CURVETAU_DOCUMENT_HPP

#include "tjurina.hpp"

#include <json.hpp>

#include <fstream>
#include <string>

namespace curvetau {

using Json = nlohmann::ordered_json;

class DocumentParseError : public std::runtime_error {
public:
    explicit DocumentParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/*
 * Curve documents are JSON:
 *
 * {
 *   "branches": [
 *     { "poly": "Y^2 - 2*X^3",
 *       "param_x": [[2, 2, 1]],          // [exponent, numerator, denominator]
 *       "param_y": [[3, 4, 1]],
 *       "trunc": 0 },                     // 0 / absent: exact polynomial
 *     ...
 *   ],
 *   "settings": { "precision_cap": 4096, "degree_cap": 64, "bound_multiplier": 4 }
 * }
 *
 * Rationals travel as [num, den] pairs end to end; decimals never appear.
 */
struct CurveDocument {
    Curve curve;
    Settings settings;
};

namespace detail {

inline TruncatedSeries series_from_triples(const Json& arr, long trunc, const std::string& where) {
    if (!arr.is_array()) throw DocumentParseError(where + ": expected an array of triples");
    auto get_int = [&](const Json& v) -> Integer {
        if (v.is_number_integer()) return Integer(v.get<long long>());
        if (v.is_string()) return Integer(v.get<std::string>()); // big values travel as strings
        throw DocumentParseError(where + ": numerator/denominator must be integers");
    };
    long lo = 0, hi = 0;
    std::vector<std::pair<long, Rational>> entries;
    for (const auto& t : arr) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer())
            throw DocumentParseError(where + ": each entry must be [exponent, numerator, denominator]");
        long e = t[0].get<long>();
        Integer num = get_int(t[1]), den = get_int(t[2]);
        if (den == 0) throw DocumentParseError(where + ": zero denominator");
        entries.push_back({e, Rational(num, den)});
        lo = entries.size() == 1 ? e : std::min(lo, e);
        hi = std::max(hi, e + 1);
    }
    if (entries.empty()) return trunc > 0 ? TruncatedSeries::zero(trunc) : TruncatedSeries::zero();
    std::vector<Rational> coeffs(static_cast<size_t>(hi - lo));
    for (auto& [e, q] : entries) coeffs[static_cast<size_t>(e - lo)] += q;
    long T = trunc > 0 ? trunc : TruncatedSeries::kExactTrunc;
    if (trunc > 0 && hi > trunc)
        throw DocumentParseError(where + ": coefficient exponent beyond declared trunc");
    return TruncatedSeries(lo, std::move(coeffs), T);
}

inline Json triples_from_series(const TruncatedSeries& s) {
    Json arr = Json::array();
    for (long e = s.offset(); e < s.support_end(); ++e) {
        const Rational& q = s.coeff(e);
        if (q == 0) continue;
        arr.push_back(Json::array({e, Json(numerator(q).str()), Json(denominator(q).str())}));
    }
    // small integers stay numeric for readability
    for (auto& t : arr) {
        for (int k = 1; k <= 2; ++k) {
            const std::string v = t[static_cast<size_t>(k)].get<std::string>();
            if (v.size() <= 18) t[static_cast<size_t>(k)] = std::stoll(v);
        }
    }
    return arr;
}

} // namespace detail

inline CurveDocument parse_curve_document(const Json& doc) {
    if (!doc.is_object() || !doc.contains("branches") || !doc["branches"].is_array() ||
        doc["branches"].empty())
        throw DocumentParseError("document needs a nonempty 'branches' array");
    std::vector<Branch> branches;
    int idx = 0;
    for (const auto& b : doc["branches"]) {
        ++idx;
        std::string where = "branch " + std::to_string(idx);
        if (!b.is_object() || !b.contains("poly") || !b.contains("param_x") || !b.contains("param_y"))
            throw DocumentParseError(where + ": needs poly, param_x, param_y");
        long trunc = b.value("trunc", 0L);
        BivariatePoly poly;
        try {
            poly = BivariatePoly::parse(b["poly"].get<std::string>());
        } catch (const PolyParseError& e) {
            throw DocumentParseError(where + ": poly: " + e.what());
        }
        branches.push_back({poly,
                            detail::series_from_triples(b["param_x"], trunc, where + ": param_x"),
                            detail::series_from_triples(b["param_y"], trunc, where + ": param_y")});
    }
    Settings s;
    if (doc.contains("settings")) {
        const auto& j = doc["settings"];
        s.precision_cap = j.value("precision_cap", s.precision_cap);
        s.degree_cap = j.value("degree_cap", s.degree_cap);
        s.bound_multiplier = j.value("bound_multiplier", s.bound_multiplier);
    }
    if (const char* cap = std::getenv("CURVETAU_PRECISION_CAP")) s.precision_cap = std::atol(cap);
    return {Curve(std::move(branches)), s};
}

inline CurveDocument load_curve_document(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DocumentParseError("cannot open " + path);
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DocumentParseError(path + ": " + e.what());
    }
    return parse_curve_document(doc);
}

// Canonical echo of the parsed input; re-parsing it reproduces the curve.
inline Json curve_to_json(const Curve& curve) {
    Json branches = Json::array();
    for (const auto& b : curve.branches()) {
        Json jb;
        jb["poly"] = b.poly.str();
        jb["param_x"] = detail::triples_from_series(b.param_x);
        jb["param_y"] = detail::triples_from_series(b.param_y);
        jb["trunc"] = b.param_x.is_exact() && b.param_y.is_exact()
                          ? 0L
                          : std::min(b.param_x.trunc(), b.param_y.trunc());
        branches.push_back(jb);
    }
    return Json{{"branches", branches}};
}

// Row-major run-length encoding of the box bits on [min, conductor]:
// [first_bit, run_1, run_2, ...].
inline Json box_to_json(const ValueSetBox& box) {
    Json j;
    j["r"] = box.rank();
    j["min"] = box.min_point();
    j["conductor"] = box.conductor();
    std::vector<char> bits = box.canonical_bits();
    Json rle = Json::array();
    if (!bits.empty()) {
        rle.push_back(static_cast<int>(bits[0]));
        long run = 1;
        for (size_t k = 1; k < bits.size(); ++k) {
            if (bits[k] == bits[k - 1]) {
                ++run;
            } else {
                rle.push_back(run);
                run = 1;
            }
        }
        rle.push_back(run);
    }
    j["bits_rle"] = rle;
    return j;
}

inline Json invariants_to_json(Workspace& ws) {
    const int r = ws.rank();
    TjurinaReport rep = ws.tjurina_formula();

    Json out;
    out["r"] = r;
    Json branches = Json::array();
    for (int i = 0; i < r; ++i) {
        Json jb;
        jb["gamma"] = box_to_json(ws.gamma_branch(i));
        jb["mu"] = rep.mu_branch[static_cast<size_t>(i)];
        jb["tau"] = rep.tau_branch[static_cast<size_t>(i)];
        jb["mult"] = ws.mult_branch(i);
        branches.push_back(jb);
    }
    out["branches"] = branches;
    out["intersection_matrix"] = rep.imatrix;
    out["gamma"] = box_to_json(ws.gamma().box);
    out["delta"] = box_to_json(ws.jacobian().delta.box);
    out["lambda"] = box_to_json(ws.lambda_shift());
    out["theta_gamma_rm"] = ws.gamma().box.theta_via_rm();
    out["theta_gamma_fiber"] = ws.gamma().box.theta_via_fiber();
    out["theta_delta_rm"] = ws.jacobian().delta.box.theta_via_rm();
    out["theta_delta_fiber"] = ws.jacobian().delta.box.theta_via_fiber();
    out["tau"] = Json{{"formula", rep.tau_formula},
                      {"oracle", rep.tau_oracle},
                      {"branch", rep.tau_branch},
                      {"corrections", rep.corrections},
                      {"sum_intersections", rep.sum_intersections}};
    out["mu"] = Json{{"formula", rep.mu_formula},
                     {"oracle", rep.mu_oracle},
                     {"branch", rep.mu_branch}};
    return out;
}

inline Json dimca_to_json(const DimcaVerdict& v) {
    Json j;
    Json J = Json::array(), K = Json::array();
    for (int i : v.J) J.push_back(i + 1); // 1-based labels in reports
    for (int k : v.K) K.push_back(k + 1);
    j["J"] = J;
    j["K"] = K;
    j["lhs"] = v.lhs;
    j["rhs"] = v.rhs;
    j["slack"] = v.slack;
    j["first_term"] = v.first_term;
    j["first_bound"] = v.first_bound;
    j["later_terms"] = v.later_terms;
    j["later_bounds"] = v.later_bounds;
    j["certificates_hold"] = v.certificates_hold;
    return j;
}

// All proper splits up to complement: J ranges over subsets containing
// branch 1 (so each {J,K} pair appears once).
inline std::vector<std::vector<int>> all_partitions(int r) {
    std::vector<std::vector<int>> out;
    for (unsigned mask = 0; mask < (1u << (r - 1)); ++mask) {
        std::vector<int> J{0};
        for (int i = 1; i < r; ++i)
            if (mask & (1u << (i - 1))) J.push_back(i);
        if (static_cast<int>(J.size()) < r) out.push_back(J);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace curvetau

#endif
