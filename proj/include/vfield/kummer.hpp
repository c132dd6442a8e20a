#pragma once

// Mixed characteristic: 1-unit normalization, the p-th power difference law,
// the f_d transformation and families of Kummer extensions.

#include <set>

#include "asd.hpp"

namespace vfield {

namespace detail {

inline void require_mixed(const ContextPtr& ctx, const char* op)
{
    if (ctx->mode() != Mode::mixed_char) throw Error(std::string(op) + ": requires mixed characteristic");
}

inline std::int64_t binomial(std::int64_t n, std::int64_t k)
{
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline Series signed_num(const KElem& c) { return c.negate ? -c.num : c.num; }

inline bool is_one_unit(const Series& s)
{
    auto v = (s - Series::one(s.context())).certified_valuation();
    return v && *v > ExtRat(0);
}

} // namespace detail

/// vp/(p-1) and vp/p with vp = 1.
inline ExtRat kummer_threshold(std::int64_t p) { return ExtRat(make_rational(1, p - 1)); }
inline ExtRat super_threshold(std::int64_t p) { return ExtRat(make_rational(1, p)); }

struct OneUnitNormalization {
    Series unit;
    KElem c, d;
};

inline OneUnitNormalization normalize_to_1unit(const Series& eta, const FieldDesc& K, int budget)
{
    const auto& ctx = K.ctx;
    detail::require_mixed(ctx, "normalize_to_1unit");
    if (eta.empty()) throw Error("normalize_to_1unit: eta must be nonzero");
    const std::int64_t p = ctx->p();
    if (!K.is_member(eta.pow(p))) throw Error("normalize_to_1unit: eta^p is not certified in K");
    const ExtRat prec = max(budget_precision(budget), ctx->default_precision());
    Series one = Series::one(ctx);
    if (detail::is_one_unit(eta)) return {eta, KElem::of(one), KElem::of(one)};

    auto elems = enumerate_elements(K, budget);
    const ExtRat veta = eta.valuation();
    std::optional<KElem> c;
    if (veta == ExtRat(0))
        c = KElem::of(one);
    else
        for (const auto& e : elems)
            if (!e.is_zero() && e.materialize(prec).valuation() == -veta) {
                c = e;
                break;
            }
    if (!c) throw Error("normalize_to_1unit: no enumerated c with vc = -v(eta) at budget " + std::to_string(budget));
    Series ec = eta * c->materialize(prec);
    std::int64_t r = valuation_residue(ec).second.code;
    std::vector<KElem> candidates;
    for (std::int64_t k = 1; k < p; ++k) candidates.push_back(KElem::of(Series::from_int(ctx, k)));
    candidates.insert(candidates.end(), elems.begin(), elems.end());
    for (const auto& e : candidates) {
        if (e.is_zero()) continue;
        Series ds = e.materialize(prec);
        auto [vd, rd] = valuation_residue(ds);
        if (vd != ExtRat(0) || (static_cast<std::int64_t>(rd.code) * r) % p != 1) continue;
        Series u = ec * ds;
        if (detail::is_one_unit(u)) return {u, *c, e};
    }
    throw Error("normalize_to_1unit: no enumerated d matches the residue at budget " + std::to_string(budget));
}

struct PthPowerReport {
    bool precondition_holds = false;
    bool equation_holds = false;
    ExtRat v_diff = ExtRat::pos_inf();       // v(eta - a)
    ExtRat v_pow_diff = ExtRat::pos_inf();   // v(eta^p - a^p)
    ExtRat bound = ExtRat::pos_inf();        // vp/(p-1) + v eta
    bool degenerate = false;
};

inline PthPowerReport pth_power_difference_check(const Series& eta, const Series& a)
{
    detail::require_mixed(eta.context(), "pth_power_difference_check");
    const std::int64_t p = eta.context()->p();
    PthPowerReport r;
    r.bound = kummer_threshold(p) + eta.valuation();
    Series diff = eta - a;
    if (diff.is_exact_zero()) {
        r.degenerate = true;
        return r;
    }
    auto vd = diff.certified_valuation();
    auto vp = (eta.pow(p) - a.pow(p)).certified_valuation();
    if (!vd || !vp) throw Error("pth_power_difference_check: difference not certified at session precision");
    r.v_diff = *vd;
    r.v_pow_diff = *vp;
    r.precondition_holds = *vd < r.bound;
    r.equation_holds = *vp == scale(*vd, Rational(p));
    return r;
}

/// v(zeta^i - 1) for i = 1..p-1.
inline std::vector<ExtRat> zeta_unit_values(const ContextPtr& ctx)
{
    detail::require_mixed(ctx, "zeta_unit_values");
    Series z = zeta_p(ctx, ctx->default_precision());
    std::vector<ExtRat> out;
    Series zi = Series::one(ctx);
    for (std::int64_t i = 1; i < ctx->p(); ++i) {
        zi = zi * z;
        auto v = (zi - Series::one(ctx)).certified_valuation();
        if (!v) throw Error("zeta_unit_values: zeta^i - 1 not certified");
        out.push_back(*v);
    }
    return out;
}

/// X^p + sum_{0<i<p} binom(p,i) d^{p-i} X^i - eta^p.
inline Polynomial kummer_transform_polynomial(const Series& eta_p, const Series& d)
{
    const auto& ctx = d.context();
    const std::int64_t p = ctx->p();
    std::vector<Series> c(static_cast<std::size_t>(p + 1), Series::zero(ctx));
    c[0] = -eta_p;
    for (std::int64_t i = 1; i < p; ++i) c[static_cast<std::size_t>(i)] = Series::from_int(ctx, detail::binomial(p, i)) * d.pow(p - i);
    c[static_cast<std::size_t>(p)] = Series::one(ctx);
    return Polynomial(std::move(c));
}

struct MixedTransform {
    Polynomial f;
    Series theta_tilde;
    std::string start; // "eta" | "root_hint"
    NewtonResult newton;
    std::vector<Check> checks;

    bool ok() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }
};

inline MixedTransform transform_mixed(const Series& eta, const FieldDesc& K, const KElem& d, const InitialSegmentSample& eta_sample,
                                      int budget, const std::optional<Series>& root_hint = std::nullopt)
{
    const auto& ctx = K.ctx;
    detail::require_mixed(ctx, "transform_mixed");
    const std::int64_t p = ctx->p();
    if (!detail::is_one_unit(eta)) throw Error("transform_mixed: eta must be a 1-unit");
    Series eta_p = eta.pow(p);
    if (!K.is_member(eta_p)) throw Error("transform_mixed: eta^p is not certified in K");
    if (!K.is_member(d) || d.is_zero()) throw Error("transform_mixed: d must be a nonzero element of K");
    const ExtRat prec = ctx->default_precision();
    Series ds = d.materialize(prec);
    const ExtRat vd = ds.valuation();
    if (!(vd < ExtRat(0))) throw Error("transform_mixed: vd must be negative");
    const Cut& upper = eta_sample.upper;
    if (!upper.bound().is_finite()) throw Error("transform_mixed: v(eta - K) has no finite upper bound");
    const ExtRat bound = scale(ExtRat(1) + scale(vd, Rational(p - 1)), Rational(1) / p);
    if (!(upper <= Cut::minus(bound)))
        throw Error("transform_mixed: condition v(eta - K) < (vp + (p-1)vd)/p fails: " + upper.str() + " vs " + bound.str());

    MixedTransform out;
    out.f = kummer_transform_polynomial(eta_p, ds);
    auto add = [&](std::string name, bool ok, std::string detail = {}) { out.checks.push_back({std::move(name), ok, std::move(detail)}); };

    const ExtRat coeff_floor = ExtRat(1) + scale(vd, Rational(p - 1));
    const ExtRat p_upper = scale(upper.bound(), Rational(p));
    for (std::int64_t i = 1; i < p; ++i) {
        ExtRat vc = out.f.coefficient(static_cast<int>(i)).valuation();
        add("v(h_d coefficient " + std::to_string(i) + ") >= vp + (p-1)vd > p v(eta - K)", vc >= coeff_floor && vc > p_upper,
            vc.str() + " vs " + coeff_floor.str() + ", " + p_upper.str());
    }

    // Newton from eta first; a supplied hint is used only when eta is outside the basin.
    std::string why;
    for (const char* start : {"eta", "root_hint"}) {
        const Series* x0 = std::string(start) == "eta" ? &eta : (root_hint ? &*root_hint : nullptr);
        if (!x0) break;
        try {
            out.newton = newton_root(out.f, *x0, prec);
            out.start = start;
            break;
        } catch (const Error& e) {
            why += std::string(start) + ": " + e.what() + "; ";
        }
    }
    if (out.start.empty()) throw Error("transform_mixed: Newton condition fails at every start (" + why + ")");
    out.theta_tilde = out.newton.root;
    const Series& tt = out.theta_tilde;

    add("v(theta_tilde) = 0", tt.valuation() == ExtRat(0), tt.valuation().str());
    auto vclose = (tt - eta).certified_valuation();
    add("v(theta_tilde - eta) above v(eta - K)", vclose && upper < Cut::plus(*vclose), vclose ? vclose->str() : "uncertified");
    std::string detail;
    add("v(theta_tilde - K) = v(eta - K)", witness_values_agree(tt, eta_sample, budget_precision(budget), detail), detail);
    add("f_d residual", out.newton.residual_valuation >= prec, out.newton.residual_valuation.str());
    return out;
}

/// Affine witness map c -> c/td + 1 on quotient representations.
inline KElem kummer_witness_map(const KElem& c, const KElem& td)
{
    Series cn = detail::signed_num(c), tn = detail::signed_num(td);
    return KElem{cn * td.den + c.den * tn, c.den * tn, false};
}

inline void classify_kummer_defect(ExtensionCert& cert)
{
    if (cert.kind != ExtKind::kummer) throw Error("classify_kummer_defect: certificate is not kummer");
    if (!detail::is_one_unit(cert.generator)) throw Error("classify_kummer_defect: generator is not a 1-unit");
    const std::int64_t p = cert.generator.context()->p();
    const Cut top = Cut::minus(kummer_threshold(p));
    if (!(cert.dist.lo > Cut::plus(ExtRat(0))) || !(cert.dist.hi <= top))
        throw Error("classify_kummer_defect: enclosure " + cert.dist.lo.str() + " .. " + cert.dist.hi.str() +
                    " violates 0 < dist <= (vp/(p-1))-");
    const Cut sd = Cut::minus(super_threshold(p));
    auto& c = cert.claims;
    if (cert.dist.hi < sd) {
        c.classification = Classification::super_dependent;
        c.classification_rule = "dist_hi < (vp/p)-";
    } else if (cert.dist.hi < top) {
        c.classification = Classification::dependent;
        c.classification_rule = "dist_hi < (vp/(p-1))-";
    } else {
        c.classification = Classification::unknown;
        c.classification_rule = "dist_hi at (vp/(p-1))-";
    }
    cert.provenance.push_back("classification enclosure " + cert.dist.lo.str() + " .. " + cert.dist.hi.str());
}

struct KummerParam {
    KElem td;
    std::optional<Series> root_hint;
};

struct KummerFamilyOptions {
    /// Certified or input-assumed upper cut of v(eta - K).
    std::optional<Cut> hypothesis;
    /// Explicit td values; empty means enumerate K by increasing |v td|.
    std::vector<KummerParam> params;
    bool prefix_witnesses = true;
};

struct KummerFamily {
    std::vector<ExtensionCert> certs;
    InitialSegmentSample eta_sample;
    bool pairwise_distinct = false;
};

namespace detail {

inline std::vector<KummerParam> enumerate_td(const FieldDesc& K, int budget, const Cut& upper)
{
    const ExtRat prec = K.ctx->default_precision();
    const ExtRat sd = super_threshold(K.p());
    std::map<Rational, KummerParam> by_abs;
    for (const auto& c : enumerate_elements(K, budget)) {
        if (c.is_zero()) continue;
        ExtRat v = c.materialize(prec).valuation();
        if (!(v < ExtRat(0))) continue;
        if (!(upper <= Cut::minus(sd + v + v))) continue;
        by_abs.emplace(-v.value(), KummerParam{c, std::nullopt});
    }
    std::vector<KummerParam> out;
    for (auto& [a, prm] : by_abs) out.push_back(prm);
    return out;
}

} // namespace detail

inline KummerFamily kummer_family(const Series& eta, const FieldDesc& K, int N, int budget, const KummerFamilyOptions& opt = {})
{
    const auto& ctx = K.ctx;
    detail::require_mixed(ctx, "kummer_family");
    if (N < 1) throw Error("kummer_family: N must be positive");
    const std::int64_t p = ctx->p();
    if (!detail::is_one_unit(eta)) throw Error("kummer_family: eta must be a 1-unit");
    Series eta_p = eta.pow(p);
    if (!K.is_member(eta_p)) throw Error("kummer_family: eta^p is not certified in K");

    KummerFamily fam;
    fam.eta_sample = value_set(eta, K, budget, {opt.prefix_witnesses, std::nullopt, opt.hypothesis});
    const auto& es = fam.eta_sample;
    const ExtRat sd = super_threshold(p);
    if (!es.upper.bound().is_finite() || !(es.upper <= Cut::minus(sd)))
        throw Error("kummer_family: super-dependent hypothesis v(eta - K) < vp/p is not certified (" + es.upper.str() + ")");

    auto params = opt.params.empty() ? detail::enumerate_td(K, budget, es.upper) : opt.params;
    if (static_cast<int>(params.size()) < N)
        throw Error("kummer_family: only " + std::to_string(params.size()) + " admissible td values at budget " + std::to_string(budget));

    const ExtRat prec = ctx->default_precision();
    const ExtRat wprec = budget_precision(budget);
    std::set<ExtRat> used_values;
    bool distinct = true;
    for (int n = 1; n <= N; ++n) {
        const KummerParam& prm = params[static_cast<std::size_t>(n - 1)];
        Series td = prm.td.materialize(prec);
        const ExtRat vtd = td.valuation();
        if (!(es.upper <= Cut::minus(sd + vtd + vtd)))
            throw Error("kummer_family: v(eta - K) < vp/p + 2 v td fails for td = " + prm.td.str());
        if (!used_values.insert(vtd).second) throw Error("kummer_family: td values must have distinct valuations");

        auto tr = transform_mixed(eta, K, prm.td, es, budget, prm.root_hint);
        Series theta = tr.theta_tilde / td;
        Series gen = theta + Series::one(ctx);

        ExtensionCert cert;
        cert.id = "kummer-" + std::to_string(n);
        cert.base = K;
        cert.kind = ExtKind::kummer;
        cert.generator = gen;
        Series rhs = eta_p / td.pow(p) + Series::one(ctx);
        std::vector<Series> mp(static_cast<std::size_t>(p + 1), Series::zero(ctx));
        mp[0] = -rhs;
        mp[static_cast<std::size_t>(p)] = Series::one(ctx);
        cert.min_poly = Polynomial(std::move(mp));
        cert.defining_element = rhs;
        cert.provenance = {"kummer_family", "eta = " + eta.str(), "td = " + prm.td.str(), "newton start = " + tr.start,
                           "budget = " + std::to_string(budget), "v(eta - K) upper " + es.upper.str() + " (" + es.upper_rule + ")"};
        cert.checks = tr.checks;

        cert.check("generator is a 1-unit", detail::is_one_unit(gen), (gen - Series::one(ctx)).str());
        cert.check("v(generator - 1) = v(theta_td) > 0", theta.valuation() > ExtRat(0) && (gen - Series::one(ctx)).valuation() == theta.valuation(),
                   theta.valuation().str());
        cert.check("generator^p = eta^p/td^p + 1", (gen.pow(p) - rhs).empty(), (gen.pow(p) - rhs).str());
        Series tn = detail::signed_num(prm.td);
        KElem rhs_k{eta_p * prm.td.den.pow(p) + tn.pow(p), tn.pow(p), false};
        cert.check("generator^p in K", K.is_member(rhs_k), rhs_k.str());

        auto ts = translate_sample(es, -vtd, [&](const KElem& w) { return kummer_witness_map(w, prm.td); });
        std::string detail;
        cert.check("v(eta_td - K) = v(eta - K) - v td", witness_values_agree(gen, ts, wprec, detail), detail);
        cert.check("v(eta_td - K) < vp/p + v td", ts.upper <= Cut::minus(sd + vtd), ts.upper.str());

        bool fresh = std::none_of(fam.certs.begin(), fam.certs.end(), [&](const ExtensionCert& c) { return same_values(c.value_set, ts); });
        cert.check("sample distinct from earlier members", fresh);
        distinct = distinct && fresh;

        cert.value_set = ts;
        cert.dist = distance_of_sample(ts);
        classify_kummer_defect(cert);
        fam.certs.push_back(std::move(cert));
    }
    fam.pairwise_distinct = distinct;
    return fam;
}

/// Lab parameters for p = 2: m = 1 + 2^a, td = eta*2m/(m^2-1).
/// Then theta_tilde = eta(m-1)/(m+1) is a root of f_td and v td = 1 - 2a.
inline std::vector<KummerParam> kummer_lab_params(const Series& eta, const std::vector<Rational>& exponents)
{
    const auto& ctx = eta.context();
    detail::require_mixed(ctx, "kummer_lab_params");
    if (ctx->p() != 2) throw Error("kummer_lab_params: lab parameters are defined for p = 2");
    const ExtRat prec = ctx->default_precision();
    Series one = Series::one(ctx), two = Series::from_int(ctx, 2);
    std::vector<KummerParam> out;
    for (const auto& a : exponents) {
        if (!(a > Rational(1, 2) && a < 1)) throw Error("kummer_lab_params: exponent must lie in (1/2, 1)");
        Series pa = Series::monomial(ctx, FqElem{1}, a);
        Series m = one + pa;
        KElem td{eta * two * m, m * m - one, false};
        Series hint = (eta * pa * (m + one).invert(prec)).truncated(prec);
        out.push_back({td, hint});
    }
    return out;
}

/// Exponents a_j = 1/2 + j/D, j = 1..N, so v td = -2j/D increases in absolute value.
inline std::vector<KummerParam> kummer_lab_params(const Series& eta, int N)
{
    const std::int64_t D = eta.context()->D();
    if (N < 1 || N >= D / 2) throw Error("kummer_lab_params: denominator bound too small for N members");
    std::vector<Rational> a;
    for (int j = 1; j <= N; ++j) a.push_back(make_rational(D / 2 + j, D));
    return kummer_lab_params(eta, a);
}

inline SigmaSample sigma_sample_kummer(const ExtensionCert& cert, int budget)
{
    if (cert.kind != ExtKind::kummer) throw Error("sigma_sample_kummer: certificate is not kummer");
    const auto& ctx = cert.generator.context();
    const Series& eta = cert.generator;
    SigmaSample out;
    // sigma(eta^j) - eta^j = (zeta^j - 1) eta^j.
    auto zv = zeta_unit_values(ctx);
    for (std::size_t j = 0; j < zv.size(); ++j) {
        out.values.push_back(zv[j]);
        out.f_witnesses.push_back("eta^" + std::to_string(j + 1));
    }
    // sigma(eta - c) - (eta - c) = (zeta - 1) eta.
    const ExtRat shift = zv.front() + eta.valuation();
    const ExtRat prec = budget_precision(budget);
    for (const auto& r : cert.value_set.realized) {
        if (!r.value.is_finite()) continue;
        auto v = certified_distance_value(eta, r.witness, prec);
        if (!v || !v->is_finite()) continue;
        out.values.push_back(shift - *v);
        out.f_witnesses.push_back("eta - (" + r.witness.str() + ")");
    }
    detail::sigma_verdict(out, cert, shift);
    return out;
}

inline SigmaSample sigma_sample_any(const ExtensionCert& cert, int budget)
{
    return cert.kind == ExtKind::kummer ? sigma_sample_kummer(cert, budget) : sigma_sample(cert, budget);
}

} // namespace vfield
