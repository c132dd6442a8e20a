#pragma once

// Equal-characteristic pipeline: Artin-Schreier roots, generator orbits, the
// inseparable-to-separable transformation, families, Sigma samples and the
// defect rules.

#include <set>
#include <string>
#include <vector>

#include "cert.hpp"

namespace vfield {

struct AsRootResult {
    Series theta;
    int root_levels = 0;      // terms b_-^{1/p^i}, i = 1..root_levels
    int frobenius_levels = 0; // terms b_+^{p^i}, i = 0..frobenius_levels-1
};

namespace detail {

inline int p_adic_order(std::int64_t n, std::int64_t p)
{
    if (n == 0) return 64;
    int k = 0;
    while (n % p == 0) {
        n /= p;
        ++k;
    }
    return k;
}

} // namespace detail

/// Root of X^p - X - b: sum_{i>=1} b_-^{1/p^i} - sum_{i>=0} b_+^{p^i} + residue root.
/// `target` bounds the precision of the positive part (default: session precision).
inline AsRootResult as_root_ex(const Series& b, std::optional<ExtRat> target = std::nullopt)
{
    const auto& ctx = b.context();
    if (ctx->mode() != Mode::equal_char) throw Error("as_root: requires equal characteristic");
    const std::int64_t p = ctx->p();
    ExtRat P = min(target.value_or(ctx->default_precision()), b.precision());
    if (!P.is_finite()) throw Error("as_root: target precision must be finite");

    Series neg = Series::zero(ctx), pos = Series::zero(ctx);
    FqElem r{0};
    for (const auto& [key, c] : b.terms()) {
        Series m = Series::monomial(ctx, c, ctx->exponent_of(key));
        if (key < 0)
            neg = neg + m;
        else if (key > 0)
            pos = pos + m;
        else
            r = c;
    }
    auto x = ctx->field().artin_schreier_root(r);
    if (!x) throw Error("as_root: residue equation x^p - x = r has no root in F_q (needs a residue extension)");

    AsRootResult out;
    Series theta = Series::monomial(ctx, *x, Rational(0));
    ExtRat prec = P;
    if (!neg.empty()) {
        int k = 64;
        for (const auto& [key, c] : neg.terms()) k = std::min(k, detail::p_adic_order(key, p));
        if (k == 0) throw Error("as_root: b^{1/p} exceeds the denominator bound D");
        Series cur = neg;
        for (int i = 1; i <= k; ++i) {
            cur = cur.pth_root();
            theta = theta + cur;
        }
        out.root_levels = k;
        Rational pk1 = Rational(boost::multiprecision::pow(BigInt(p), k + 1));
        prec = min(prec, ExtRat(neg.valuation().value() / pk1));
    }
    if (b.precision().is_finite() && b.precision() < ExtRat(0)) prec = min(prec, scale(b.precision(), Rational(1) / p));
    Series cur = pos.truncated(P);
    while (!cur.empty()) {
        theta = theta - cur;
        cur = cur.frobenius().truncated(P);
        ++out.frobenius_levels;
    }
    out.theta = theta.truncated(prec);
    return out;
}

inline Series as_root(const Series& b) { return as_root_ex(b).theta; }

/// X^p - X - b.
inline Polynomial as_polynomial(const Series& b)
{
    const auto& ctx = b.context();
    std::vector<Series> c(static_cast<std::size_t>(ctx->p() + 1), Series::zero(ctx));
    c[0] = -b;
    c[1] = -Series::one(ctx);
    c[static_cast<std::size_t>(ctx->p())] = Series::one(ctx);
    return Polynomial(std::move(c));
}

/// The schema certificate for an AS root whose polar part is one monomial over
/// a perfect directed union: partial sums of the tail lie in K and v(theta - K)
/// is the set of negative values.
inline std::optional<TailSchema> as_tail_schema(const Series& b, const FieldDesc& K)
{
    if (!K.directed_union() || !K.perfect || K.ctx->mode() != Mode::equal_char) return std::nullopt;
    if (!K.is_member(b)) return std::nullopt;
    int polar = 0;
    for (const auto& [key, c] : b.terms()) polar += key < 0;
    if (polar != 1) return std::nullopt;
    return TailSchema{Rational(0), "sum_{i>=1} (b_-)^{1/p^i} with b_- = " + b.prefix_below(Rational(0)).str()};
}

struct GeneratorTransform {
    Series theta; // i*theta + c
    Series b;     // i*b + c^p - c
};

inline GeneratorTransform as_generator_transform(const Series& theta, const Series& b, std::int64_t i, const Series& c)
{
    const auto& ctx = theta.context();
    auto fi = ctx->field().from_int(i);
    if (fi.code == 0) throw Error("as_generator_transform: i must be nonzero in F_p");
    Series I = Series::monomial(ctx, fi, Rational(0));
    return {I * theta + c, I * b + c.frobenius() - c};
}

// ---------------------------------------------------------------------------
// Defect rules.

inline void defect_criteria(ExtensionCert& cert)
{
    const std::int64_t p = cert.base.p();
    const auto& s = cert.value_set;
    Claims& cl = cert.claims;
    const bool degree_p_normal = cert.kind == ExtKind::artin_schreier || cert.kind == ExtKind::kummer;
    const bool upper_finite = s.upper.bound().is_finite();

    if (degree_p_normal && s.no_max == Verdict::proved && upper_finite) {
        const bool as_below_zero = cert.kind == ExtKind::artin_schreier && cert.dist.hi <= Cut::minus(ExtRat(0));
        std::string rule = as_below_zero ? "uniqextv" : "c2";
        cl.unique_extension = {Verdict::proved, rule};
        cl.immediate = {Verdict::proved, rule};
        cl.defect = p;
        cl.defect_rule = rule;
        cl.ram_index = 1;
    } else if (cl.unique_extension.verdict == Verdict::proved && s.no_max == Verdict::proved) {
        cl.immediate = {Verdict::proved, "ueGp1"};
        cl.defect = p;
        cl.defect_rule = "ueGp1";
        cl.ram_index = 1;
    } else {
        bool ramified = false;
        for (const auto& r : s.realized)
            if (r.value.is_finite() && !cert.base.value_group.contains(r.value.value())) ramified = true;
        if (ramified) {
            cl.unique_extension = {Verdict::proved, "ramified"};
            cl.immediate = {Verdict::refuted, "ramified"};
            cl.ram_index = p;
            cl.defect = defect_of(p, p, 1, p);
            cl.defect_rule = "ramified";
        }
    }
    if (cl.defect) {
        std::int64_t e = cl.ram_index;
        cert.check("defect_of_consistency", defect_of(p, e, 1, p) == *cl.defect,
                   "degree p = " + std::to_string(*cl.defect) + " * " + std::to_string(e) + " * 1");
    }
}

/// Certificate for the AS extension generated by a root of X^p - X - b over K.
inline ExtensionCert as_extension_cert(const Series& b, const FieldDesc& K, int budget)
{
    if (!K.is_member(b)) throw Error("as_extension_cert: b is not certified in K");
    ExtensionCert cert;
    cert.id = "as-root";
    cert.base = K;
    cert.kind = ExtKind::artin_schreier;
    auto root = as_root_ex(b);
    cert.generator = root.theta;
    cert.min_poly = as_polynomial(b);
    cert.defining_element = b;
    cert.provenance = {"as_root", "b = " + b.str(), "budget = " + std::to_string(budget)};
    cert.check("min_poly residual", residual_vanishes(cert.min_poly, cert.generator), eval_poly(cert.min_poly, cert.generator).str());
    ValueSetOptions opt;
    opt.tail = as_tail_schema(b, K);
    cert.value_set = value_set(cert.generator, K, budget, opt);
    cert.dist = distance_of_sample(cert.value_set);
    defect_criteria(cert);
    if (cert.claims.defect && *cert.claims.defect > 1 && cert.dist.exact() && cert.dist.hi == Cut::minus(ExtRat(0))) {
        cert.claims.classification = Classification::independent;
        cert.claims.classification_rule = "dist_equals_0-";
    }
    return cert;
}

// ---------------------------------------------------------------------------
// The inseparable transformation.

struct InseparableTransform {
    Polynomial p1; // Y^p - d^{p-1} Y - eta^p
    Polynomial p2; // X^p - X - eta^p / d^p
    Series theta_tilde;
    Series theta;
    ExtensionCert cert;
};

inline bool witness_values_agree(const Series& gen, const InitialSegmentSample& s, const ExtRat& prec, std::string& detail)
{
    for (const auto& r : s.realized) {
        auto v = certified_distance_value(gen, r.witness, prec);
        if (!v || *v != r.value) {
            detail = "witness " + r.witness.str() + ": expected " + r.value.str() + ", got " + (v ? v->str() : "uncertified");
            return false;
        }
    }
    return true;
}

inline InseparableTransform transform_inseparable(const Series& eta, const FieldDesc& K, const Series& d, int budget,
                                                  const std::optional<InitialSegmentSample>& eta_sample = std::nullopt)
{
    const auto& ctx = K.ctx;
    if (ctx->mode() != Mode::equal_char) throw Error("transform_inseparable: requires equal characteristic");
    const std::int64_t p = ctx->p();
    Series eta_p = eta.frobenius();
    if (!K.is_member(eta_p)) throw Error("transform_inseparable: eta^p is not certified in K");
    if (!d.is_exact() || !K.is_member(d) || d.empty()) throw Error("transform_inseparable: d must be a nonzero exact element of K");

    InitialSegmentSample es = eta_sample ? *eta_sample : value_set(eta, K, budget);
    if (!es.upper.bound().is_finite()) throw Error("transform_inseparable: v(eta - K) has no certified finite upper bound");
    const ExtRat veta = eta.valuation(), vd = d.valuation();
    const ExtRat lhs = scale(vd, Rational(p - 1));
    if (!(segment_affine(es.upper, p, -veta) <= Cut::minus(lhs)))
        throw Error("transform_inseparable: condition (p-1) vd > p v(eta-K) - v eta fails: " + lhs.str() + " vs " +
                    segment_affine(es.upper, p, -veta).str());

    Series dp = d.pow(p);
    Series b = eta_p / dp;
    Series theta = as_root(b);
    Series theta_tilde = d * theta;

    InseparableTransform out;
    {
        std::vector<Series> c1(static_cast<std::size_t>(p + 1), Series::zero(ctx));
        c1[0] = -eta_p;
        c1[1] = -d.pow(p - 1);
        c1[static_cast<std::size_t>(p)] = Series::one(ctx);
        out.p1 = Polynomial(std::move(c1));
    }
    out.p2 = as_polynomial(b);
    out.theta = theta;
    out.theta_tilde = theta_tilde;

    ExtensionCert& cert = out.cert;
    cert.base = K;
    cert.kind = ExtKind::artin_schreier;
    cert.generator = theta;
    cert.min_poly = out.p2;
    cert.defining_element = b;
    cert.provenance = {"transform_inseparable", "eta = " + eta.str(), "d = " + d.str(), "budget = " + std::to_string(budget)};

    const ExtRat expected = scale(lhs + veta, Rational(1) / p);
    Series diff = eta - theta_tilde;
    auto vdiff = diff.certified_valuation();
    cert.check("v(theta_tilde) = v(eta)", theta_tilde.valuation() == veta, theta_tilde.valuation().str());
    cert.check("v(eta - theta_tilde) = ((p-1)vd + v eta)/p", vdiff && *vdiff == expected,
               (vdiff ? vdiff->str() : "uncertified") + " vs " + expected.str());
    cert.check("v(eta - theta_tilde) above v(eta - K)", vdiff && es.upper < Cut::plus(*vdiff), es.upper.str());

    const ExtRat prec = budget_precision(budget);
    std::string detail;
    cert.check("v(theta_tilde - K) = v(eta - K)", witness_values_agree(theta_tilde, es, prec, detail), detail);
    auto ts = translate_sample(es, -vd, [&](const KElem& w) { return KElem{w.num, w.den * d, w.negate}; });
    detail.clear();
    cert.check("v(theta - K) = v(eta - K) - vd", witness_values_agree(theta, ts, prec, detail), detail);
    if (K.support_lattice) {
        auto fresh = value_set(theta, K, 1);
        cert.check("lattice upper bound of theta", fresh.upper == ts.upper, fresh.upper.str() + " vs " + ts.upper.str());
    }
    cert.check("min_poly residual", residual_vanishes(out.p2, theta), eval_poly(out.p2, theta).str());
    cert.check("p1 residual", residual_vanishes(out.p1, theta_tilde), eval_poly(out.p1, theta_tilde).str());

    cert.value_set = ts;
    cert.dist = distance_of_sample(ts);
    defect_criteria(cert);
    // Provenance rule: dependent when the purely inseparable witness is immediate.
    bool eta_immediate = es.no_max == Verdict::proved;
    if (cert.claims.defect && *cert.claims.defect > 1 && eta_immediate) {
        cert.claims.classification = Classification::dependent;
        cert.claims.classification_rule = "provenance_inseparable";
    } else if (cert.claims.defect && *cert.claims.defect == 1) {
        cert.claims.classification = Classification::none;
        cert.claims.classification_rule = "no_defect";
    }
    return out;
}

struct AsFamily {
    std::vector<ExtensionCert> certs;
    InitialSegmentSample eta_sample;
    bool pairwise_distinct = false;
};

inline AsFamily as_family(const Series& eta, const FieldDesc& K, const Series& d, int N, int budget)
{
    if (N < 1) throw Error("as_family: N must be positive");
    AsFamily fam;
    fam.eta_sample = value_set(eta, K, budget);
    const auto& es = fam.eta_sample;
    const ExtRat vd = d.valuation();
    bool hyp = false;
    for (const auto& r : es.realized)
        if (r.value.is_finite() && es.upper <= Cut::minus(r.value + vd)) hyp = true;
    if (!hyp) throw Error("as_family: no realized alpha with alpha + vd above v(eta - K)");

    Series dn = Series::one(K.ctx);
    std::vector<std::vector<ExtRat>> seen;
    std::set<std::string> polys;
    bool distinct = true;
    for (int n = 1; n <= N; ++n) {
        dn = dn * d;
        auto tr = transform_inseparable(eta, K, dn, budget, es);
        tr.cert.id = "as-" + std::to_string(n);
        tr.cert.provenance.push_back("family member n = " + std::to_string(n));
        auto vals = tr.cert.value_set.values();
        bool fresh = std::find(seen.begin(), seen.end(), vals) == seen.end();
        bool new_poly = polys.insert(tr.cert.min_poly.str()).second;
        tr.cert.check("sample distinct from earlier members", fresh);
        tr.cert.check("min_poly distinct from earlier members", new_poly);
        distinct = distinct && fresh && new_poly;
        seen.push_back(std::move(vals));
        fam.certs.push_back(std::move(tr.cert));
    }
    fam.pairwise_distinct = distinct;
    return fam;
}

/// First enumerated a in K with a^{1/p} certified outside K^c; none on a perfect schema.
inline std::optional<Series> imperfection_witness(const FieldDesc& K, int budget)
{
    if (K.ctx->mode() != Mode::equal_char) throw Error("imperfection_witness: requires equal characteristic");
    if (K.perfect) return std::nullopt;
    for (const auto& c : enumerate_elements(K, budget)) {
        if (c.negate || c.den != Series::one(K.ctx) || c.num.empty()) continue;
        Series eta = c.num.pth_root();
        if (K.is_member(eta)) continue;
        if (in_completion(eta, K, budget) == Membership::no) return eta;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sigma samples.

enum class SigmaVerdict { independent_consistent, dependent_evidence, unknown };

inline const char* to_string(SigmaVerdict v)
{
    switch (v) {
    case SigmaVerdict::independent_consistent: return "independent_consistent";
    case SigmaVerdict::dependent_evidence: return "dependent_evidence";
    default: return "unknown";
    }
}

struct SigmaSample {
    std::vector<ExtRat> values;
    std::vector<std::string> f_witnesses;
    SigmaVerdict verdict = SigmaVerdict::unknown;
    std::string rule = "none";
};

namespace detail {

inline void sigma_verdict(SigmaSample& out, const ExtensionCert& cert, const ExtRat& shift)
{
    // Values of f = gen - c are shift - v(gen - c); the certificate bounds them.
    const auto& s = cert.value_set;
    bool all_positive = std::all_of(out.values.begin(), out.values.end(), [](const ExtRat& v) { return v > ExtRat(0); });
    if (!all_positive) return;
    if (s.no_max == Verdict::proved && s.upper.bound() == shift && !s.upper.attained()) {
        out.verdict = SigmaVerdict::independent_consistent;
        out.rule = "accumulate_at_0";
    } else if (s.upper.bound().is_finite() && s.upper.bound() < shift) {
        out.verdict = SigmaVerdict::dependent_evidence;
        out.rule = "bounded_away_from_0";
    }
}

} // namespace detail

inline SigmaSample sigma_sample(const ExtensionCert& cert, int budget)
{
    if (cert.kind != ExtKind::artin_schreier) throw Error("sigma_sample: unsupported kind (use the Kummer overload)");
    const auto& ctx = cert.generator.context();
    const Series& th = cert.generator;
    const ExtRat vth = th.valuation();
    SigmaSample out;
    // (theta+1)^j - theta^j has leading term j*theta^{j-1}, so every f = theta^j gives -v(theta).
    if (vth.is_finite()) {
        out.values.push_back(-vth);
        out.f_witnesses.push_back("theta^j, 1 <= j < p");
    }
    const ExtRat prec = budget_precision(budget);
    for (const auto& r : cert.value_set.realized) {
        if (!r.value.is_finite()) continue;
        auto v = certified_distance_value(th, r.witness, prec);
        if (!v || !v->is_finite()) continue;
        out.values.push_back(-*v); // sigma f - f = 1
        out.f_witnesses.push_back("theta - (" + r.witness.str() + ")");
    }
    detail::sigma_verdict(out, cert, ExtRat(0));
    return out;
}

} // namespace vfield
