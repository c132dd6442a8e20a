#pragma once

// Finitely described base fields K inside the ambient series field, and the
// deterministic element enumerator used as a witness oracle.

#include <array>
#include <string>
#include <vector>

#include "ordcut.hpp"
#include "series.hpp"

namespace vfield {

enum class FieldKind { rational_function, laurent, tower, directed_union, padic_base, padic_tower };

inline const char* to_string(FieldKind k)
{
    switch (k) {
    case FieldKind::rational_function: return "rational_function";
    case FieldKind::laurent: return "laurent";
    case FieldKind::tower: return "tower";
    case FieldKind::directed_union: return "directed_union";
    case FieldKind::padic_base: return "padic_base";
    default: return "padic_tower";
    }
}

/// An element of K given as num/den with num, den exact finite series whose
/// support lies in vK; `negate` stands in for the sign in mixed mode, where
/// negative integers have infinite digit expansions.
struct KElem {
    Series num;
    Series den;
    bool negate = false;

    static KElem of(const Series& s) { return {s, Series::one(s.context()), false}; }

    bool is_zero() const { return num.is_exact_zero(); }

    /// The element as a series, certified to absolute precision `prec` (or exact).
    Series materialize(const ExtRat& prec) const
    {
        Series out;
        if (num.empty())
            out = Series::zero(num.context());
        else if (den.terms().size() == 1 && (den.mode() == Mode::equal_char || den.leading_coefficient() == FqElem{1}))
            out = num / den;
        else
            out = (num * den.invert(prec - num.valuation())).truncated(prec);
        return negate ? -out : out;
    }

    std::string str() const
    {
        std::string s = den == Series::one(num.context()) ? num.str() : "(" + num.str() + ")/(" + den.str() + ")";
        return negate ? "-(" + s + ")" : s;
    }
};

struct FieldDesc {
    std::string preset;
    FieldKind kind = FieldKind::rational_function;
    ContextPtr ctx;
    std::vector<std::string> generators;
    /// Certified: every element of K has support in this group.
    std::optional<ValueGroupDesc> support_lattice;
    ValueGroupDesc value_group;
    std::int64_t residue_q = 2;
    bool complete = false;
    /// Schema metadata: K^{1/p} = K.
    bool perfect = false;

    std::int64_t p() const { return ctx->p(); }
    bool directed_union() const { return kind == FieldKind::directed_union || kind == FieldKind::padic_tower; }

    /// Membership of an exact finite series: support in vK. Coefficients are
    /// always in the residue field of the session.
    bool is_member(const Series& s) const
    {
        if (!s.is_exact()) return false;
        for (const auto& e : s.support())
            if (!value_group.contains(e)) return false;
        return true;
    }

    bool is_member(const KElem& c) const { return is_member(c.num) && is_member(c.den) && !c.den.empty(); }

    /// Deepest tower level j with t^{1/p^j} representable under D.
    int max_level() const
    {
        if (!directed_union()) return 0;
        int j = 0;
        for (std::int64_t pj = p(); ctx->D() % pj == 0; pj *= p()) ++j;
        return j;
    }
};

inline FieldDesc make_field(const std::string& preset, const ContextPtr& ctx)
{
    const std::int64_t p = ctx->p();
    FieldDesc K;
    K.preset = preset;
    K.ctx = ctx;
    K.residue_q = ctx->q();
    ValueGroupDesc Z({Rational(1)}, false, p), Zp({Rational(1)}, true, p);
    const bool equal = ctx->mode() == Mode::equal_char;
    if (preset == "fp_t" || preset == "laurent") {
        if (!equal) throw Error(preset + " requires equal characteristic");
        K.kind = preset == "fp_t" ? FieldKind::rational_function : FieldKind::laurent;
        K.generators = {"t"};
        K.support_lattice = Z;
        K.value_group = Z;
        K.complete = preset == "laurent";
    } else if (preset == "pdiv_tower") {
        if (!equal) throw Error(preset + " requires equal characteristic");
        K.kind = FieldKind::directed_union;
        K.generators = {"t", "t^{1/p^i}, i >= 1"};
        K.support_lattice = Zp;
        K.value_group = Zp;
        K.perfect = true;
    } else if (preset == "qp") {
        if (equal) throw Error(preset + " requires mixed characteristic");
        K.kind = FieldKind::padic_base;
        K.generators = {"p"};
        K.support_lattice = Z;
        K.value_group = Z;
    } else if (preset == "qp_pdiv_tower") {
        if (equal) throw Error(preset + " requires mixed characteristic");
        K.kind = FieldKind::padic_tower;
        K.generators = {"p", "p^{1/p^i}, i >= 1"};
        K.support_lattice = Zp;
        K.value_group = Zp;
    } else {
        throw Error("unknown field preset: " + preset);
    }
    if (K.directed_union() && K.max_level() < 1) throw Error("denominator bound D admits no tower level");
    return K;
}

namespace detail {

// All polynomials sum c_i u^i with prime-field coefficients and degree <= r,
// in counting order of the coefficient vector.
inline std::vector<Series> small_polys(const ContextPtr& ctx, const Rational& u, int r, bool monic_only)
{
    std::vector<Series> out;
    const std::int64_t p = ctx->p();
    for (int deg = 0; deg <= r; ++deg) {
        std::int64_t count = 1;
        for (int i = 0; i < deg; ++i) count *= p;
        for (std::int64_t idx = 0; idx < count; ++idx) {
            Series s = Series::monomial(ctx, FqElem{1}, u * deg);
            if (!monic_only) s = Series::zero(ctx);
            std::int64_t c = idx;
            for (int i = 0; i < deg; ++i, c /= p)
                if (c % p) s = s + Series::monomial(ctx, FqElem{static_cast<std::uint32_t>(c % p)}, u * i);
            if (monic_only || deg == 0) out.push_back(s);
            if (!monic_only)
                for (std::int64_t lead = 1; lead < p; ++lead) {
                    Series t = s + Series::monomial(ctx, FqElem{static_cast<std::uint32_t>(lead)}, u * deg);
                    out.push_back(t);
                }
        }
    }
    return out;
}

inline int rational_degree(std::int64_t p, int height)
{
    int r = 0;
    std::int64_t count = p * p;
    while (r < height && count <= 27) {
        ++r;
        count *= p;
    }
    return r;
}

} // namespace detail

/// Deterministic, monotone-in-height enumeration of elements of K.
inline std::vector<KElem> enumerate_elements(const FieldDesc& K, int height)
{
    if (height < 0) throw Error("enumerate_elements: negative height");
    const auto& ctx = K.ctx;
    const std::int64_t p = K.p();
    std::vector<KElem> out;
    Series one = Series::one(ctx);
    auto push = [&](Series num, Series den, bool neg = false) { out.push_back({std::move(num), std::move(den), neg}); };
    push(Series::zero(ctx), one);

    const int levels = K.directed_union() ? std::min(height, K.max_level()) : 0;
    if (ctx->mode() == Mode::equal_char) {
        const int r = detail::rational_degree(p, height);
        for (int j = 0; j <= levels; ++j) {
            Rational u = make_rational(1, 1) / boost::multiprecision::pow(BigInt(p), j);
            for (int k = 0; k <= height; ++k) {
                push(Series::monomial(ctx, FqElem{1}, u * k), one);
                if (k > 0) push(one, Series::monomial(ctx, FqElem{1}, u * k));
            }
            auto nums = detail::small_polys(ctx, u, r, false);
            auto dens = detail::small_polys(ctx, u, r, true);
            for (const auto& d : dens)
                for (const auto& n : nums)
                    if (!n.empty()) push(n, d);
        }
        return out;
    }

    // Mixed characteristic: small rationals, then tower monomials.
    const std::int64_t b = height + 1;
    for (std::int64_t n = 1; n <= b; ++n) {
        push(Series::from_int(ctx, n), one);
        push(Series::from_int(ctx, n), one, true);
    }
    for (std::int64_t d = 2; d <= b; ++d)
        for (std::int64_t n = 1; n <= b; ++n) {
            if (boost::multiprecision::gcd(BigInt(n), BigInt(d)) != 1) continue;
            push(Series::from_int(ctx, n), Series::from_int(ctx, d));
            push(Series::from_int(ctx, n), Series::from_int(ctx, d), true);
        }
    for (int j = 1; j <= levels; ++j) {
        Rational u = make_rational(1, 1) / boost::multiprecision::pow(BigInt(p), j);
        for (std::int64_t k = 1; k <= height; ++k) {
            for (const Rational& e : std::array<Rational, 2>{Rational(u * k), Rational(-u * k)}) {
                Series m = Series::monomial(ctx, FqElem{1}, e);
                push(m, one);
                push(one + m, one);
                push(m, one, true);
                push(one + m, one, true);
            }
        }
    }
    return out;
}

} // namespace vfield
