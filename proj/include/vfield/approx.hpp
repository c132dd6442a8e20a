#pragma once

// Certified samples of v(a-K), distances dist(a,K), the semitame conditions
// and the defect formula.

#include <algorithm>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "field.hpp"

namespace vfield {

struct SampleValue {
    ExtRat value;
    KElem witness;
    std::string source; // "enumerate" | "prefix" | "translated"
};

struct InitialSegmentSample {
    std::vector<SampleValue> realized; // strictly increasing values
    Cut upper = Cut(ExtRat::pos_inf(), false);
    std::string upper_rule = "none";   // "support_lattice" | "schema_tail" | "assumed" | "none"
    Verdict no_max = Verdict::unknown;
    std::string no_max_rule = "none";
    int budget_used = 0;

    std::vector<ExtRat> values() const
    {
        std::vector<ExtRat> v;
        for (const auto& r : realized) v.push_back(r.value);
        return v;
    }

    bool contains_value(const ExtRat& x) const
    {
        return std::any_of(realized.begin(), realized.end(), [&](const SampleValue& r) { return r.value == x; });
    }

    std::optional<SampleValue> maximum() const
    {
        if (no_max != Verdict::refuted || realized.empty()) return std::nullopt;
        return realized.back();
    }
};

/// Declares that a = sum_{i >= 1} m^{1/p^i} (+ terms of positive value) with
/// m a monomial of negative value: over a directed union containing all
/// m^{1/p^i}, the partial sums certify strictly increasing values with limit 0.
struct TailSchema {
    Rational limit{0};
    std::string description;
};

struct ValueSetOptions {
    bool prefix_witnesses = true;
    std::optional<TailSchema> tail;
    /// Input-assumed upper bound (used only where no certificate exists).
    std::optional<Cut> assumed_upper;
};

inline ExtRat budget_precision(int budget) { return ExtRat(Rational(budget)); }

/// Value v(a - c) if certified; +inf for an exact zero difference.
inline std::optional<ExtRat> certified_distance_value(const Series& a, const KElem& c, const ExtRat& prec)
{
    Series d = a - c.materialize(prec);
    if (d.is_exact_zero()) return ExtRat::pos_inf();
    return d.certified_valuation();
}

namespace detail {

inline void insert_value(std::map<ExtRat, SampleValue>& acc, SampleValue v)
{
    acc.emplace(v.value, std::move(v)); // first witness wins
}

} // namespace detail

inline InitialSegmentSample value_set(const Series& a, const FieldDesc& K, int budget, const ValueSetOptions& opt = {})
{
    if (budget <= 0) throw Error("value_set: budget must be positive");
    if (!a.context()->same_session(*K.ctx)) throw Error("value_set: element and field from different sessions");
    const ExtRat prec = max(budget_precision(budget), a.precision().is_finite() ? a.precision() : budget_precision(budget));
    std::map<ExtRat, SampleValue> acc;

    for (const auto& c : enumerate_elements(K, budget))
        if (auto v = certified_distance_value(a, c, prec)) detail::insert_value(acc, {*v, c, "enumerate"});

    if (opt.prefix_witnesses) {
        for (const auto& e : a.support()) {
            Series pre = a.prefix_below(e);
            if (!K.is_member(pre)) break;
            KElem c = KElem::of(pre);
            if (auto v = certified_distance_value(a, c, prec)) detail::insert_value(acc, {*v, c, "prefix"});
        }
        if (a.is_exact() && K.is_member(a)) detail::insert_value(acc, {ExtRat::pos_inf(), KElem::of(a), "prefix"});
    }

    InitialSegmentSample s;
    s.budget_used = budget;
    for (auto& [v, sv] : acc) s.realized.push_back(std::move(sv));

    if (opt.tail) {
        if (!K.directed_union()) throw Error("value_set: tail schema needs a directed-union field");
        s.upper = Cut(ExtRat(opt.tail->limit), false);
        s.upper_rule = "schema_tail";
        s.no_max = Verdict::proved;
        s.no_max_rule = "schema_tail";
    } else {
        if (K.support_lattice) {
            for (const auto& e : a.support())
                if (!K.support_lattice->contains(e)) {
                    s.upper = Cut(ExtRat(e), true);
                    s.upper_rule = "support_lattice";
                    break;
                }
        }
        if (s.upper_rule == "none" && opt.assumed_upper) {
            s.upper = *opt.assumed_upper;
            s.upper_rule = "assumed";
        }
        if (!s.realized.empty()) {
            const ExtRat& top = s.realized.back().value;
            if (top.is_pos_inf() || (s.upper.attained() && top == s.upper.bound())) {
                s.no_max = Verdict::refuted;
                s.no_max_rule = top.is_pos_inf() ? "element_of_K" : "witness_attains_upper";
            }
        }
    }
    for (const auto& r : s.realized) {
        bool inside = r.value.is_pos_inf() ? s.upper.bound().is_pos_inf() : s.upper.contains(r.value.value());
        if (!inside) throw Error("value_set: realized value " + r.value.str() + " exceeds the upper bound " + s.upper.str());
    }
    return s;
}

struct DistanceResult {
    CutEnclosure dist;
    InitialSegmentSample sample;
};

inline CutEnclosure distance_of_sample(const InitialSegmentSample& s)
{
    if (s.realized.empty()) return CutEnclosure(Cut(ExtRat::neg_inf(), false), s.upper);
    if (s.realized.back().value.is_pos_inf()) return CutEnclosure(Cut(ExtRat::pos_inf(), false), Cut(ExtRat::pos_inf(), false));
    auto vals = s.values();
    Cut lo = cut_of_sample(vals, Side::plus);
    if (s.no_max == Verdict::proved && s.upper_rule == "schema_tail") return CutEnclosure(s.upper, s.upper);
    if (s.no_max == Verdict::refuted) return CutEnclosure(lo, lo);
    return CutEnclosure(lo, s.upper);
}

inline DistanceResult distance(const Series& a, const FieldDesc& K, int budget, const ValueSetOptions& opt = {})
{
    auto s = value_set(a, K, budget, opt);
    auto d = distance_of_sample(s);
    return {d, std::move(s)};
}

enum class Membership { yes, no, unknown };

inline const char* to_string(Membership m)
{
    return m == Membership::yes ? "yes" : m == Membership::no ? "no" : "unknown";
}

inline Membership in_completion(const Series& a, const FieldDesc& K, int budget, const ValueSetOptions& opt = {})
{
    auto s = value_set(a, K, budget, opt);
    if (!s.realized.empty() && s.realized.back().value.is_pos_inf()) return Membership::yes;
    if (s.upper.bound().is_finite() && s.upper_rule != "assumed") return Membership::no;
    return Membership::unknown;
}

/// Shift every realized value by `shift` and map witnesses through `f`.
template <class F>
InitialSegmentSample translate_sample(const InitialSegmentSample& s, const ExtRat& shift, F&& witness_map)
{
    InitialSegmentSample out = s;
    for (auto& r : out.realized) {
        r.value = r.value + shift;
        r.witness = witness_map(r.witness);
        r.source = "translated";
    }
    out.upper = Cut(out.upper.bound() + shift, out.upper.attained());
    return out;
}

inline bool same_values(const InitialSegmentSample& a, const InitialSegmentSample& b)
{
    return a.values() == b.values() && a.upper == b.upper;
}

/// p^nu with degree = p^nu * e * f.
inline std::int64_t defect_of(std::int64_t degree, std::int64_t ram_index, std::int64_t res_degree, std::int64_t p)
{
    if (degree < 1 || ram_index < 1 || res_degree < 1 || p < 2) throw Error("defect_of: inputs must be >= 1");
    if (degree % (ram_index * res_degree) != 0) throw Error("defect_of: e*f does not divide the degree");
    std::int64_t q = degree / (ram_index * res_degree), r = q;
    while (r % p == 0) r /= p;
    if (r != 1) throw Error("defect_of: quotient " + std::to_string(q) + " is not a power of p");
    return q;
}

// ---------------------------------------------------------------------------
// Theorem 2.1 condition table.

struct ConditionVerdict {
    Verdict verdict = Verdict::unknown;
    std::string rule;
    std::optional<Series> witness;
};

struct SemitameReport {
    ConditionVerdict drst, perfect_residue;
    std::array<ConditionVerdict, 6> cond; // a..f

    bool consistent() const
    {
        bool any_proved = false, any_refuted = false;
        for (const auto& c : cond) {
            any_proved |= c.verdict == Verdict::proved;
            any_refuted |= c.verdict == Verdict::refuted;
        }
        return !(any_proved && any_refuted);
    }
};

/// First enumerated a in K with an exponent outside p*Gamma_0 (so a^{1/p} has an
/// exponent outside Gamma_0 and v(a^{1/p} - K) is bounded).
inline std::optional<Series> lattice_non_pth_power(const FieldDesc& K, int budget)
{
    if (!K.support_lattice) return std::nullopt;
    const auto& L = *K.support_lattice;
    for (const auto& c : enumerate_elements(K, budget)) {
        if (c.den != Series::one(K.ctx) || c.negate || c.num.empty()) continue;
        for (const auto& e : c.num.support())
            if (!L.contains(e / K.p())) return c.num;
    }
    return std::nullopt;
}

inline SemitameReport semitame_report(const FieldDesc& K, int budget)
{
    if (K.ctx->mode() != Mode::equal_char) throw Error("semitame_report: requires equal characteristic");
    SemitameReport r;
    auto [pd, step] = K.value_group.p_divisible();
    r.drst = {pd, pd == Verdict::refuted ? "value_group_step" : "value_group_closure", std::nullopt};
    if (step) r.drst.witness = Series::monomial(K.ctx, FqElem{1}, *step * K.p());
    r.perfect_residue = {Verdict::proved, "finite_field_frobenius", std::nullopt};

    ConditionVerdict c, d, e, f;
    if (K.perfect) {
        c = d = e = f = {Verdict::proved, "schema_perfect", std::nullopt};
    } else if (auto a = lattice_non_pth_power(K, budget)) {
        Series root = a->pth_root();
        // v(a^{1/p} - K) <= least exponent outside Gamma_0: a^{1/p} is not in K^c.
        e = {Verdict::refuted, "support_lattice", root};
        d = {Verdict::refuted, "support_lattice", *a};
        c = {Verdict::refuted, "support_lattice", *a};
        // v(a - K^p) bounded: K^p has support in p*Gamma_0.
        f = {Verdict::refuted, "support_lattice", *a};
    } else {
        c = d = e = f = {Verdict::unknown, "budget", std::nullopt};
    }
    ConditionVerdict a;
    if (r.drst.verdict == Verdict::refuted)
        a = {Verdict::refuted, "DRst", r.drst.witness};
    else if (c.verdict == Verdict::refuted)
        a = {Verdict::refuted, "DRvr", c.witness};
    else if (r.drst.verdict == Verdict::proved && c.verdict == Verdict::proved)
        a = {Verdict::proved, "DRst+DRvr", std::nullopt};
    else
        a = {Verdict::unknown, "budget", std::nullopt};
    ConditionVerdict b = a;
    b.rule = "equivalent_to_a";
    r.cond = {a, b, c, d, e, f};
    return r;
}

} // namespace vfield
