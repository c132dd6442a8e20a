#pragma once

// Extension certificates shared by the Artin-Schreier and Kummer pipelines.

#include <string>
#include <vector>

#include "approx.hpp"

namespace vfield {

enum class ExtKind { artin_schreier, kummer, purely_inseparable };

inline const char* to_string(ExtKind k)
{
    switch (k) {
    case ExtKind::artin_schreier: return "artin_schreier";
    case ExtKind::kummer: return "kummer";
    default: return "purely_inseparable";
    }
}

inline ExtKind parse_ext_kind(std::string_view s)
{
    if (s == "artin_schreier") return ExtKind::artin_schreier;
    if (s == "kummer") return ExtKind::kummer;
    if (s == "purely_inseparable") return ExtKind::purely_inseparable;
    throw Error("unknown extension kind: " + std::string(s));
}

enum class Classification { independent, dependent, super_dependent, unknown, none };

inline const char* to_string(Classification c)
{
    switch (c) {
    case Classification::independent: return "independent";
    case Classification::dependent: return "dependent";
    case Classification::super_dependent: return "super_dependent";
    case Classification::none: return "none";
    default: return "unknown";
    }
}

inline Classification parse_classification(std::string_view s)
{
    for (auto c : {Classification::independent, Classification::dependent, Classification::super_dependent,
                   Classification::unknown, Classification::none})
        if (s == to_string(c)) return c;
    throw Error("unknown classification: " + std::string(s));
}

struct Claim {
    Verdict verdict = Verdict::unknown;
    std::string rule = "none";
    friend bool operator==(const Claim&, const Claim&) = default;
};

struct Claims {
    Claim unique_extension;
    Claim immediate;
    std::optional<std::int64_t> defect; // p^nu when known
    std::string defect_rule = "none";
    std::int64_t ram_index = 0;         // 0 when unknown
    Classification classification = Classification::unknown;
    std::string classification_rule = "none";
    friend bool operator==(const Claims&, const Claims&) = default;
};

/// A recorded equality or inequality that verify re-executes.
struct Check {
    std::string name;
    bool passed = false;
    std::string detail;
    friend bool operator==(const Check&, const Check&) = default;
};

struct ExtensionCert {
    std::string id;
    FieldDesc base;
    ExtKind kind = ExtKind::artin_schreier;
    Series generator;
    Polynomial min_poly;
    /// Element of K defining the extension: b for X^p - X - b, eta^p for Kummer.
    Series defining_element;
    InitialSegmentSample value_set;
    CutEnclosure dist;
    Claims claims;
    std::vector<Check> checks;
    std::vector<std::string> provenance;

    bool all_checks_pass() const
    {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
    }

    void check(std::string name, bool ok, std::string detail = {})
    {
        checks.push_back({std::move(name), ok, std::move(detail)});
    }
};

/// f(x), using Frobenius for the X^p term in characteristic p (no precision loss there).
inline Series eval_poly(const Polynomial& f, const Series& x)
{
    const auto& ctx = x.context();
    if (ctx->mode() != Mode::equal_char) return f(x);
    Series acc = Series::zero(ctx);
    for (int i = 0; i <= f.degree(); ++i) {
        const Series& c = f.coefficient(i);
        if (c.is_exact_zero()) continue;
        Series xi = i == ctx->p() ? x.frobenius() : x.pow(i);
        acc = acc + c * xi;
    }
    return acc;
}

/// f(x) vanishes on certified terms.
inline bool residual_vanishes(const Polynomial& f, const Series& x) { return eval_poly(f, x).empty(); }

} // namespace vfield
