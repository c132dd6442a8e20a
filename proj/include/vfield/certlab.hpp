#pragma once

// Session configuration, certificate files, JSON persistence and re-verification.

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "json.hpp"
#include "kummer.hpp"

namespace vfield {

using Json = nlohmann::ordered_json;

inline constexpr int kCertificateVersion = 1;

struct SessionConfig {
    std::int64_t p = 2;
    std::int64_t q = 0; // 0 = p
    Mode mode = Mode::equal_char;
    std::int64_t D = 0; // 0 = mode default
    ExtRat precision = ExtRat(8);
    int budget = 3;
    int height = 0; // 0 = budget
    std::string base;
    std::string out;
    std::uint64_t seed = 1;

    int residue_degree() const
    {
        std::int64_t qq = q == 0 ? p : q;
        int m = 0;
        for (std::int64_t r = 1; r < qq; r *= p) ++m;
        std::int64_t check = 1;
        for (int i = 0; i < m; ++i) check *= p;
        if (check != qq || m < 1) throw Error("q = " + std::to_string(qq) + " is not a power of p = " + std::to_string(p));
        return m;
    }

    ContextPtr context() const
    {
        if (!is_prime(p)) throw Error("p = " + std::to_string(p) + " is not prime");
        int m = residue_degree();
        if (mode == Mode::equal_char) return Context::equal(p, m, D, precision);
        if (m != 1) throw Error("mixed characteristic supports only q = p");
        return Context::mixed(p, D, precision);
    }

    int enumeration_height() const { return height > 0 ? height : budget; }
};

// ---------------------------------------------------------------------------
// JSON encoding. Rationals are "num/den" strings.

inline Json to_json(const ExtRat& x) { return x.str(); }
inline ExtRat ext_from_json(const Json& j) { return ExtRat::parse(j.get<std::string>()); }

inline Json to_json(const Cut& c) { return Json{{"bound", c.bound().str()}, {"attained", c.attained()}}; }
inline Cut cut_from_json(const Json& j) { return Cut(ext_from_json(j.at("bound")), j.at("attained").get<bool>()); }

inline Json to_json(const CutEnclosure& e) { return Json{{"lo", to_json(e.lo)}, {"hi", to_json(e.hi)}}; }
inline CutEnclosure enclosure_from_json(const Json& j) { return CutEnclosure(cut_from_json(j.at("lo")), cut_from_json(j.at("hi"))); }

inline Json to_json(const Series& s)
{
    Json terms = Json::array();
    for (const auto& [k, c] : s.terms()) terms.push_back(Json::array({to_string(s.context()->exponent_of(k)), c.code}));
    return Json{{"precision", s.precision().str()}, {"terms", terms}};
}

inline Series series_from_json(const ContextPtr& ctx, const Json& j)
{
    Series s = Series::zero(ctx, ext_from_json(j.at("precision")));
    for (const auto& t : j.at("terms")) {
        std::uint32_t code = t.at(1).get<std::uint32_t>();
        if (code >= ctx->q()) throw Error("coefficient code out of range for q = " + std::to_string(ctx->q()));
        s = s.with_term(parse_rational(t.at(0).get<std::string>()), FqElem{code});
    }
    return s;
}

inline Json to_json(const KElem& c) { return Json{{"num", to_json(c.num)}, {"den", to_json(c.den)}, {"negate", c.negate}}; }
inline KElem kelem_from_json(const ContextPtr& ctx, const Json& j)
{
    return {series_from_json(ctx, j.at("num")), series_from_json(ctx, j.at("den")), j.at("negate").get<bool>()};
}

inline Json to_json(const Polynomial& f)
{
    Json c = Json::array();
    for (const auto& s : f.coefficients()) c.push_back(to_json(s));
    return c;
}

inline Polynomial polynomial_from_json(const ContextPtr& ctx, const Json& j)
{
    std::vector<Series> c;
    for (const auto& s : j) c.push_back(series_from_json(ctx, s));
    if (c.empty()) return Polynomial();
    return Polynomial(std::move(c));
}

inline Json to_json(const InitialSegmentSample& s)
{
    Json realized = Json::array();
    for (const auto& r : s.realized) realized.push_back(Json{{"value", r.value.str()}, {"witness", to_json(r.witness)}, {"source", r.source}});
    return Json{{"realized", realized},         {"upper", to_json(s.upper)},   {"upper_rule", s.upper_rule},
                {"no_max", to_string(s.no_max)}, {"no_max_rule", s.no_max_rule}, {"budget_used", s.budget_used}};
}

inline InitialSegmentSample sample_from_json(const ContextPtr& ctx, const Json& j)
{
    InitialSegmentSample s;
    for (const auto& r : j.at("realized"))
        s.realized.push_back({ext_from_json(r.at("value")), kelem_from_json(ctx, r.at("witness")), r.at("source").get<std::string>()});
    s.upper = cut_from_json(j.at("upper"));
    s.upper_rule = j.at("upper_rule").get<std::string>();
    s.no_max = parse_verdict(j.at("no_max").get<std::string>());
    s.no_max_rule = j.at("no_max_rule").get<std::string>();
    s.budget_used = j.at("budget_used").get<int>();
    return s;
}

inline Json to_json(const Claim& c) { return Json{{"verdict", to_string(c.verdict)}, {"rule", c.rule}}; }
inline Claim claim_from_json(const Json& j) { return {parse_verdict(j.at("verdict").get<std::string>()), j.at("rule").get<std::string>()}; }

inline Json to_json(const Claims& c)
{
    return Json{{"unique_extension", to_json(c.unique_extension)},
                {"immediate", to_json(c.immediate)},
                {"defect", c.defect ? Json(*c.defect) : Json("unknown")},
                {"defect_rule", c.defect_rule},
                {"ram_index", c.ram_index},
                {"classification", to_string(c.classification)},
                {"classification_rule", c.classification_rule}};
}

inline Claims claims_from_json(const Json& j)
{
    Claims c;
    c.unique_extension = claim_from_json(j.at("unique_extension"));
    c.immediate = claim_from_json(j.at("immediate"));
    if (j.at("defect").is_number_integer()) c.defect = j.at("defect").get<std::int64_t>();
    c.defect_rule = j.at("defect_rule").get<std::string>();
    c.ram_index = j.at("ram_index").get<std::int64_t>();
    c.classification = parse_classification(j.at("classification").get<std::string>());
    c.classification_rule = j.at("classification_rule").get<std::string>();
    return c;
}

inline Json to_json(const ExtensionCert& c)
{
    Json checks = Json::array();
    for (const auto& ch : c.checks) checks.push_back(Json{{"name", ch.name}, {"passed", ch.passed}, {"detail", ch.detail}});
    return Json{{"id", c.id},
                {"base", c.base.preset},
                {"kind", to_string(c.kind)},
                {"generator", to_json(c.generator)},
                {"min_poly", to_json(c.min_poly)},
                {"defining_element", to_json(c.defining_element)},
                {"value_set", to_json(c.value_set)},
                {"dist", to_json(c.dist)},
                {"claims", to_json(c.claims)},
                {"checks", checks},
                {"provenance", c.provenance}};
}

inline ExtensionCert cert_from_json(const ContextPtr& ctx, const Json& j)
{
    ExtensionCert c;
    c.id = j.at("id").get<std::string>();
    c.base = make_field(j.at("base").get<std::string>(), ctx);
    c.kind = parse_ext_kind(j.at("kind").get<std::string>());
    c.generator = series_from_json(ctx, j.at("generator"));
    c.min_poly = polynomial_from_json(ctx, j.at("min_poly"));
    c.defining_element = series_from_json(ctx, j.at("defining_element"));
    c.value_set = sample_from_json(ctx, j.at("value_set"));
    c.dist = enclosure_from_json(j.at("dist"));
    c.claims = claims_from_json(j.at("claims"));
    for (const auto& ch : j.at("checks"))
        c.checks.push_back({ch.at("name").get<std::string>(), ch.at("passed").get<bool>(), ch.at("detail").get<std::string>()});
    c.provenance = j.at("provenance").get<std::vector<std::string>>();
    return c;
}

inline Json to_json(const SessionConfig& c, const ContextPtr& ctx)
{
    return Json{{"p", c.p},
                {"q", ctx->q()},
                {"mode", to_string(c.mode)},
                {"D", ctx->D()},
                {"uniformizer_sign", ctx->uniformizer_sign()},
                {"precision", c.precision.str()},
                {"budget", c.budget},
                {"height", c.enumeration_height()},
                {"base", c.base},
                {"seed", c.seed}};
}

inline SessionConfig config_from_json(const Json& j)
{
    SessionConfig c;
    c.p = j.at("p").get<std::int64_t>();
    c.q = j.at("q").get<std::int64_t>();
    c.mode = parse_mode(j.at("mode").get<std::string>());
    c.D = j.at("D").get<std::int64_t>();
    c.precision = ext_from_json(j.at("precision"));
    c.budget = j.at("budget").get<int>();
    c.height = j.at("height").get<int>();
    c.base = j.at("base").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    return c;
}

/// A standalone sample of v(a - K) (distance outputs).
struct SampleRecord {
    std::string label;
    Series element;
    std::string base;
    InitialSegmentSample sample;
    CutEnclosure dist;
    /// Defining element b when the element is the AS root of b (tail schema source).
    std::optional<Series> as_root_of;
};

inline Json to_json(const SampleRecord& r)
{
    Json j{{"label", r.label}, {"element", to_json(r.element)}, {"base", r.base}, {"sample", to_json(r.sample)}, {"dist", to_json(r.dist)}};
    if (r.as_root_of) j["as_root_of"] = to_json(*r.as_root_of);
    return j;
}

inline SampleRecord sample_record_from_json(const ContextPtr& ctx, const Json& j)
{
    SampleRecord r;
    r.label = j.at("label").get<std::string>();
    r.element = series_from_json(ctx, j.at("element"));
    r.base = j.at("base").get<std::string>();
    r.sample = sample_from_json(ctx, j.at("sample"));
    r.dist = enclosure_from_json(j.at("dist"));
    if (j.contains("as_root_of")) r.as_root_of = series_from_json(ctx, j.at("as_root_of"));
    return r;
}

struct CertificateFile {
    int version = kCertificateVersion;
    SessionConfig config;
    ContextPtr ctx;
    std::string command;
    std::vector<ExtensionCert> certs;
    std::vector<SampleRecord> samples;
    Json results = Json::object();
    std::vector<std::string> log;
};

inline Json to_json(const CertificateFile& f)
{
    Json certs = Json::array(), samples = Json::array();
    for (const auto& c : f.certs) certs.push_back(to_json(c));
    for (const auto& s : f.samples) samples.push_back(to_json(s));
    return Json{{"version", f.version}, {"config", to_json(f.config, f.ctx)}, {"command", f.command}, {"certs", certs},
                {"samples", samples},   {"results", f.results},                {"verification_log", f.log}};
}

/// Writes to a temporary file in the target directory, then renames over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    auto tmp = dir / (path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw Error("cannot open " + tmp.string() + " for writing");
        os << content;
        os.flush();
        if (!os) throw Error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error("rename to " + path.string() + " failed: " + ec.message());
    }
}

inline void save_certificate_file_json(const Json& j, const std::filesystem::path& path) { write_atomic(path, j.dump(2) + "\n"); }
inline void save_certificate_file(const CertificateFile& f, const std::filesystem::path& path) { save_certificate_file_json(to_json(f), path); }

inline Json load_json(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    try {
        return Json::parse(is);
    } catch (const nlohmann::json::exception& e) {
        throw Error("malformed JSON in " + path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Re-verification from stored witnesses (no searches).

struct VerifyReport {
    bool config_mismatch = false;
    std::vector<std::string> mismatches;
    std::vector<std::string> log;

    bool ok() const { return !config_mismatch && mismatches.empty(); }
    int exit_code() const { return ok() ? 0 : 2; }
};

namespace detail {

inline ExtRat sample_precision(const Series& a, const InitialSegmentSample& s)
{
    const ExtRat b = budget_precision(std::max(1, s.budget_used));
    return max(b, a.precision().is_finite() ? a.precision() : b);
}

inline std::optional<Rational> first_exponent_outside(const Series& a, const ValueGroupDesc& L)
{
    for (const auto& e : a.support())
        if (!L.contains(e)) return e;
    return std::nullopt;
}

} // namespace detail

/// Re-derives every value, bound and verdict of a sample of v(a - K).
inline void verify_sample(const std::string& where, const Series& a, const FieldDesc& K, const InitialSegmentSample& s,
                          const CutEnclosure& dist, const std::optional<Series>& as_root_of, VerifyReport& rep)
{
    auto bad = [&](const std::string& m) { rep.mismatches.push_back(where + ": " + m); };
    const ExtRat prec = detail::sample_precision(a, s);
    for (std::size_t i = 0; i < s.realized.size(); ++i) {
        const auto& r = s.realized[i];
        if (i > 0 && !(s.realized[i - 1].value < r.value)) bad("realized values not strictly increasing at index " + std::to_string(i));
        if (r.source != "translated" && !K.is_member(r.witness)) bad("witness " + r.witness.str() + " is not certified in K");
        auto v = certified_distance_value(a, r.witness, prec);
        if (!v)
            bad("witness re-evaluation: v(a - " + r.witness.str() + ") is not certified");
        else if (*v != r.value)
            bad("witness re-evaluation: stored value " + r.value.str() + ", recomputed " + v->str());
        bool inside = r.value.is_pos_inf() ? s.upper.bound().is_pos_inf() : s.upper.contains(r.value.value());
        if (!inside) bad("realized value " + r.value.str() + " exceeds upper " + s.upper.str());
    }

    if (s.upper_rule == "support_lattice") {
        auto e = K.support_lattice ? detail::first_exponent_outside(a, *K.support_lattice) : std::nullopt;
        if (!e || Cut(ExtRat(*e), true) != s.upper) bad("support_lattice upper bound " + s.upper.str() + " not reproduced");
    } else if (s.upper_rule == "schema_tail") {
        auto tail = as_root_of ? as_tail_schema(*as_root_of, K) : std::nullopt;
        if (!tail || Cut(ExtRat(tail->limit), false) != s.upper) bad("schema_tail upper bound " + s.upper.str() + " not reproduced");
    } else if (s.upper_rule == "assumed") {
        rep.log.push_back(where + ": upper bound " + s.upper.str() + " accepted as an input assumption");
    } else if (s.upper_rule == "none") {
        if (!s.upper.bound().is_pos_inf()) bad("upper rule none with finite bound");
    } else {
        bad("unknown upper rule " + s.upper_rule);
    }

    Verdict nm = Verdict::unknown;
    if (s.upper_rule == "schema_tail")
        nm = Verdict::proved;
    else if (!s.realized.empty()) {
        const ExtRat& top = s.realized.back().value;
        if (top.is_pos_inf() || (s.upper.attained() && top == s.upper.bound())) nm = Verdict::refuted;
    }
    if (nm != s.no_max) bad(std::string("no_max stored ") + to_string(s.no_max) + ", recomputed " + to_string(nm));
    auto d = distance_of_sample(s);
    if (!(d == dist)) bad("dist not reproduced: " + d.lo.str() + " .. " + d.hi.str());
}

/// Claims recomputed from the stored sample and kind alone.
inline Claims rederive_claims(const ExtensionCert& stored)
{
    ExtensionCert c = stored;
    c.claims = Claims{};
    c.checks.clear();
    if (c.kind == ExtKind::kummer) {
        classify_kummer_defect(c);
        return c.claims;
    }
    defect_criteria(c);
    auto& cl = c.claims;
    if (cl.defect && *cl.defect > 1 && c.dist.exact() && c.dist.hi == Cut::minus(ExtRat(0))) {
        cl.classification = Classification::independent;
        cl.classification_rule = "dist_equals_0-";
    } else if (cl.defect && *cl.defect > 1 && stored.claims.classification_rule == "provenance_inseparable") {
        cl.classification = Classification::dependent;
        cl.classification_rule = "provenance_inseparable";
    } else if (cl.defect && *cl.defect == 1) {
        cl.classification = Classification::none;
        cl.classification_rule = "no_defect";
    }
    return cl;
}

inline void verify_cert(const ExtensionCert& c, VerifyReport& rep)
{
    const std::string where = "cert " + c.id;
    auto bad = [&](const std::string& m) { rep.mismatches.push_back(where + ": " + m); };
    const auto& ctx = c.generator.context();
    const std::int64_t p = ctx->p();

    std::optional<Series> as_b;
    if (c.kind == ExtKind::artin_schreier) as_b = c.defining_element;
    verify_sample(where, c.generator, c.base, c.value_set, c.dist, as_b, rep);

    if (c.min_poly.coefficients().empty())
        bad("missing min_poly");
    else if (!residual_vanishes(c.min_poly, c.generator))
        bad("min_poly residual does not vanish: " + eval_poly(c.min_poly, c.generator).str());

    if (c.kind == ExtKind::artin_schreier) {
        if (!(c.min_poly == as_polynomial(c.defining_element))) bad("min_poly is not X^p - X - b for the stored b");
        if (!c.base.is_member(c.defining_element)) bad("b is not certified in K");
    } else if (c.kind == ExtKind::kummer) {
        if (!detail::is_one_unit(c.generator)) bad("generator is not a 1-unit");
        if (!(c.generator.pow(p) - c.defining_element).empty()) bad("generator^p differs from the defining element");
    }

    if (c.claims.defect) {
        bool ok = false;
        try {
            ok = c.claims.ram_index > 0 && defect_of(p, c.claims.ram_index, 1, p) == *c.claims.defect;
        } catch (const Error&) {
        }
        if (!ok) bad("defect_of arithmetic fails for defect " + std::to_string(*c.claims.defect));
    }

    try {
        Claims re = rederive_claims(c);
        if (to_json(re).dump() != to_json(c.claims).dump()) bad("claims differ: stored " + to_json(c.claims).dump() + ", recomputed " + to_json(re).dump());
    } catch (const Error& e) {
        bad(std::string("claim re-derivation failed: ") + e.what());
    }

    for (const auto& ch : c.checks)
        if (!ch.passed) bad("recorded check failed: " + ch.name + " [" + ch.detail + "]");
}

inline void verify_semitame(const FieldDesc& K, const Json& j, VerifyReport& rep)
{
    const auto& ctx = K.ctx;
    const std::int64_t p = ctx->p();
    auto fresh = semitame_report(K, j.value("budget", 1));
    static const char* names[] = {"a", "b", "c", "d", "e", "f"};
    for (int i = 0; i < 6; ++i) {
        const auto& stored = j.at("conditions").at(names[i]);
        if (stored.at("verdict").get<std::string>() != to_string(fresh.cond[static_cast<std::size_t>(i)].verdict) ||
            stored.at("rule").get<std::string>() != fresh.cond[static_cast<std::size_t>(i)].rule)
            rep.mismatches.push_back(std::string("semitame (") + names[i] + "): verdict not reproduced");
        if (stored.contains("witness")) {
            Series w = series_from_json(ctx, stored.at("witness"));
            bool ok = false;
            const std::string& rule = fresh.cond[static_cast<std::size_t>(i == 1 ? 0 : i)].rule;
            if ((rule == "support_lattice" || rule == "DRvr") && K.support_lattice) {
                Series a = i == 4 ? w.frobenius() : w;
                ok = K.is_member(a) && detail::first_exponent_outside(a.pth_root(), *K.support_lattice).has_value();
            } else if (rule == "DRst") {
                auto e = w.support();
                ok = K.is_member(w) && e.size() == 1 && !K.value_group.contains(e.front() / p);
            }
            if (!ok) rep.mismatches.push_back(std::string("semitame (") + names[i] + "): stored witness " + w.str() + " does not refute");
        }
    }
}

/// Re-verifies a certificate file; `session`, when given, must match the file's configuration.
inline VerifyReport verify_certificate(const Json& file, const std::optional<SessionConfig>& session = std::nullopt)
{
    VerifyReport rep;
    try {
        if (!file.contains("version") || file.at("version").get<int>() != kCertificateVersion) {
            rep.config_mismatch = true;
            rep.mismatches.push_back("unsupported schema version");
            return rep;
        }
        SessionConfig cfg = config_from_json(file.at("config"));
        ContextPtr ctx = cfg.context();
        if (ctx->D() != cfg.D || ctx->q() != file.at("config").at("q").get<std::int64_t>() ||
            ctx->uniformizer_sign() != file.at("config").at("uniformizer_sign").get<int>()) {
            rep.config_mismatch = true;
            rep.mismatches.push_back("config: stored session parameters are inconsistent");
            return rep;
        }
        if (session) {
            ContextPtr sctx = session->context();
            if (!sctx->same_session(*ctx)) {
                rep.config_mismatch = true;
                rep.mismatches.push_back("config mismatch: file has p = " + std::to_string(ctx->p()) + ", q = " + std::to_string(ctx->q()) +
                                         ", mode = " + to_string(ctx->mode()) + ", D = " + std::to_string(ctx->D()) +
                                         "; session has p = " + std::to_string(sctx->p()) + ", q = " + std::to_string(sctx->q()) +
                                         ", mode = " + to_string(sctx->mode()) + ", D = " + std::to_string(sctx->D()));
                return rep;
            }
        }
        for (const auto& jc : file.at("certs")) {
            ExtensionCert c = cert_from_json(ctx, jc);
            verify_cert(c, rep);
            if (to_json(c).dump() != jc.dump()) rep.mismatches.push_back("cert " + c.id + ": stored JSON is not in canonical form");
        }
        for (const auto& js : file.at("samples")) {
            SampleRecord r = sample_record_from_json(ctx, js);
            FieldDesc K = make_field(r.base, ctx);
            if (r.as_root_of && !residual_vanishes(as_polynomial(*r.as_root_of), r.element))
                rep.mismatches.push_back("sample " + r.label + ": element is not the AS root of the stored b");
            verify_sample("sample " + r.label, r.element, K, r.sample, r.dist, r.as_root_of, rep);
        }
        const Json& res = file.at("results");
        if (res.contains("semitame")) verify_semitame(make_field(res.at("semitame").at("base").get<std::string>(), ctx), res.at("semitame"), rep);
        rep.log.push_back("verified " + std::to_string(file.at("certs").size()) + " certs and " + std::to_string(file.at("samples").size()) +
                          " samples");
    } catch (const std::exception& e) {
        rep.mismatches.push_back(std::string("parse or evaluation error: ") + e.what());
    }
    return rep;
}

} // namespace vfield
