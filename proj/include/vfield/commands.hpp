#pragma once

// Command-line surface: subcommands field | distance | semitame | asfamily |
// kummerfamily | sigma | verify.

#include <cctype>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "certlab.hpp"

namespace vfield {

enum ExitCode : int { exit_proved = 0, exit_refuted = 2, exit_inconclusive = 3, exit_usage = 64 };

struct UsageError : Error {
    using Error::Error;
};

/// Parses sums of terms c*t^(n/d) (equal) or c*p^(n/d) (mixed); integers are allowed.
inline Series parse_element(const ContextPtr& ctx, const std::string& text)
{
    const char var = ctx->mode() == Mode::equal_char ? 't' : 'p';
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw UsageError("empty element");
    std::size_t i = 0;
    auto fail = [&](const std::string& why) -> UsageError { return UsageError("cannot parse element '" + text + "': " + why); };
    auto integer = [&]() {
        std::size_t start = i;
        if (i < s.size() && s[i] == '-') ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start || (s[start] == '-' && i == start + 1)) throw fail("expected an integer at position " + std::to_string(start));
        return std::stoll(s.substr(start, i - start));
    };
    auto exponent = [&]() {
        bool paren = i < s.size() && s[i] == '(';
        if (paren) ++i;
        std::int64_t n = integer(), d = 1;
        if (i < s.size() && s[i] == '/') {
            ++i;
            d = integer();
            if (d <= 0) throw fail("exponent denominator must be positive");
        }
        if (paren) {
            if (i >= s.size() || s[i] != ')') throw fail("missing ')'");
            ++i;
        }
        return make_rational(n, d);
    };
    Series acc = Series::zero(ctx);
    bool first = true;
    while (i < s.size()) {
        bool minus = false;
        if (!first) {
            if (s[i] != '+' && s[i] != '-') throw fail("expected '+' or '-' at position " + std::to_string(i));
            minus = s[i] == '-';
            ++i;
        } else if (s[i] == '-') {
            minus = true;
            ++i;
        }
        first = false;
        std::int64_t coeff = 1;
        bool has_coeff = false;
        if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            coeff = integer();
            has_coeff = true;
            if (i < s.size() && s[i] == '*') ++i;
        }
        Series term = Series::from_int(ctx, coeff);
        if (i < s.size() && s[i] == var) {
            ++i;
            Rational e(1);
            if (i < s.size() && s[i] == '^') {
                ++i;
                e = exponent();
            }
            term = term * Series::monomial(ctx, FqElem{1}, e);
        } else if (!has_coeff) {
            throw fail(std::string("expected a coefficient or '") + var + "' at position " + std::to_string(i));
        }
        acc = minus ? acc - term : acc + term;
    }
    return acc;
}

namespace detail {

inline void print_sample(std::ostream& out, const InitialSegmentSample& s, const CutEnclosure& dist)
{
    out << "  realized values of v(a - K):\n";
    for (const auto& r : s.realized) out << "    " << std::setw(10) << r.value.str() << "  witness " << r.witness.str() << "  [" << r.source << "]\n";
    out << "  upper bound " << s.upper.str() << " (" << s.upper_rule << "), no_max " << to_string(s.no_max) << " (" << s.no_max_rule << ")\n";
    out << "  dist in [" << dist.lo.str() << ", " << dist.hi.str() << "]" << (dist.exact() ? " exact" : "") << "\n";
}

inline void print_cert(std::ostream& out, const ExtensionCert& c)
{
    out << "cert " << c.id << " (" << to_string(c.kind) << " over " << c.base.preset << ")\n";
    out << "  generator " << c.generator.str() << "\n";
    print_sample(out, c.value_set, c.dist);
    const auto& cl = c.claims;
    out << "  unique_extension " << to_string(cl.unique_extension.verdict) << " [" << cl.unique_extension.rule << "], immediate "
        << to_string(cl.immediate.verdict) << " [" << cl.immediate.rule << "], defect "
        << (cl.defect ? std::to_string(*cl.defect) : std::string("unknown")) << " [" << cl.defect_rule << "], classification "
        << to_string(cl.classification) << " [" << cl.classification_rule << "]\n";
    std::size_t passed = 0;
    for (const auto& ch : c.checks) passed += ch.passed;
    out << "  checks " << passed << "/" << c.checks.size() << " passed\n";
    for (const auto& ch : c.checks)
        if (!ch.passed) out << "    FAILED " << ch.name << " [" << ch.detail << "]\n";
}

inline Json condition_json(const ConditionVerdict& c)
{
    Json j{{"verdict", to_string(c.verdict)}, {"rule", c.rule}};
    if (c.witness) j["witness"] = to_json(*c.witness);
    return j;
}

inline Json sigma_json(const SigmaSample& s)
{
    Json v = Json::array();
    for (const auto& x : s.values) v.push_back(x.str());
    return Json{{"values", v}, {"f_witnesses", s.f_witnesses}, {"verdict", to_string(s.verdict)}, {"rule", s.rule}};
}

inline bool family_ok(const std::vector<ExtensionCert>& certs)
{
    return std::all_of(certs.begin(), certs.end(), [](const ExtensionCert& c) { return c.all_checks_pass(); });
}

} // namespace detail

struct CommandOptions {
    SessionConfig cfg;
    std::string subcommand;
    std::string element;
    std::string input;
    std::string upper;
    int n = 5;
    bool as_root_flag = false;
    bool mode_given = false;
    bool session_given = false;
};

inline int execute(const CommandOptions& o, std::ostream& out, std::ostream& err)
{
    SessionConfig cfg = o.cfg;
    const std::string& cmd = o.subcommand;

    if (cmd == "verify") {
        Json file;
        try {
            file = load_json(o.input);
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return exit_usage;
        }
        std::optional<SessionConfig> session;
        if (o.session_given) session = cfg;
        auto rep = verify_certificate(file, session);
        for (const auto& l : rep.log) out << "  " << l << "\n";
        for (const auto& m : rep.mismatches) out << "  MISMATCH " << m << "\n";
        out << (rep.ok() ? "verify: match\n" : rep.config_mismatch ? "verify: config mismatch\n" : "verify: mismatch\n");
        return rep.exit_code();
    }

    if (cmd == "kummerfamily" && !o.mode_given) cfg.mode = Mode::mixed_char;
    if (cfg.base.empty()) {
        if (cmd == "sigma")
            cfg.base = cfg.mode == Mode::mixed_char ? "qp_pdiv_tower" : "pdiv_tower";
        else
            cfg.base = cfg.mode == Mode::mixed_char ? "qp_pdiv_tower" : "fp_t";
    }
    if (cfg.budget < 1) throw UsageError("--budget must be positive");
    ContextPtr ctx;
    FieldDesc K;
    try {
        ctx = cfg.context();
        K = make_field(cfg.base, ctx);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }

    CertificateFile file;
    file.config = cfg;
    file.ctx = ctx;
    file.command = cmd;
    int code = exit_proved;

    if (cmd == "field") {
        auto elems = enumerate_elements(K, cfg.enumeration_height());
        Json sample = Json::array();
        for (std::size_t i = 0; i < elems.size() && i < 64; ++i) sample.push_back(elems[i].str());
        file.results["field"] = Json{{"preset", K.preset},
                                     {"kind", to_string(K.kind)},
                                     {"generators", Json(K.generators)},
                                     {"support_lattice", K.support_lattice ? K.support_lattice->str() : "none"},
                                     {"value_group", K.value_group.str()},
                                     {"perfect", K.perfect},
                                     {"complete", K.complete},
                                     {"max_level", K.max_level()},
                                     {"enumerated", static_cast<std::int64_t>(elems.size())},
                                     {"enumeration_prefix", std::move(sample)}};
        out << "field " << K.preset << " (" << to_string(K.kind) << "), p = " << ctx->p() << ", q = " << ctx->q() << ", D = " << ctx->D() << "\n";
        out << "  value group " << K.value_group.str() << ", perfect " << (K.perfect ? "yes" : "no") << ", tower levels " << K.max_level() << "\n";
        out << "  " << elems.size() << " elements enumerated at height " << cfg.enumeration_height() << "\n";
    } else if (cmd == "distance") {
        if (o.element.empty()) throw UsageError("distance needs an element");
        Series x = parse_element(ctx, o.element);
        SampleRecord rec;
        rec.label = o.as_root_flag ? "as_root(" + o.element + ")" : o.element;
        rec.base = K.preset;
        ValueSetOptions opt;
        if (o.as_root_flag) {
            if (ctx->mode() != Mode::equal_char) throw UsageError("--as-root needs equal characteristic");
            rec.as_root_of = x;
            rec.element = as_root(x);
            opt.tail = as_tail_schema(x, K);
        } else {
            rec.element = x;
        }
        if (!o.upper.empty()) opt.assumed_upper = Cut::minus(ExtRat(parse_rational(o.upper)));
        rec.sample = value_set(rec.element, K, cfg.budget, opt);
        rec.dist = distance_of_sample(rec.sample);
        out << "distance of " << rec.label << " to " << K.preset << "\n";
        detail::print_sample(out, rec.sample, rec.dist);
        code = rec.dist.exact() && rec.sample.upper_rule != "assumed" ? exit_proved : exit_inconclusive;
        file.samples.push_back(std::move(rec));
    } else if (cmd == "semitame") {
        auto r = semitame_report(K, cfg.budget);
        static const char* names[] = {"a", "b", "c", "d", "e", "f"};
        Json conds = Json::object();
        bool any_refuted = false, all_proved = true;
        out << "semitame conditions for " << K.preset << "\n";
        out << "  DRst " << to_string(r.drst.verdict) << " [" << r.drst.rule << "]\n";
        for (int i = 0; i < 6; ++i) {
            const auto& c = r.cond[static_cast<std::size_t>(i)];
            conds[names[i]] = detail::condition_json(c);
            any_refuted |= c.verdict == Verdict::refuted;
            all_proved &= c.verdict == Verdict::proved;
            out << "  (" << names[i] << ") " << std::setw(8) << to_string(c.verdict) << " [" << c.rule << "]";
            if (c.witness) out << " witness " << c.witness->str();
            out << "\n";
        }
        file.results["semitame"] = Json{{"base", K.preset},
                                        {"budget", cfg.budget},
                                        {"drst", detail::condition_json(r.drst)},
                                        {"perfect_residue", detail::condition_json(r.perfect_residue)},
                                        {"conditions", conds},
                                        {"consistent", r.consistent()}};
        out << "  consistent " << (r.consistent() ? "yes" : "no") << "\n";
        code = !r.consistent() || any_refuted ? exit_refuted : all_proved ? exit_proved : exit_inconclusive;
    } else if (cmd == "asfamily") {
        if (ctx->mode() != Mode::equal_char) throw UsageError("asfamily needs equal characteristic");
        if (o.n < 1) throw UsageError("--n must be positive");
        auto eta = imperfection_witness(K, cfg.budget);
        if (!eta) {
            auto r = semitame_report(K, cfg.budget);
            bool perfect = r.cond[4].verdict == Verdict::proved;
            file.results["imperfection_witness"] = Json{{"found", false}, {"rule", perfect ? r.cond[4].rule : "budget"}};
            out << "no imperfection witness: " << (perfect ? "K is perfect [" + r.cond[4].rule + "]" : "budget exhausted") << "\n";
            code = perfect ? exit_proved : exit_inconclusive;
        } else {
            Series d = Series::monomial(ctx, FqElem{1}, Rational(1));
            auto fam = as_family(*eta, K, d, o.n, cfg.budget);
            file.results["imperfection_witness"] = Json{{"found", true}, {"eta", to_json(*eta)}, {"d", to_json(d)}};
            file.results["pairwise_distinct"] = fam.pairwise_distinct;
            out << "eta = " << eta->str() << ", d = " << d.str() << "\n";
            for (const auto& c : fam.certs) detail::print_cert(out, c);
            out << "pairwise distinct: " << (fam.pairwise_distinct ? "yes" : "no") << "\n";
            code = fam.pairwise_distinct && detail::family_ok(fam.certs) ? exit_proved : exit_refuted;
            file.certs = std::move(fam.certs);
        }
    } else if (cmd == "kummerfamily") {
        if (ctx->mode() != Mode::mixed_char) throw UsageError("kummerfamily needs mixed characteristic");
        if (o.n < 1) throw UsageError("--n must be positive");
        Series eta = parse_element(ctx, o.element.empty() ? "1 + p^(1/64)" : o.element);
        KummerFamilyOptions opt;
        opt.hypothesis = Cut::minus(ExtRat(parse_rational(o.upper.empty() ? "1/32" : o.upper)));
        opt.prefix_witnesses = false;
        if (ctx->p() == 2) opt.params = kummer_lab_params(eta, o.n);
        auto fam = kummer_family(eta, K, o.n, cfg.budget, opt);
        file.results["eta"] = to_json(eta);
        file.results["hypothesis"] = to_json(*opt.hypothesis);
        file.results["pairwise_distinct"] = fam.pairwise_distinct;
        out << "eta = " << eta.str() << ", assumed v(eta - K) upper " << opt.hypothesis->str() << "\n";
        for (const auto& c : fam.certs) detail::print_cert(out, c);
        out << "pairwise distinct: " << (fam.pairwise_distinct ? "yes" : "no") << "\n";
        bool super = std::all_of(fam.certs.begin(), fam.certs.end(),
                                 [](const ExtensionCert& c) { return c.claims.classification == Classification::super_dependent; });
        code = fam.pairwise_distinct && detail::family_ok(fam.certs) ? (super ? exit_proved : exit_inconclusive) : exit_refuted;
        file.certs = std::move(fam.certs);
    } else if (cmd == "sigma") {
        std::vector<ExtensionCert> certs;
        if (!o.input.empty()) {
            Json in;
            try {
                in = load_json(o.input);
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            SessionConfig icfg = config_from_json(in.at("config"));
            ContextPtr ictx = icfg.context();
            if (!ictx->same_session(*ctx) && o.session_given) throw UsageError("sigma: input file session differs from the flags");
            file.config = icfg;
            file.ctx = ictx;
            for (const auto& jc : in.at("certs")) certs.push_back(cert_from_json(ictx, jc));
        } else {
            if (ctx->mode() != Mode::equal_char) throw UsageError("sigma without --input builds an AS certificate (equal characteristic)");
            Series b = parse_element(ctx, o.element.empty() ? "t^-1" : o.element);
            certs.push_back(as_extension_cert(b, K, cfg.budget));
        }
        Json sig = Json::array();
        bool all_decided = true;
        for (const auto& c : certs) {
            auto s = sigma_sample_any(c, cfg.budget);
            detail::print_cert(out, c);
            out << "  sigma sample:";
            for (const auto& v : s.values) out << " " << v.str();
            out << "\n  sigma verdict " << to_string(s.verdict) << " [" << s.rule << "]\n";
            Json j = detail::sigma_json(s);
            j["cert"] = c.id;
            sig.push_back(j);
            all_decided &= s.verdict != SigmaVerdict::unknown;
        }
        file.results["sigma"] = sig;
        code = all_decided ? exit_proved : exit_inconclusive;
        file.certs = std::move(certs);
    } else {
        throw UsageError("unknown subcommand " + cmd);
    }

    std::string path = cfg.out.empty() ? cmd + ".json" : cfg.out;
    save_certificate_file(file, path);
    out << "certificate written to " << path << "\n";
    return code;
}

/// Parses argv and runs the subcommand; returns the process exit code.
inline int run_command(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"Exact valued-field toolkit: distances, defect extensions and certificates"};
    app.require_subcommand(1);
    CommandOptions o;
    std::string mode = "equal", precision = "8";
    std::int64_t denominator = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--p", o.cfg.p, "characteristic or residue characteristic");
        sub->add_option("--q", o.cfg.q, "residue field size p^m (equal characteristic)");
        sub->add_option("--mode", mode, "equal | mixed")->check(CLI::IsMember({"equal", "mixed"}));
        sub->add_option("--denominator", denominator, "exponent denominator bound D (default by mode)");
        sub->add_option("--precision", precision, "default absolute precision (rational)");
        sub->add_option("--height", o.cfg.height, "enumeration height for field listings");
        sub->add_option("--budget", o.cfg.budget, "search budget (enumeration height and witness precision)");
        sub->add_option("--n", o.n, "family size");
        sub->add_option("--base", o.cfg.base, "field preset: fp_t | laurent | pdiv_tower | qp | qp_pdiv_tower");
        sub->add_option("--out", o.cfg.out, "certificate output path");
        sub->add_option("--seed", o.cfg.seed, "seed recorded in the session config");
    };
    struct Sub {
        const char* name;
        const char* help;
    };
    for (auto [name, help] : {Sub{"field", "describe a field preset and its enumeration"},
                              Sub{"distance", "certified sample of v(a - K) and dist(a, K)"},
                              Sub{"semitame", "condition table of the semitame theorem"},
                              Sub{"asfamily", "family of Artin-Schreier defect extensions"},
                              Sub{"kummerfamily", "family of Kummer extensions in mixed characteristic"},
                              Sub{"sigma", "sample the set of values v((sigma f - f)/f)"},
                              Sub{"verify", "re-verify a certificate file"}}) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub);
        std::string n = name;
        if (n == "distance" || n == "sigma" || n == "kummerfamily") sub->add_option("element", o.element, "element expression");
        if (n == "distance") sub->add_flag("--as-root", o.as_root_flag, "use the Artin-Schreier root of the element");
        if (n == "distance" || n == "kummerfamily") sub->add_option("--upper", o.upper, "assumed upper bound of v(a - K) (open)");
        if (n == "sigma") sub->add_option("--input", o.input, "certificate file to sample");
        if (n == "verify") sub->add_option("file", o.input, "certificate file")->required();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : exit_usage;
    }
    o.subcommand = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();
    o.mode_given = sub->count("--mode") > 0;
    o.session_given = o.mode_given || sub->count("--p") > 0 || sub->count("--q") > 0 || sub->count("--denominator") > 0;
    try {
        o.cfg.mode = parse_mode(mode);
        o.cfg.D = denominator;
        o.cfg.precision = ExtRat(parse_rational(precision));
        return execute(o, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        err << "inconclusive: " << e.what() << "\n";
        return exit_inconclusive;
    }
}

} // namespace vfield
