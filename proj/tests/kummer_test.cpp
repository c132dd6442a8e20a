#include <gtest/gtest.h>

#include <random>

#include "vfield/kummer.hpp"

using namespace vfield;

namespace {

Rational r(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }
ExtRat x(std::int64_t n, std::int64_t d = 1) { return ExtRat::frac(n, d); }
Series pw(const ContextPtr& ctx, std::int64_t n, std::int64_t d = 1) { return Series::monomial(ctx, FqElem{1}, r(n, d)); }

std::string failed_checks(const std::vector<Check>& checks)
{
    std::string out;
    for (const auto& ch : checks)
        if (!ch.passed) out += ch.name + " [" + ch.detail + "]; ";
    return out;
}

ContextPtr lab_ctx() { return Context::mixed(2, 0, ExtRat(8)); }

Series lab_eta(const ContextPtr& ctx) { return Series::one(ctx) + pw(ctx, 1, 64); }

KummerFamilyOptions lab_options(const Series& eta, int N)
{
    return {Cut::minus(x(1, 32)), kummer_lab_params(eta, N), false};
}

} // namespace

namespace vfield {
void PrintTo(const Series& s, std::ostream* os) { *os << s.str(); }
void PrintTo(const Cut& c, std::ostream* os) { *os << c.str(); }
} // namespace vfield

TEST(Normalize, Examples)
{
    auto ctx = lab_ctx();
    auto T = make_field("qp_pdiv_tower", ctx);
    Series u = Series::one(ctx) + pw(ctx, 1, 4);
    auto same = normalize_to_1unit(u, T, 2);
    EXPECT_EQ(same.unit, u);

    auto n = normalize_to_1unit(pw(ctx, 1, 2) * u, T, 2);
    EXPECT_EQ(n.unit, u);
    EXPECT_EQ(n.c.materialize(ExtRat(8)), pw(ctx, -1, 2));

    auto ctx3 = Context::mixed(3, 0, ExtRat(6));
    auto Q = make_field("qp", ctx3);
    auto m = normalize_to_1unit(Series::from_int(ctx3, 5), Q, 2);
    EXPECT_EQ(m.d.materialize(ExtRat(6)), Series::from_int(ctx3, 2));
    EXPECT_EQ(m.unit, Series::from_int(ctx3, 10));
}

TEST(PthPowerDifference, Examples)
{
    auto ctx = lab_ctx();
    Series one = Series::one(ctx);
    auto ok = pth_power_difference_check(one + pw(ctx, 1, 2), one);
    EXPECT_TRUE(ok.precondition_holds);
    EXPECT_TRUE(ok.equation_holds);
    EXPECT_EQ(ok.v_diff, x(1, 2));
    EXPECT_EQ(ok.v_pow_diff, x(1));

    auto edge = pth_power_difference_check(Series::from_int(ctx, 3), one);
    EXPECT_FALSE(edge.precondition_holds);
    EXPECT_FALSE(edge.equation_holds);
    EXPECT_EQ(edge.v_diff, x(1));
    EXPECT_EQ(edge.v_pow_diff, x(3));

    auto deg = pth_power_difference_check(one, one);
    EXPECT_TRUE(deg.degenerate);
    EXPECT_FALSE(deg.precondition_holds);
}

TEST(PthPowerDifference, RandomPairsUnderPrecondition)
{
    for (std::int64_t p : {2, 3}) {
        auto ctx = Context::mixed(p, 0, ExtRat(8));
        std::mt19937_64 rng(11 * p);
        std::uniform_int_distribution<std::int64_t> digit(1, p - 1), num(1, 7), shift(-2, 2);
        const std::int64_t den = p == 2 ? 16 : 9;
        int held = 0;
        for (int i = 0; i < 200; ++i) {
            Rational ve = r(shift(rng), den);
            Series eta = Series::monomial(ctx, FqElem{static_cast<std::uint32_t>(digit(rng))}, ve) +
                         Series::monomial(ctx, FqElem{static_cast<std::uint32_t>(digit(rng))}, ve + r(num(rng), den));
            // v(eta - a) in (v eta, v eta + vp/(p-1)).
            Rational gap = r(1 + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(den / (p - 1) - 1)), den);
            Series a = eta + Series::monomial(ctx, FqElem{static_cast<std::uint32_t>(digit(rng))}, ve + gap);
            auto rep = pth_power_difference_check(eta, a);
            ASSERT_TRUE(rep.precondition_holds) << eta.str() << " | " << a.str();
            EXPECT_TRUE(rep.equation_holds) << eta.str() << " | " << a.str() << " " << rep.v_pow_diff.str();
            held += rep.equation_holds;
        }
        EXPECT_EQ(held, 200);
    }
}

TEST(Zeta, UnitValues)
{
    for (std::int64_t p : {2, 3}) {
        auto ctx = Context::mixed(p, 0, ExtRat(6));
        for (const auto& v : zeta_unit_values(ctx)) EXPECT_EQ(v, x(1, p - 1));
    }
}

TEST(TransformMixed, CoefficientBoundAndWitnesses)
{
    auto ctx = lab_ctx();
    auto T = make_field("qp_pdiv_tower", ctx);
    Series eta = lab_eta(ctx);
    auto es = value_set(eta, T, 3, {false, std::nullopt, Cut::minus(x(1, 32))});
    EXPECT_EQ(es.upper_rule, "assumed");
    auto prm = kummer_lab_params(eta, 2);
    auto tr = transform_mixed(eta, T, prm[0].td, es, 3, prm[0].root_hint);
    EXPECT_TRUE(tr.ok()) << failed_checks(tr.checks);
    EXPECT_EQ(tr.start, "root_hint");
    EXPECT_EQ(tr.f.coefficient(1).valuation(), x(127, 128)); // 2 td with v td = -1/128

    auto spec = kummer_lab_params(eta, std::vector<Rational>{r(9, 16), r(17, 32)});
    auto tr2 = transform_mixed(eta, T, spec[0].td, es, 3, spec[0].root_hint);
    EXPECT_TRUE(tr2.ok()) << failed_checks(tr2.checks);
    EXPECT_EQ(tr2.f.coefficient(1).valuation(), x(7, 8));

    auto tight = value_set(eta, T, 3, {false, std::nullopt, Cut::minus(x(1, 2))});
    EXPECT_THROW(transform_mixed(eta, T, prm[0].td, tight, 3, prm[0].root_hint), Error);
}

TEST(TransformMixed, Guards)
{
    auto ctx = lab_ctx();
    auto T = make_field("qp_pdiv_tower", ctx);
    Series eta = lab_eta(ctx);
    auto es = value_set(eta, T, 3, {false, std::nullopt, Cut::minus(x(1, 32))});
    EXPECT_THROW(transform_mixed(eta, T, KElem::of(pw(ctx, 1, 4)), es, 3), Error);                  // vd > 0
    EXPECT_THROW(transform_mixed(pw(ctx, 1, 4), T, KElem::of(pw(ctx, -1, 4)), es, 3), Error);        // not a 1-unit
    EXPECT_THROW(transform_mixed(eta, make_field("fp_t", Context::equal(2)), KElem::of(pw(ctx, -1, 4)), es, 3), Error);
}

TEST(KummerFamily, FiveLabMembers)
{
    auto ctx = lab_ctx();
    auto T = make_field("qp_pdiv_tower", ctx);
    Series eta = lab_eta(ctx);
    auto fam = kummer_family(eta, T, 5, 3, lab_options(eta, 5));
    ASSERT_EQ(fam.certs.size(), 5u);
    EXPECT_TRUE(fam.pairwise_distinct);
    for (int n = 1; n <= 5; ++n) {
        const auto& c = fam.certs[n - 1];
        EXPECT_TRUE(c.all_checks_pass()) << failed_checks(c.checks);
        ExtRat vtd = x(-2 * n, 256);
        EXPECT_EQ(c.value_set.upper, Cut::minus(x(1, 32) - vtd));
        EXPECT_EQ(c.claims.classification, Classification::super_dependent);
        auto sig = sigma_sample_kummer(c, 3);
        EXPECT_EQ(sig.values.front(), x(1));
        EXPECT_EQ(sig.verdict, SigmaVerdict::dependent_evidence);
    }
}

TEST(KummerFamily, TwoMembersWithSpecValues)
{
    auto ctx = lab_ctx();
    auto T = make_field("qp_pdiv_tower", ctx);
    Series eta = lab_eta(ctx);
    KummerFamilyOptions opt{Cut::minus(x(1, 32)), kummer_lab_params(eta, std::vector<Rational>{r(9, 16), r(17, 32)}), false};
    auto fam = kummer_family(eta, T, 2, 3, opt);
    EXPECT_TRUE(fam.pairwise_distinct);
    EXPECT_EQ(fam.certs[0].value_set.upper, Cut::minus(x(1, 32) + x(1, 8)));
    EXPECT_EQ(fam.certs[1].value_set.upper, Cut::minus(x(1, 32) + x(1, 16)));
    for (const auto& c : fam.certs) EXPECT_TRUE(c.all_checks_pass()) << failed_checks(c.checks);
}

TEST(KummerFamily, TenMembersAndSingleMember)
{
    auto ctx = lab_ctx();
    auto T = make_field("qp_pdiv_tower", ctx);
    Series eta = lab_eta(ctx);
    auto fam = kummer_family(eta, T, 10, 2, lab_options(eta, 10));
    EXPECT_EQ(fam.certs.size(), 10u);
    EXPECT_TRUE(fam.pairwise_distinct);
    auto one = kummer_family(eta, T, 1, 2, lab_options(eta, 1));
    EXPECT_EQ(one.certs[0].generator, fam.certs[0].generator);
}

TEST(KummerFamily, HypothesisGuards)
{
    auto ctx = lab_ctx();
    auto T = make_field("qp_pdiv_tower", ctx);
    Series eta = lab_eta(ctx);
    KummerFamilyOptions weak{Cut::minus(x(1, 2)), kummer_lab_params(eta, 2), false};
    EXPECT_THROW(kummer_family(eta, T, 2, 2, weak), Error);
    EXPECT_THROW(kummer_family(eta, T, 3, 2, lab_options(eta, 2)), Error);
}

TEST(ClassifyKummer, Thresholds)
{
    auto ctx = lab_ctx();
    ExtensionCert c;
    c.kind = ExtKind::kummer;
    c.generator = lab_eta(ctx);
    c.dist = CutEnclosure(Cut::minus(x(1, 32)), Cut::minus(x(1, 32)));
    classify_kummer_defect(c);
    EXPECT_EQ(c.claims.classification, Classification::super_dependent);

    c.dist = CutEnclosure(Cut::minus(x(3, 4)), Cut::minus(x(3, 4)));
    classify_kummer_defect(c);
    EXPECT_EQ(c.claims.classification, Classification::dependent);

    c.dist = CutEnclosure(Cut::minus(x(1)), Cut::minus(x(1)));
    classify_kummer_defect(c);
    EXPECT_EQ(c.claims.classification, Classification::unknown);

    c.dist = CutEnclosure(Cut::plus(x(0)), Cut(ExtRat::pos_inf(), false));
    EXPECT_THROW(classify_kummer_defect(c), Error);
}
