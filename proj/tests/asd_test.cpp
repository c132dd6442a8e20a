#include <gtest/gtest.h>

#include <random>

#include "vfield/asd.hpp"

using namespace vfield;

namespace {

Rational r(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }
ExtRat x(std::int64_t n, std::int64_t d = 1) { return ExtRat::frac(n, d); }
Series mono(const ContextPtr& ctx, std::int64_t n, std::int64_t d = 1) { return Series::monomial(ctx, FqElem{1}, r(n, d)); }

Series as_residual(const Series& theta, const Series& b) { return theta.frobenius() - theta - b; }

std::string failed_checks(const ExtensionCert& c)
{
    std::string out;
    for (const auto& ch : c.checks)
        if (!ch.passed) out += ch.name + " [" + ch.detail + "]; ";
    return out;
}

} // namespace

namespace vfield {
void PrintTo(const Series& s, std::ostream* os) { *os << s.str(); }
void PrintTo(const Cut& c, std::ostream* os) { *os << c.str(); }
} // namespace vfield

TEST(AsRoot, PolarMonomial)
{
    auto ctx = Context::equal(2);
    Series b = mono(ctx, -1);
    auto res = as_root_ex(b);
    EXPECT_EQ(res.root_levels, 8);
    EXPECT_EQ(res.theta.coefficient(r(-1, 2)), FqElem{1});
    EXPECT_EQ(res.theta.coefficient(r(-1, 4)), FqElem{1});
    EXPECT_EQ(res.theta.valuation(), x(-1, 2));
    EXPECT_TRUE(as_residual(res.theta, b).empty());
    EXPECT_EQ(res.theta.precision(), x(-1, 512));
}

TEST(AsRoot, PositiveAndZero)
{
    auto ctx = Context::equal(2);
    Series theta = as_root(mono(ctx, 1));
    for (int e : {1, 2, 4}) EXPECT_EQ(theta.coefficient(r(e)), FqElem{1});
    EXPECT_EQ(theta.coefficient(r(3)), FqElem{0});
    EXPECT_TRUE(as_residual(theta, mono(ctx, 1)).empty());
    EXPECT_TRUE(as_root(Series::zero(ctx)).empty());
}

TEST(AsRoot, ResidueEquation)
{
    auto F2 = Context::equal(2);
    EXPECT_THROW(as_root(Series::one(F2)), Error); // x^2 + x = 1 has no root in F_2
    auto F4 = Context::equal(2, 2);
    Series theta = as_root(Series::one(F4));
    EXPECT_TRUE(as_residual(theta, Series::one(F4)).empty());
    EXPECT_FALSE(theta.empty());
}

TEST(AsRoot, DenominatorBound)
{
    auto ctx = Context::equal(2, 1, 4);
    EXPECT_THROW(as_root(Series::monomial(ctx, FqElem{1}, r(-1, 4))), Error);
}

TEST(GeneratorTransform, OrbitOverF3)
{
    auto ctx = Context::equal(3);
    Series b = mono(ctx, -1);
    Series theta = as_root(b);
    auto same = as_generator_transform(theta, b, 1, Series::zero(ctx));
    EXPECT_EQ(same.theta, theta);
    Series t = mono(ctx, 1);
    auto g = as_generator_transform(theta, b, 2, t);
    Series expected_b = Series::from_int(ctx, 2) * b + t.pow(3) - t;
    EXPECT_EQ(g.b, expected_b);
    EXPECT_TRUE(as_residual(g.theta, g.b).empty());
    EXPECT_THROW(as_generator_transform(theta, b, 3, t), Error);
}

TEST(GeneratorTransform, ValueSetIsAnInvariant)
{
    auto ctx = Context::equal(3);
    auto K = make_field("fp_t", ctx);
    Series b = mono(ctx, -1);
    Series theta = as_root(b);
    auto base = value_set(theta, K, 2);
    for (std::int64_t i : {1, 2})
        for (const Series& c : {Series::zero(ctx), mono(ctx, 1), mono(ctx, -2) + Series::one(ctx)}) {
            auto g = as_generator_transform(theta, b, i, c);
            auto s = value_set(g.theta, K, 2);
            EXPECT_EQ(s.upper, base.upper);
            EXPECT_EQ(s.no_max, base.no_max);
            Series I = Series::from_int(ctx, i);
            for (const auto& rv : base.realized) {
                KElem w{I * rv.witness.num + c * rv.witness.den, rv.witness.den, false};
                EXPECT_EQ(certified_distance_value(g.theta, w, ExtRat(2)), rv.value);
            }
        }
}

TEST(TransformInseparable, SquareRootOfT)
{
    auto ctx = Context::equal(2);
    auto K = make_field("fp_t", ctx);
    auto tr = transform_inseparable(mono(ctx, 1, 2), K, mono(ctx, 1), 2);
    EXPECT_TRUE(tr.cert.all_checks_pass()) << failed_checks(tr.cert);
    EXPECT_EQ(tr.cert.defining_element, mono(ctx, -1));
    EXPECT_EQ(tr.cert.value_set.upper, Cut(x(-1, 2), true));
    EXPECT_TRUE(tr.cert.value_set.contains_value(x(-1, 2)));
    EXPECT_TRUE(tr.cert.value_set.contains_value(x(-2)));
    EXPECT_EQ((mono(ctx, 1, 2) - tr.theta_tilde).valuation(), x(3, 4));
    EXPECT_EQ(tr.cert.claims.defect, 1);
    EXPECT_EQ(tr.cert.claims.defect_rule, "ramified");
}

TEST(TransformInseparable, CubeRootOfT)
{
    auto ctx = Context::equal(3);
    auto K = make_field("fp_t", ctx);
    auto tr = transform_inseparable(mono(ctx, 1, 3), K, mono(ctx, 1), 2);
    EXPECT_TRUE(tr.cert.all_checks_pass()) << failed_checks(tr.cert);
    EXPECT_EQ(tr.cert.defining_element, mono(ctx, -2));
    EXPECT_EQ(tr.theta.valuation(), x(-2, 3));
}

TEST(TransformInseparable, ConditionGuard)
{
    auto ctx = Context::equal(2);
    auto K = make_field("fp_t", ctx);
    EXPECT_THROW(transform_inseparable(mono(ctx, 1, 2), K, Series::one(ctx), 2), Error);
    EXPECT_THROW(transform_inseparable(mono(ctx, 1, 4), K, mono(ctx, 1), 2), Error); // eta^p not in K
}

TEST(AsFamily, FiveMembersOverF2t)
{
    auto ctx = Context::equal(2);
    auto K = make_field("fp_t", ctx);
    auto fam = as_family(mono(ctx, 1, 2), K, mono(ctx, 1), 5, 2);
    ASSERT_EQ(fam.certs.size(), 5u);
    EXPECT_TRUE(fam.pairwise_distinct);
    for (int n = 1; n <= 5; ++n) {
        const auto& c = fam.certs[n - 1];
        EXPECT_EQ(c.value_set.upper, Cut(x(1, 2) - x(n), true));
        EXPECT_TRUE(c.all_checks_pass()) << failed_checks(c);
    }
    auto one = as_family(mono(ctx, 1, 2), K, mono(ctx, 1), 1, 2);
    auto tr = transform_inseparable(mono(ctx, 1, 2), K, mono(ctx, 1), 2);
    EXPECT_EQ(one.certs[0].generator, tr.cert.generator);
    EXPECT_EQ(one.certs[0].value_set.values(), tr.cert.value_set.values());
}

TEST(AsFamily, ThreeMembersOverF3t)
{
    auto ctx = Context::equal(3);
    auto K = make_field("fp_t", ctx);
    auto fam = as_family(mono(ctx, 1, 3), K, mono(ctx, 1), 3, 2);
    EXPECT_TRUE(fam.pairwise_distinct);
    for (int n = 1; n <= 3; ++n) EXPECT_EQ(fam.certs[n - 1].value_set.upper, Cut(x(1, 3) - x(n), true));
}

TEST(ImperfectionWitness, Presets)
{
    auto ctx = Context::equal(2);
    EXPECT_EQ(imperfection_witness(make_field("fp_t", ctx), 2), mono(ctx, 1, 2));
    EXPECT_EQ(imperfection_witness(make_field("laurent", ctx), 2), mono(ctx, 1, 2));
    EXPECT_FALSE(imperfection_witness(make_field("pdiv_tower", ctx), 4));
}

TEST(ClassicalDefect, UniqextvAndSigma)
{
    for (std::int64_t p : {2, 3}) {
        auto ctx = Context::equal(p);
        auto K = make_field("pdiv_tower", ctx);
        auto cert = as_extension_cert(mono(ctx, -1), K, 2);
        EXPECT_TRUE(cert.all_checks_pass()) << failed_checks(cert);
        EXPECT_EQ(cert.dist, CutEnclosure(Cut::minus(x(0)), Cut::minus(x(0))));
        EXPECT_EQ(cert.value_set.no_max, Verdict::proved);
        EXPECT_EQ(cert.claims.defect, p);
        EXPECT_EQ(cert.claims.defect_rule, "uniqextv");
        EXPECT_EQ(cert.claims.unique_extension.verdict, Verdict::proved);
        EXPECT_EQ(in_completion(cert.generator, K, 2, {true, as_tail_schema(mono(ctx, -1), K), std::nullopt}), Membership::no);

        auto sig = sigma_sample(cert, 2);
        EXPECT_EQ(sig.verdict, SigmaVerdict::independent_consistent);
        EXPECT_EQ(sig.values.front(), x(1, p));
        for (int k = 1; k <= 5; ++k)
            EXPECT_NE(std::find(sig.values.begin(), sig.values.end(), ExtRat(Rational(1) / boost::multiprecision::pow(BigInt(p), k))),
                      sig.values.end())
                << k;
    }
}

TEST(DefectCriteria, NoRuleFires)
{
    auto ctx = Context::equal(2);
    ExtensionCert cert;
    cert.base = make_field("pdiv_tower", ctx);
    cert.kind = ExtKind::artin_schreier;
    cert.value_set.realized.push_back({x(-1), KElem::of(Series::zero(ctx)), "enumerate"});
    cert.dist = distance_of_sample(cert.value_set);
    defect_criteria(cert);
    EXPECT_EQ(cert.claims.unique_extension.verdict, Verdict::unknown);
    EXPECT_EQ(cert.claims.immediate.verdict, Verdict::unknown);
    EXPECT_FALSE(cert.claims.defect);
}

TEST(SigmaSample, DependentEvidenceForTransformedCert)
{
    auto ctx = Context::equal(2);
    auto tr = transform_inseparable(mono(ctx, 1, 2), make_field("fp_t", ctx), mono(ctx, 1), 2);
    auto sig = sigma_sample(tr.cert, 2);
    EXPECT_EQ(sig.verdict, SigmaVerdict::dependent_evidence);
    for (const auto& v : sig.values) EXPECT_GE(v, x(1, 2));
}

// Random b over fp_t and pdiv_tower: theta^p - theta - b vanishes on certified
// terms with at least four tail levels, or to precision p^4 without a polar part.
TEST(AsRootProperties, RandomRight)
{
    for (std::int64_t p : {2, 3}) {
        auto ctx = Context::equal(p);
        std::mt19937_64 rng(77 + p);
        std::uniform_int_distribution<std::int64_t> num(-9, 9), lvl(0, 4), coeff(1, p - 1);
        for (int i = 0; i < 100; ++i) {
            bool tower = i % 2 == 1;
            Series b = Series::zero(ctx);
            for (int k = 0; k < 4; ++k) {
                std::int64_t den = tower ? static_cast<std::int64_t>(boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(lvl(rng)))) : 1;
                std::int64_t n = num(rng);
                if (n == 0) continue;
                b = b + Series::monomial(ctx, FqElem{static_cast<std::uint32_t>(coeff(rng))}, r(n, den));
            }
            ExtRat target(Rational(p * p * p * p));
            auto res = as_root_ex(b, target);
            Series resid = as_residual(res.theta, b.truncated(res.theta.precision()));
            EXPECT_TRUE(resid.empty()) << b.str();
            if (!b.prefix_below(Rational(0)).empty())
                EXPECT_GE(res.root_levels, 4);
            else
                EXPECT_GE(res.theta.precision(), target);
        }
    }
}
