#include <gtest/gtest.h>

#include <optional>
#include <random>
#include <vector>

#include "vfield/ordcut.hpp"

using namespace vfield;

namespace {

ExtRat q(std::int64_t n, std::int64_t d = 1) { return ExtRat::frac(n, d); }

// Brute-force reading of the translation lemma on a finite grid. Elements of
// the lower set are probed on the fine grid n/256, candidate bounds beta on the
// coarse grid n/128; every cut and alpha used below has denominator <= 8, so
// the two grids separate "bounded away from alpha" from "accumulating at alpha".
TranslateReport translate_oracle(const Cut& d, const Rational& alpha)
{
    std::optional<Rational> top;
    bool below = true;
    for (std::int64_t n = -2 * 256; n <= 2 * 256; ++n) {
        Rational x = make_rational(n, 256);
        if (!d.contains(x)) continue;
        if (!(x < alpha)) below = false;
        top = x;
    }
    bool gap = false;
    for (std::int64_t n = -2 * 128; n <= 2 * 128 && !gap; ++n) {
        Rational beta = make_rational(n, 128);
        if (beta < alpha && (!top || *top <= beta)) gap = true;
    }
    return {below, gap};
}

Cut random_cut(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> kind(0, 19);
    std::uniform_int_distribution<std::int64_t> num(-40, 40), den(1, 8);
    int k = kind(rng);
    if (k == 0) return Cut(ExtRat::pos_inf(), false);
    if (k == 1) return Cut(ExtRat::neg_inf(), false);
    return Cut(q(num(rng), den(rng)), rng() % 2 == 0);
}

} // namespace

TEST(CutCompare, Examples)
{
    EXPECT_EQ(cut_compare(Cut(q(0), false), Cut(q(0), true)), Ordering::less);
    EXPECT_EQ(cut_compare(Cut(q(1, 2), true), Cut(q(1, 2), true)), Ordering::equal);
    EXPECT_EQ(cut_compare(Cut(q(0), false), Cut(ExtRat::neg_inf(), false)), Ordering::greater);
}

TEST(CutCompare, InfiniteBoundsAreNeverAttained)
{
    Cut c(ExtRat::pos_inf(), true);
    EXPECT_FALSE(c.attained());
}

TEST(SegmentAffine, Examples)
{
    EXPECT_EQ(segment_affine(Cut(q(0), false), 1, q(0)), Cut(q(0), false));
    EXPECT_EQ(segment_affine(Cut(q(1, 2), true), 2, q(-1, 2)), Cut(q(1, 2), true));
    EXPECT_EQ(segment_affine(Cut(q(0), false), 3, q(-2)), Cut(q(-2), false));
    EXPECT_THROW(segment_affine(Cut(q(0), false), 1, ExtRat::pos_inf()), Error);
}

TEST(CutOfSample, Examples)
{
    std::vector<ExtRat> a{q(-1), q(-1, 2), q(1, 2)};
    EXPECT_EQ(cut_of_sample(a, Side::plus), Cut(q(1, 2), true));
    std::vector<ExtRat> b{q(3)};
    EXPECT_EQ(cut_of_sample(b, Side::minus), Cut(q(3), false));
    std::vector<ExtRat> c{q(0), q(1), q(2)};
    EXPECT_EQ(cut_of_sample(c, Side::plus), Cut(q(2), true));
    EXPECT_THROW(cut_of_sample(std::vector<ExtRat>{}, Side::plus), Error);
    EXPECT_THROW(cut_of_sample(std::vector<ExtRat>{ExtRat::pos_inf()}, Side::plus), Error);
}

TEST(DistTranslate, Examples)
{
    EXPECT_EQ(dist_translate(Cut(q(0), false), q(0)), (TranslateReport{true, false}));
    EXPECT_EQ(dist_translate(Cut(q(-1), true), q(0)), (TranslateReport{true, true}));
    // Open cut sitting exactly at alpha.
    EXPECT_EQ(dist_translate(Cut(q(1, 2), false), q(1, 2)), (TranslateReport{true, false}));
}

TEST(DistTranslate, AgreesWithBruteForceOracle)
{
    std::vector<Cut> cuts{Cut(q(0), false), Cut(q(-1), true), Cut(q(1, 2), false), Cut(q(1, 2), true),
                          Cut(q(3, 4), true), Cut(q(-5, 8), false)};
    std::vector<Rational> alphas{make_rational(0), make_rational(1, 2), make_rational(3, 4), make_rational(-1, 2)};
    for (const auto& d : cuts)
        for (const auto& a : alphas) EXPECT_EQ(dist_translate(d, ExtRat(a)), translate_oracle(d, a)) << d.str() << " " << to_string(a);
}

TEST(CutProperties, TotalOrderOnRandomCuts)
{
    std::mt19937_64 rng(20201001);
    for (int i = 0; i < 1000; ++i) {
        Cut a = random_cut(rng), b = random_cut(rng), c = random_cut(rng);
        auto ab = cut_compare(a, b), ba = cut_compare(b, a);
        EXPECT_EQ(ab == Ordering::less, ba == Ordering::greater);
        EXPECT_EQ(ab == Ordering::equal, a == b);
        if (a <= b && b <= c) {
            EXPECT_LE(a, c);
        }
    }
}

TEST(CutProperties, SegmentAffineIsMonotone)
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> n(1, 9), num(-20, 20), den(1, 6);
    for (int i = 0; i < 1000; ++i) {
        Cut a = random_cut(rng), b = random_cut(rng);
        std::int64_t k = n(rng);
        ExtRat alpha = q(num(rng), den(rng));
        if (a <= b) {
            EXPECT_LE(segment_affine(a, k, alpha), segment_affine(b, k, alpha));
        }
    }
}

TEST(CutProperties, SamplePlusBelowSMinusIffSampleBelowS)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> num(-30, 30), den(1, 6), len(1, 6);
    for (int i = 0; i < 1000; ++i) {
        std::vector<ExtRat> s;
        for (auto j = len(rng); j > 0; --j) s.push_back(q(num(rng), den(rng)));
        ExtRat t = q(num(rng), den(rng));
        bool below = *std::max_element(s.begin(), s.end()) < t;
        EXPECT_EQ(cut_of_sample(s, Side::plus) <= Cut::minus(t), below);
        EXPECT_GT(cut_of_sample(s, Side::plus), cut_of_sample(s, Side::minus));
    }
}

TEST(ValueGroupDesc, Membership)
{
    ValueGroupDesc z({make_rational(1)}, false, 2);
    EXPECT_TRUE(z.contains(make_rational(-3)));
    EXPECT_FALSE(z.contains(make_rational(1, 2)));
    EXPECT_EQ(z.p_divisible().first, Verdict::refuted);
    EXPECT_EQ(*z.p_divisible().second, make_rational(1, 2));

    ValueGroupDesc zp({make_rational(1)}, true, 3);
    EXPECT_TRUE(zp.contains(make_rational(5, 27)));
    EXPECT_FALSE(zp.contains(make_rational(1, 2)));
    EXPECT_EQ(zp.p_divisible().first, Verdict::proved);

    ValueGroupDesc g({make_rational(2, 3), make_rational(1, 2)}, false, 2);
    EXPECT_EQ(g.step(), make_rational(1, 6));
    EXPECT_TRUE(g.contains(make_rational(5, 6)));
}

TEST(ExtRat, Arithmetic)
{
    EXPECT_EQ(ExtRat::pos_inf() + q(3), ExtRat::pos_inf());
    EXPECT_EQ(ExtRat::neg_inf() + q(3), ExtRat::neg_inf());
    EXPECT_THROW(ExtRat::pos_inf() - ExtRat::pos_inf(), Error);
    EXPECT_LT(ExtRat::neg_inf(), q(-1000000));
    EXPECT_LT(q(1000000), ExtRat::pos_inf());
    EXPECT_EQ(ExtRat::parse("6/4"), q(3, 2));
    EXPECT_EQ(q(3, 2).str(), "3/2");
    EXPECT_EQ(q(2).str(), "2/1");
}
