#pragma once

// Cuts, initial segments and rank-1 value groups inside the rationals.
//
// A cut is stored through its lower set: (b, true) is {q <= b}, (b, false) is
// {q < b}. Cuts are compared by inclusion of lower sets.

#include <algorithm>
#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "rational.hpp"

namespace vfield {

class Cut {
public:
    Cut() = default;
    Cut(ExtRat bound, bool attained) : bound_(std::move(bound)), attained_(attained)
    {
        if (!bound_.is_finite()) attained_ = false;
    }

    /// s^- : the lower set {q < s}.
    static Cut minus(const ExtRat& s) { return Cut(s, false); }
    /// s^+ : the lower set {q <= s}.
    static Cut plus(const ExtRat& s) { return Cut(s, true); }

    const ExtRat& bound() const { return bound_; }
    bool attained() const { return attained_; }

    friend bool operator==(const Cut&, const Cut&) = default;
    friend std::strong_ordering operator<=>(const Cut& x, const Cut& y)
    {
        if (auto c = x.bound_ <=> y.bound_; c != 0) return c;
        return static_cast<int>(x.attained_) <=> static_cast<int>(y.attained_);
    }

    /// Whether the rational q lies in the lower set.
    bool contains(const Rational& q) const
    {
        ExtRat x(q);
        return attained_ ? x <= bound_ : x < bound_;
    }

    std::string str() const { return "(" + bound_.str() + (attained_ ? ", attained)" : ", open)"); }

private:
    ExtRat bound_ = ExtRat::neg_inf();
    bool attained_ = false;
};

enum class Ordering { less, equal, greater };

inline Ordering cut_compare(const Cut& x, const Cut& y)
{
    auto c = x <=> y;
    if (c < 0) return Ordering::less;
    if (c > 0) return Ordering::greater;
    return Ordering::equal;
}

/// Certified bracket [lo, hi] around a cut that may not be known exactly.
struct CutEnclosure {
    Cut lo;
    Cut hi;

    CutEnclosure() = default;
    CutEnclosure(Cut l, Cut h) : lo(std::move(l)), hi(std::move(h))
    {
        if (hi < lo) throw Error("cut enclosure with lo > hi");
    }

    bool exact() const { return lo == hi; }
    friend bool operator==(const CutEnclosure&, const CutEnclosure&) = default;
};

/// The cut of n*S + alpha.
inline Cut segment_affine(const Cut& s, std::int64_t n, const ExtRat& alpha)
{
    if (n <= 0) throw Error("segment_affine: n must be positive");
    if (!alpha.is_finite()) throw Error("segment_affine: alpha must be finite");
    return Cut(scale(s.bound(), Rational(n)) + alpha, s.attained());
}

enum class Side { plus, minus };

/// S^+ (least initial segment containing S) or S^- (largest initial segment
/// disjoint from S) for a finite sample S.
inline Cut cut_of_sample(std::span<const ExtRat> values, Side side)
{
    if (values.empty()) throw Error("cut_of_sample: empty sample");
    for (const auto& v : values)
        if (!v.is_finite()) throw Error("cut_of_sample: infinite value in sample");
    if (side == Side::plus) return Cut(*std::max_element(values.begin(), values.end()), true);
    return Cut(*std::min_element(values.begin(), values.end()), false);
}

struct TranslateReport {
    bool lt_alpha = false;      // v(a-K) < alpha
    bool lt_strict_gap = false; // v(a-K) bounded away from alpha
    friend bool operator==(const TranslateReport&, const TranslateReport&) = default;
};

inline TranslateReport dist_translate(const Cut& d, const ExtRat& alpha)
{
    if (!alpha.is_finite()) throw Error("dist_translate: alpha must be finite");
    auto am = Cut::minus(alpha);
    return {d <= am, d < am};
}

enum class Verdict { proved, refuted, unknown };

inline const char* to_string(Verdict v)
{
    switch (v) {
    case Verdict::proved: return "proved";
    case Verdict::refuted: return "refuted";
    default: return "unknown";
    }
}

inline Verdict parse_verdict(std::string_view s)
{
    if (s == "proved") return Verdict::proved;
    if (s == "refuted") return Verdict::refuted;
    if (s == "unknown") return Verdict::unknown;
    throw Error("unknown verdict: " + std::string(s));
}

/// A rank-1 subgroup of Q: the group generated by `generators`, closed under
/// division by p when `p_divisible_closure` is set.
class ValueGroupDesc {
public:
    ValueGroupDesc() = default;
    ValueGroupDesc(std::vector<Rational> generators, bool p_divisible_closure, std::int64_t p)
        : generators_(std::move(generators)), closure_(p_divisible_closure), p_(p)
    {
        for (const auto& g : generators_)
            if (g <= 0) throw Error("value group generators must be positive");
        if (p < 2) throw Error("value group prime must be >= 2");
        // The generated group is g*Z with g the rational gcd of the generators.
        BigInt num = 0, den = 1;
        for (const auto& g : generators_) {
            num = boost::multiprecision::gcd(num, boost::multiprecision::numerator(g));
            den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(g));
        }
        step_ = generators_.empty() ? Rational(0) : Rational(num, den);
    }

    const std::vector<Rational>& generators() const { return generators_; }
    bool p_divisible_closure() const { return closure_; }
    std::int64_t p() const { return p_; }
    /// Positive generator of the group before closure (0 for the trivial group).
    const Rational& step() const { return step_; }

    std::string str() const
    {
        std::string g = step_ == 1 ? "Z" : to_string(step_) + "Z";
        return closure_ ? g + "[1/" + std::to_string(p_) + "]" : g;
    }

    bool contains(const Rational& q) const
    {
        if (q == 0) return true;
        if (step_ == 0) return false;
        Rational r = q / step_;
        BigInt den = boost::multiprecision::denominator(r);
        if (den == 1) return true;
        if (!closure_) return false;
        while (den % p_ == 0) den /= p_;
        return den == 1;
    }

    /// p-divisibility of the described group, with a witness q/p not in the
    /// group when refuted.
    std::pair<Verdict, std::optional<Rational>> p_divisible() const
    {
        if (step_ == 0 || closure_) return {Verdict::proved, std::nullopt};
        return {Verdict::refuted, step_ / p_};
    }

private:
    std::vector<Rational> generators_;
    bool closure_ = false;
    std::int64_t p_ = 2;
    Rational step_{0};
};

} // namespace vfield
