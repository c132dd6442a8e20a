#pragma once

// Exact rationals and the rationals extended by -inf / +inf.

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace vfield {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown for every violated precondition in the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline Rational make_rational(std::int64_t num, std::int64_t den = 1)
{
    if (den == 0) throw Error("rational with zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

/// "num/den" in lowest terms (denominator always written).
inline std::string to_string(const Rational& q)
{
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Rational parse_rational(std::string_view s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(BigInt(std::string(s)));
        BigInt num(std::string(s.substr(0, slash)));
        BigInt den(std::string(s.substr(slash + 1)));
        if (den == 0) throw Error("rational with zero denominator: " + std::string(s));
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw Error("malformed rational: " + std::string(s));
    }
}

/// floor and ceil of an exact rational.
inline BigInt floor(const Rational& q)
{
    BigInt n = boost::multiprecision::numerator(q);
    BigInt d = boost::multiprecision::denominator(q);
    BigInt r = n / d;
    if (n < 0 && r * d != n) r -= 1;
    return r;
}

inline BigInt ceil(const Rational& q)
{
    return -floor(-q);
}

/// A rational number or one of the symbols -inf, +inf.
class ExtRat {
public:
    enum class Kind : std::uint8_t { neg_inf, finite, pos_inf };

    ExtRat() = default;
    ExtRat(Rational v) : kind_(Kind::finite), value_(std::move(v)) {}
    ExtRat(std::int64_t v) : kind_(Kind::finite), value_(v) {}

    static ExtRat pos_inf() { return ExtRat(Kind::pos_inf); }
    static ExtRat neg_inf() { return ExtRat(Kind::neg_inf); }
    static ExtRat frac(std::int64_t num, std::int64_t den) { return ExtRat(make_rational(num, den)); }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::finite; }
    bool is_pos_inf() const { return kind_ == Kind::pos_inf; }
    bool is_neg_inf() const { return kind_ == Kind::neg_inf; }

    const Rational& value() const
    {
        if (!is_finite()) throw Error("value() of an infinite ExtRat");
        return value_;
    }

    friend bool operator==(const ExtRat& a, const ExtRat& b)
    {
        return a.kind_ == b.kind_ && (!a.is_finite() || a.value_ == b.value_);
    }

    friend std::strong_ordering operator<=>(const ExtRat& a, const ExtRat& b)
    {
        if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
        if (!a.is_finite()) return std::strong_ordering::equal;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ > b.value_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend ExtRat operator+(const ExtRat& a, const ExtRat& b)
    {
        if (a.is_finite() && b.is_finite()) return ExtRat(a.value_ + b.value_);
        if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
            throw Error("undefined sum of opposite infinities");
        return a.is_finite() ? b : a;
    }

    ExtRat operator-() const
    {
        switch (kind_) {
        case Kind::pos_inf: return neg_inf();
        case Kind::neg_inf: return pos_inf();
        default: return ExtRat(-value_);
        }
    }

    friend ExtRat operator-(const ExtRat& a, const ExtRat& b) { return a + (-b); }

    /// Multiplication by a positive rational scalar.
    friend ExtRat scale(const ExtRat& a, const Rational& s)
    {
        if (s <= 0) throw Error("ExtRat scale factor must be positive");
        return a.is_finite() ? ExtRat(a.value_ * s) : a;
    }

    std::string str() const
    {
        switch (kind_) {
        case Kind::pos_inf: return "+inf";
        case Kind::neg_inf: return "-inf";
        default: return to_string(value_);
        }
    }

    static ExtRat parse(std::string_view s)
    {
        if (s == "+inf" || s == "inf") return pos_inf();
        if (s == "-inf") return neg_inf();
        return ExtRat(parse_rational(s));
    }

    friend std::ostream& operator<<(std::ostream& os, const ExtRat& x) { return os << x.str(); }

private:
    explicit ExtRat(Kind k) : kind_(k) {}

    Kind kind_ = Kind::finite;
    Rational value_{0};
};

inline const ExtRat& min(const ExtRat& a, const ExtRat& b) { return b < a ? b : a; }
inline const ExtRat& max(const ExtRat& a, const ExtRat& b) { return a < b ? b : a; }

} // namespace vfield
