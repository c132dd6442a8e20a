#pragma once

// Truncated generalized power series with rational exponents.
//
// equal_char: sum c_e t^e with c_e in F_q, characteristic p, no carries.
// mixed_char: sum c_e w^(eD) with digits c_e in {0..p-1}, where the session
//             uniformizer w satisfies w^D = sign * p. The symbol at exponent e
//             is written p^e; digit sums carry into exponent e + 1 (= e + vp).
//
// Exponents are stored as integers k = e * D, so every exponent denominator
// must divide the session bound D. Terms at exponents >= precision are
// uncertified and never stored.

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "fq.hpp"
#include "rational.hpp"

namespace vfield {

enum class Mode { equal_char, mixed_char };

inline const char* to_string(Mode m) { return m == Mode::equal_char ? "equal" : "mixed"; }

inline Mode parse_mode(std::string_view s)
{
    if (s == "equal") return Mode::equal_char;
    if (s == "mixed") return Mode::mixed_char;
    throw Error("unknown mode: " + std::string(s));
}

/// Immutable session parameters shared by every series of a session.
class Context {
public:
    struct Params {
        Mode mode = Mode::equal_char;
        std::int64_t p = 2;
        int m = 1;
        std::int64_t denominator_bound = 0; // 0 = p^8
        int uniformizer_sign = 1;           // mixed only: w^D = sign * p
        ExtRat default_precision = ExtRat(8);
    };

    explicit Context(Params params) : params_(std::move(params)), field_(params_.p, params_.m)
    {
        if (params_.mode == Mode::mixed_char && params_.m != 1)
            throw Error("mixed characteristic supports only the prime residue field");
        if (params_.denominator_bound == 0) {
            params_.denominator_bound = 1;
            for (int i = 0; i < 8; ++i) params_.denominator_bound *= params_.p;
        }
        if (params_.denominator_bound < 1) throw Error("denominator bound must be positive");
        if (params_.uniformizer_sign != 1 && params_.uniformizer_sign != -1)
            throw Error("uniformizer sign must be +1 or -1");
        if (!params_.default_precision.is_finite() || params_.default_precision.value() <= 0)
            throw Error("default precision must be a positive rational");
    }

    static std::shared_ptr<const Context> make(Params params) { return std::make_shared<const Context>(std::move(params)); }

    static std::shared_ptr<const Context> equal(std::int64_t p, int m = 1, std::int64_t D = 0, ExtRat precision = ExtRat(8))
    {
        return make({Mode::equal_char, p, m, D, 1, std::move(precision)});
    }

    /// Mixed session; for odd p the default uniformizer satisfies w^D = -p so
    /// that the ambient field contains a primitive p-th root of unity.
    static std::shared_ptr<const Context> mixed(std::int64_t p, std::int64_t D = 0, ExtRat precision = ExtRat(4), int sign = 0)
    {
        if (sign == 0) sign = p == 2 ? 1 : -1;
        if (D == 0) {
            D = 1;
            for (int i = 0; i < (p == 2 ? 8 : 4); ++i) D *= p;
            if (p != 2) D *= (p - 1);
        }
        return make({Mode::mixed_char, p, 1, D, sign, std::move(precision)});
    }

    Mode mode() const { return params_.mode; }
    std::int64_t p() const { return params_.p; }
    std::int64_t q() const { return field_.q(); }
    std::int64_t D() const { return params_.denominator_bound; }
    int uniformizer_sign() const { return params_.uniformizer_sign; }
    const ExtRat& default_precision() const { return params_.default_precision; }
    const FiniteField& field() const { return field_; }
    const Params& params() const { return params_; }

    bool same_session(const Context& o) const
    {
        return params_.mode == o.params_.mode && params_.p == o.params_.p && params_.m == o.params_.m &&
               params_.denominator_bound == o.params_.denominator_bound &&
               params_.uniformizer_sign == o.params_.uniformizer_sign;
    }

    /// k = e * D, failing loudly when e's denominator does not divide D.
    std::int64_t key_of(const Rational& e) const
    {
        Rational k = e * D();
        if (boost::multiprecision::denominator(k) != 1)
            throw Error("exponent " + to_string(e) + " exceeds the denominator bound D = " + std::to_string(D()));
        BigInt n = boost::multiprecision::numerator(k);
        if (n > std::numeric_limits<std::int64_t>::max() / 4 || n < std::numeric_limits<std::int64_t>::min() / 4)
            throw Error("exponent out of range");
        return static_cast<std::int64_t>(n);
    }

    Rational exponent_of(std::int64_t key) const { return make_rational(key, D()); }

    /// Least key that is not certified under the given precision.
    std::int64_t cutoff(const ExtRat& precision) const
    {
        if (precision.is_pos_inf()) return std::numeric_limits<std::int64_t>::max();
        if (precision.is_neg_inf()) return std::numeric_limits<std::int64_t>::min();
        BigInt c = ceil(precision.value() * D());
        if (c > std::numeric_limits<std::int64_t>::max() / 4) return std::numeric_limits<std::int64_t>::max();
        if (c < std::numeric_limits<std::int64_t>::min() / 4) return std::numeric_limits<std::int64_t>::min();
        return static_cast<std::int64_t>(c);
    }

private:
    Params params_;
    FiniteField field_;
};

using ContextPtr = std::shared_ptr<const Context>;

class Series {
public:
    using Terms = std::map<std::int64_t, FqElem>;

    Series() = default;
    explicit Series(ContextPtr ctx, ExtRat precision = ExtRat::pos_inf()) : ctx_(std::move(ctx)), precision_(std::move(precision))
    {
        if (!ctx_) throw Error("series without session context");
        if (precision_.is_neg_inf()) throw Error("series precision -inf");
    }

    static Series zero(ContextPtr ctx, ExtRat precision = ExtRat::pos_inf()) { return Series(std::move(ctx), std::move(precision)); }

    static Series monomial(ContextPtr ctx, FqElem c, const Rational& e, ExtRat precision = ExtRat::pos_inf())
    {
        Series s(std::move(ctx), std::move(precision));
        if (s.ctx_->mode() == Mode::mixed_char && c.code >= s.ctx_->p())
            throw Error("mixed-characteristic digit out of range");
        std::int64_t k = s.ctx_->key_of(e);
        if (c.code != 0 && k < s.cutoff()) s.terms_[k] = c;
        return s;
    }

    static Series monomial(ContextPtr ctx, std::int64_t c, const Rational& e)
    {
        if (ctx->mode() == Mode::mixed_char) return from_int(ctx, c) * monomial(ctx, FqElem{1}, e);
        auto f = ctx->field().from_int(c);
        return monomial(std::move(ctx), f, e);
    }

    static Series one(ContextPtr ctx) { return monomial(std::move(ctx), FqElem{1}, Rational(0)); }

    /// The integer n; in mixed mode the p-adic digit expansion of n.
    static Series from_int(ContextPtr ctx, std::int64_t n)
    {
        Series s(ctx);
        if (ctx->mode() == Mode::equal_char) {
            auto c = ctx->field().from_int(n);
            if (c.code != 0) s.terms_[0] = c;
            return s;
        }
        std::map<std::int64_t, BigInt> acc;
        if (n != 0) acc[0] = n;
        s.normalize_mixed(acc);
        return s;
    }

    /// num/den; mixed mode expands 1/den to the session default precision.
    static Series from_rational(ContextPtr ctx, const Rational& q)
    {
        BigInt num = boost::multiprecision::numerator(q), den = boost::multiprecision::denominator(q);
        Series n = from_int(ctx, static_cast<std::int64_t>(num));
        if (den == 1) return n;
        Series d = from_int(ctx, static_cast<std::int64_t>(den));
        ExtRat target = ctx->default_precision();
        return n * d.invert(target);
    }

    const ContextPtr& context() const { return ctx_; }
    const Terms& terms() const { return terms_; }
    const ExtRat& precision() const { return precision_; }
    Mode mode() const { return ctx_->mode(); }
    bool empty() const { return terms_.empty(); }
    /// Exactly zero: no terms and infinite precision.
    bool is_exact_zero() const { return terms_.empty() && precision_.is_pos_inf(); }
    bool is_exact() const { return precision_.is_pos_inf(); }

    /// Smallest exponent of the support; +inf for a series with no stored terms.
    ExtRat valuation() const
    {
        if (terms_.empty()) return ExtRat::pos_inf();
        return ExtRat(ctx_->exponent_of(terms_.begin()->first));
    }

    /// The valuation when it is certified: a stored term, or exact zero.
    std::optional<ExtRat> certified_valuation() const
    {
        if (!terms_.empty() || precision_.is_pos_inf()) return valuation();
        return std::nullopt;
    }

    /// Lower bound for the valuation: the valuation, or the precision when empty.
    ExtRat valuation_lower_bound() const { return terms_.empty() ? precision_ : valuation(); }

    FqElem leading_coefficient() const { return terms_.empty() ? FqElem{0} : terms_.begin()->second; }

    FqElem coefficient(const Rational& e) const
    {
        auto it = terms_.find(ctx_->key_of(e));
        return it == terms_.end() ? FqElem{0} : it->second;
    }

    std::vector<Rational> support() const
    {
        std::vector<Rational> out;
        for (const auto& [k, c] : terms_) out.push_back(ctx_->exponent_of(k));
        return out;
    }

    Series truncated(const ExtRat& precision) const
    {
        Series s(*this);
        s.precision_ = min(precision_, precision);
        s.drop_uncertified();
        return s;
    }

    Series with_term(const Rational& e, FqElem c) const
    {
        Series s(*this);
        std::int64_t k = ctx_->key_of(e);
        if (k >= cutoff()) throw Error("term beyond the series precision");
        if (c.code == 0)
            s.terms_.erase(k);
        else
            s.terms_[k] = c;
        return s;
    }

    /// Terms with exponent strictly below e (precision unchanged; exact when
    /// the dropped part is the intended remainder).
    /// The certified terms, read as an exact element.
    Series exact_part() const
    {
        Series s(*this);
        s.precision_ = ExtRat::pos_inf();
        return s;
    }

    Series prefix_below(const Rational& e) const
    {
        Series s(ctx_, ExtRat::pos_inf());
        std::int64_t k = ctx_->key_of(e);
        for (const auto& [key, c] : terms_)
            if (key < k) s.terms_[key] = c;
        return s;
    }

    friend Series operator+(const Series& a, const Series& b) { return combine(a, b, false); }
    friend Series operator-(const Series& a, const Series& b) { return combine(a, b, true); }
    Series operator-() const { return zero(ctx_) - *this; }

    friend Series operator*(const Series& a, const Series& b)
    {
        check_same(a, b);
        const auto& ctx = a.ctx_;
        ExtRat va = a.valuation_lower_bound(), vb = b.valuation_lower_bound();
        ExtRat prec = min(sum_or_inf(a.precision_, vb), sum_or_inf(b.precision_, va));
        Series out(ctx, prec);
        std::int64_t cut = out.cutoff();
        if (ctx->mode() == Mode::equal_char) {
            const auto& F = ctx->field();
            for (const auto& [ka, ca] : a.terms_)
                for (const auto& [kb, cb] : b.terms_) {
                    std::int64_t k = ka + kb;
                    if (k >= cut) break;
                    auto& slot = out.terms_[k];
                    slot = F.add(slot, F.mul(ca, cb));
                    if (slot.code == 0) out.terms_.erase(k);
                }
            return out;
        }
        std::map<std::int64_t, BigInt> acc;
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) {
                std::int64_t k = ka + kb;
                if (k >= cut) break;
                acc[k] += static_cast<std::int64_t>(ca.code) * static_cast<std::int64_t>(cb.code);
            }
        out.normalize_mixed(acc);
        return out;
    }

    Series scaled(std::int64_t n) const { return from_int(ctx_, n) * *this; }

    Series pow(std::int64_t n) const
    {
        if (n < 0) throw Error("negative power; use invert");
        Series result = one(ctx_), base = *this;
        while (n > 0) {
            if (n & 1) result = result * base;
            n >>= 1;
            if (n > 0) base = base * base;
        }
        return result;
    }

    /// Inverse to absolute precision min(target, precision - 2 va).
    Series invert(const ExtRat& target) const
    {
        if (!target.is_finite()) throw Error("invert: target precision must be finite");
        if (terms_.empty()) throw Error("invert: zero (or uncertified) series");
        const auto& F = ctx_->field();
        ExtRat va = valuation();
        FqElem lc = leading_coefficient();
        FqElem lc_inv = F.inv(lc);
        ExtRat out_prec = min(target, precision_ - va - va);
        Series s = monomial(ctx_, lc_inv, -va.value(), out_prec);
        ExtRat residual_prec = out_prec + va;
        Series one_s = one(ctx_);
        for (int iter = 0; iter < 200; ++iter) {
            Series e = (one_s - (*this) * s).truncated(residual_prec);
            if (e.empty()) {
                if (e.precision() < residual_prec) throw Error("invert: precision exhausted");
                return s.truncated(out_prec);
            }
            s = (s + s * e).truncated(out_prec);
        }
        throw Error("invert: iteration budget exhausted");
    }

    friend Series operator/(const Series& a, const Series& b)
    {
        if (b.empty()) throw Error("division by a zero (or uncertified) series");
        if (b.is_exact() && b.terms_.size() == 1 && (b.mode() == Mode::equal_char || b.leading_coefficient() == FqElem{1}))
            return a * monomial(b.ctx_, b.ctx_->field().inv(b.leading_coefficient()), -b.valuation().value());
        ExtRat target = a.precision_.is_finite() ? a.precision_ - a.valuation_lower_bound() - b.valuation()
                                                 : a.ctx_->default_precision();
        return a * b.invert(target);
    }

    /// x -> x^p in characteristic p (exponents and coefficients map exactly).
    Series frobenius() const
    {
        require_equal("frobenius");
        const auto& F = ctx_->field();
        Series s(ctx_, scale(precision_, Rational(ctx_->p())));
        for (const auto& [k, c] : terms_) s.terms_[k * ctx_->p()] = F.frobenius(c);
        s.drop_uncertified();
        return s;
    }

    /// The p-th root in the perfect hull: exponents divided by p, coefficients
    /// through inverse Frobenius.
    Series pth_root() const
    {
        require_equal("pth_root");
        const auto& F = ctx_->field();
        Series s(ctx_, scale(precision_, make_rational(1, ctx_->p())));
        for (const auto& [k, c] : terms_) {
            if (k % ctx_->p() != 0)
                throw Error("pth_root: exponent " + to_string(ctx_->exponent_of(k)) + "/p exceeds the denominator bound");
            s.terms_[k / ctx_->p()] = F.frobenius_inverse(c);
        }
        return s;
    }

    /// Agreement up to the common precision.
    bool equals_to_precision(const Series& o) const
    {
        Series d = *this - o;
        return d.empty();
    }

    std::int64_t cutoff() const { return ctx_->cutoff(precision_); }

    std::string str() const
    {
        std::ostringstream os;
        const char* var = mode() == Mode::equal_char ? "t" : "p";
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << coeff_str(c) << "*" << var << "^(" << to_string(ctx_->exponent_of(k)) << ")";
        }
        if (first) os << "0";
        if (!precision_.is_pos_inf()) os << " + O(" << var << "^(" << precision_.str() << "))";
        return os.str();
    }

    std::string coeff_str(FqElem c) const
    {
        const auto& F = ctx_->field();
        if (F.m() == 1) return std::to_string(c.code);
        std::string s = "[";
        auto co = F.coordinates(c);
        for (std::size_t i = 0; i < co.size(); ++i) s += (i ? "," : "") + std::to_string(co[i]);
        return s + "]";
    }

    friend bool operator==(const Series& a, const Series& b)
    {
        return a.ctx_->same_session(*b.ctx_) && a.terms_ == b.terms_ && a.precision_ == b.precision_;
    }

private:
    static ExtRat sum_or_inf(const ExtRat& a, const ExtRat& b)
    {
        if (a.is_pos_inf() || b.is_pos_inf()) return ExtRat::pos_inf();
        return a + b;
    }

    static void check_same(const Series& a, const Series& b)
    {
        if (!a.ctx_ || !b.ctx_) throw Error("series without session context");
        if (a.ctx_ != b.ctx_ && !a.ctx_->same_session(*b.ctx_)) throw Error("series from different sessions (mode mismatch)");
    }

    void require_equal(const char* op) const
    {
        if (mode() != Mode::equal_char) throw Error(std::string(op) + " requires equal characteristic");
    }

    void drop_uncertified()
    {
        std::int64_t cut = cutoff();
        terms_.erase(terms_.lower_bound(cut), terms_.end());
    }

    static Series combine(const Series& a, const Series& b, bool subtract)
    {
        check_same(a, b);
        const auto& ctx = a.ctx_;
        Series out(ctx, min(a.precision_, b.precision_));
        std::int64_t cut = out.cutoff();
        if (ctx->mode() == Mode::equal_char) {
            const auto& F = ctx->field();
            for (const auto& [k, c] : a.terms_)
                if (k < cut) out.terms_[k] = c;
            for (const auto& [k, c] : b.terms_) {
                if (k >= cut) break;
                auto it = out.terms_.find(k);
                FqElem cur = it == out.terms_.end() ? FqElem{0} : it->second;
                FqElem v = subtract ? F.sub(cur, c) : F.add(cur, c);
                if (v.code == 0)
                    out.terms_.erase(k);
                else
                    out.terms_[k] = v;
            }
            return out;
        }
        std::map<std::int64_t, BigInt> acc;
        for (const auto& [k, c] : a.terms_)
            if (k < cut) acc[k] += c.code;
        for (const auto& [k, c] : b.terms_) {
            if (k >= cut) break;
            if (subtract)
                acc[k] -= c.code;
            else
                acc[k] += c.code;
        }
        out.normalize_mixed(acc);
        return out;
    }

    // Expand integer digit sums p-adically; the carry of a sum at exponent e
    // moves to e + 1 multiplied by the uniformizer sign.
    void normalize_mixed(std::map<std::int64_t, BigInt>& acc)
    {
        const std::int64_t p = ctx_->p(), D = ctx_->D();
        const int sign = ctx_->uniformizer_sign();
        terms_.clear();
        std::int64_t cut = cutoff();
        const std::int64_t guard = acc.empty() ? 0 : acc.rbegin()->first + 64 * D;
        for (auto it = acc.begin(); it != acc.end(); ++it) {
            std::int64_t k = it->first;
            if (k >= cut) break;
            if (k > guard && cut == std::numeric_limits<std::int64_t>::max()) {
                precision_ = max(ctx_->default_precision(), ExtRat(ctx_->exponent_of(k)));
                cut = cutoff();
                if (k >= cut) break;
            }
            BigInt s = it->second;
            BigInt r = s % p;
            if (r < 0) r += p;
            BigInt carry = (s - r) / p;
            if (r != 0) terms_[k] = FqElem{static_cast<std::uint32_t>(r)};
            if (carry != 0) {
                if (carry < 0 && sign == 1 && cut == std::numeric_limits<std::int64_t>::max()) {
                    // A negative carry never terminates; certify only to the
                    // session precision (or one step past the current term).
                    ExtRat cap = max(ctx_->default_precision(), ExtRat(ctx_->exponent_of(k + D)));
                    precision_ = cap;
                    cut = cutoff();
                }
                if (k + D < cut) acc[k + D] += carry * sign;
            }
        }
    }

    ContextPtr ctx_;
    Terms terms_;
    ExtRat precision_ = ExtRat::pos_inf();
};

/// Valuation and residue; (+inf, 0) for the zero series.
inline std::pair<ExtRat, FqElem> valuation_residue(const Series& a)
{
    return {a.valuation(), a.leading_coefficient()};
}

/// Coefficients indexed by degree; coefficient i multiplies X^i.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Series> coefficients) : coeffs_(std::move(coefficients))
    {
        while (!coeffs_.empty() && coeffs_.back().is_exact_zero()) coeffs_.pop_back();
        if (coeffs_.empty()) throw Error("zero polynomial");
        if (coeffs_.back().empty()) throw Error("polynomial leading coefficient is zero");
    }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Series>& coefficients() const { return coeffs_; }
    const Series& coefficient(int i) const { return coeffs_.at(static_cast<std::size_t>(i)); }
    const ContextPtr& context() const { return coeffs_.front().context(); }

    Series operator()(const Series& x) const
    {
        Series acc = coeffs_.back();
        for (int i = degree() - 1; i >= 0; --i) acc = acc * x + coeffs_[static_cast<std::size_t>(i)];
        return acc;
    }

    Polynomial derivative() const
    {
        if (degree() == 0) return Polynomial(std::vector<Series>{Series::zero(context())}, true);
        std::vector<Series> d;
        for (int i = 1; i <= degree(); ++i) d.push_back(coeffs_[static_cast<std::size_t>(i)].scaled(i));
        return Polynomial(std::move(d), true);
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    std::string str() const
    {
        std::string s;
        for (int i = degree(); i >= 0; --i) {
            const auto& c = coeffs_[static_cast<std::size_t>(i)];
            if (c.is_exact_zero()) continue;
            if (!s.empty()) s += " + ";
            s += "(" + c.str() + ")*X^" + std::to_string(i);
        }
        return s;
    }

private:
    // Derivatives in characteristic p may have a vanishing leading coefficient.
    Polynomial(std::vector<Series> coefficients, bool) : coeffs_(std::move(coefficients)) {}

    std::vector<Series> coeffs_;
};

struct NewtonResult {
    Series root;
    ExtRat residual_valuation; // certified lower bound for v(f(root))
    ExtRat derivative_valuation;
    int iterations = 0;
};

/// Hensel-Newton refinement; requires v(f(start)) > 2 v(f'(start)).
inline NewtonResult newton_root(const Polynomial& f, const Series& start, const ExtRat& target_precision)
{
    if (!target_precision.is_finite()) throw Error("newton_root: target precision must be finite");
    if (f.degree() == 1) {
        Series x = -(f.coefficient(0) / f.coefficient(1));
        return {x, x.precision(), f.coefficient(1).valuation(), 0};
    }
    Polynomial df = f.derivative();
    Series fx = f(start), dfx = df(start);
    if (fx.is_exact_zero() || (fx.empty() && fx.precision() >= target_precision)) {
        auto vd = dfx.empty() ? ExtRat::pos_inf() : dfx.valuation();
        return {start, fx.precision(), vd, 0};
    }
    if (dfx.empty()) throw Error("newton_root: derivative vanishes at start");
    ExtRat vdf = dfx.valuation();
    ExtRat vf = fx.valuation_lower_bound();
    if (!(vf > vdf + vdf)) throw Error("newton_root: convergence condition v(f(x0)) > 2 v(f'(x0)) fails");

    // Errors in x of size eps change f by about eps * f'; work with enough
    // extra precision to absorb the derivative's valuation.
    ExtRat slack = max(ExtRat(0), -vdf) + max(ExtRat(0), vdf);
    ExtRat work = target_precision + slack + ExtRat(1);
    Series x = start.truncated(work).exact_part();
    for (int iter = 1; iter <= 200; ++iter) {
        fx = f(x);
        if (fx.empty() || fx.valuation() >= target_precision) {
            if (fx.precision() < target_precision) throw Error("newton_root: precision budget exhausted");
            dfx = df(x);
            x = x.truncated(target_precision - vdf);
            return {x, target_precision, dfx.valuation(), iter - 1};
        }
        dfx = df(x);
        ExtRat rel = work - dfx.valuation();
        x = (x - fx * dfx.invert(rel)).truncated(work).exact_part();
    }
    throw Error("newton_root: iteration budget exhausted");
}

/// A primitive p-th root of unity to the given precision.
inline Series zeta_p(const ContextPtr& ctx, const ExtRat& target_precision)
{
    if (ctx->mode() != Mode::mixed_char) throw Error("zeta_p requires mixed characteristic");
    const std::int64_t p = ctx->p();
    if (p == 2) {
        // -1 = 1 + 2 + 4 + ...
        Series s = Series::zero(ctx, target_precision);
        for (std::int64_t k = 0; ExtRat(Rational(k)) < target_precision; ++k)
            s = s + Series::monomial(ctx, FqElem{1}, Rational(k), target_precision);
        return s;
    }
    // Cyclotomic polynomial 1 + X + ... + X^{p-1}.
    std::vector<Series> c;
    for (std::int64_t i = 0; i < p; ++i) c.push_back(Series::one(ctx));
    Polynomial phi(std::move(c));
    Rational e = make_rational(1, p - 1);
    for (std::int64_t digit = 1; digit < p; ++digit) {
        Series start = Series::one(ctx) + Series::monomial(ctx, FqElem{static_cast<std::uint32_t>(digit)}, e);
        Series fx = phi(start), dfx = phi.derivative()(start);
        if (dfx.empty() || !(fx.valuation_lower_bound() > dfx.valuation() + dfx.valuation())) continue;
        return newton_root(phi, start, target_precision + ExtRat(1)).root.truncated(target_precision);
    }
    throw Error("zeta_p: no Newton start in the session ambient (residue field lacks the needed roots)");
}

} // namespace vfield
