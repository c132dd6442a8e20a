#pragma once

// Small finite fields F_q, q = p^m, via log/antilog tables.
//
// An element is encoded as an integer in [0, q) whose base-p digits are the
// coordinates of a polynomial in the generator modulo a fixed irreducible
// polynomial of degree m.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rational.hpp"

namespace vfield {

struct FqElem {
    std::uint32_t code = 0;
    friend bool operator==(const FqElem&, const FqElem&) = default;
    friend auto operator<=>(const FqElem&, const FqElem&) = default;
};

inline bool is_prime(std::int64_t n)
{
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

class FiniteField {
public:
    FiniteField(std::int64_t p, int m) : p_(p), m_(m)
    {
        if (!is_prime(p)) throw Error("field characteristic must be prime");
        if (m < 1) throw Error("field degree must be >= 1");
        q_ = 1;
        for (int i = 0; i < m; ++i) q_ *= p;
        if (q_ > (1 << 16)) throw Error("finite field too large for table arithmetic");
        find_modulus_and_tables();
    }

    std::int64_t p() const { return p_; }
    int m() const { return m_; }
    std::int64_t q() const { return q_; }
    /// Coefficients (low to high, monic, length m+1) of the defining polynomial.
    const std::vector<std::int64_t>& modulus() const { return modulus_; }

    FqElem zero() const { return {0}; }
    FqElem one() const { return {1}; }
    FqElem from_int(std::int64_t n) const
    {
        n %= p_;
        if (n < 0) n += p_;
        return {static_cast<std::uint32_t>(n)};
    }
    /// The class of X, the adjoined generator (equals from_int for m = 1 is not meaningful).
    FqElem generator() const { return m_ == 1 ? FqElem{static_cast<std::uint32_t>(exp_[1])} : FqElem{static_cast<std::uint32_t>(p_)}; }

    bool is_prime_field_element(FqElem a) const { return a.code < p_; }

    FqElem add(FqElem a, FqElem b) const { return {combine(a.code, b.code, 1)}; }
    FqElem sub(FqElem a, FqElem b) const { return {combine(a.code, b.code, -1)}; }
    FqElem neg(FqElem a) const { return sub(zero(), a); }

    FqElem mul(FqElem a, FqElem b) const
    {
        if (a.code == 0 || b.code == 0) return zero();
        return {exp_[(log_[a.code] + log_[b.code]) % (q_ - 1)]};
    }

    FqElem inv(FqElem a) const
    {
        if (a.code == 0) throw Error("inverse of zero in F_q");
        return {exp_[(q_ - 1 - log_[a.code]) % (q_ - 1)]};
    }

    FqElem pow(FqElem a, std::int64_t e) const
    {
        if (a.code == 0) return e == 0 ? one() : zero();
        std::int64_t l = static_cast<std::int64_t>(log_[a.code]) * (e % (q_ - 1));
        l %= (q_ - 1);
        if (l < 0) l += q_ - 1;
        return {exp_[l]};
    }

    FqElem frobenius(FqElem a) const { return pow(a, p_); }
    /// x -> x^(1/p) = x^(q/p).
    FqElem frobenius_inverse(FqElem a) const { return pow(a, q_ / p_); }

    /// A root of x^p - x = r in F_q, if any (least code first).
    std::optional<FqElem> artin_schreier_root(FqElem r) const
    {
        for (std::uint32_t c = 0; c < q_; ++c) {
            FqElem x{c};
            if (sub(pow(x, p_), x) == r) return x;
        }
        return std::nullopt;
    }

    /// Integer 0..p-1 for prime fields; base-p coordinate list otherwise.
    std::vector<std::int64_t> coordinates(FqElem a) const
    {
        std::vector<std::int64_t> out;
        std::uint32_t c = a.code;
        for (int i = 0; i < m_; ++i) {
            out.push_back(c % p_);
            c /= static_cast<std::uint32_t>(p_);
        }
        return out;
    }

    FqElem from_coordinates(const std::vector<std::int64_t>& coords) const
    {
        if (static_cast<int>(coords.size()) != m_) throw Error("wrong number of F_q coordinates");
        std::uint32_t c = 0;
        for (int i = m_ - 1; i >= 0; --i) {
            if (coords[i] < 0 || coords[i] >= p_) throw Error("F_q coordinate out of range");
            c = c * static_cast<std::uint32_t>(p_) + static_cast<std::uint32_t>(coords[i]);
        }
        return {c};
    }

private:
    std::uint32_t combine(std::uint32_t a, std::uint32_t b, int sign) const
    {
        std::uint32_t out = 0, place = 1;
        for (int i = 0; i < m_; ++i) {
            std::int64_t d = (a % p_) + sign * static_cast<std::int64_t>(b % p_);
            d %= p_;
            if (d < 0) d += p_;
            out += static_cast<std::uint32_t>(d) * place;
            place *= static_cast<std::uint32_t>(p_);
            a /= static_cast<std::uint32_t>(p_);
            b /= static_cast<std::uint32_t>(p_);
        }
        return out;
    }

    // Multiply polynomial codes modulo modulus_ without tables.
    std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const
    {
        auto ca = coordinates({a}), cb = coordinates({b});
        std::vector<std::int64_t> prod(2 * m_, 0);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
        for (int k = 2 * m_ - 1; k >= m_; --k) {
            std::int64_t c = prod[k];
            if (c == 0) continue;
            for (int i = 0; i <= m_; ++i) {
                prod[k - m_ + i] = ((prod[k - m_ + i] - c * modulus_[i]) % p_ + p_) % p_;
            }
        }
        prod.resize(m_);
        return from_coordinates(prod).code;
    }

    void find_modulus_and_tables()
    {
        // Enumerate monic polynomials of degree m; accept the first for which
        // X (or, for m = 1, some residue) generates the multiplicative group.
        std::int64_t count = q_;
        for (std::int64_t idx = 0; idx < count; ++idx) {
            modulus_.assign(m_ + 1, 0);
            std::int64_t c = idx;
            for (int i = 0; i < m_; ++i) {
                modulus_[i] = c % p_;
                c /= p_;
            }
            modulus_[m_] = 1;
            if (m_ > 1 && modulus_[0] == 0) continue;
            std::vector<std::uint32_t> candidates;
            if (m_ == 1)
                for (std::uint32_t g = 1; g < q_; ++g) candidates.push_back(g);
            else
                candidates.push_back(static_cast<std::uint32_t>(p_));
            for (auto g : candidates)
                if (try_generator(g)) return;
        }
        throw Error("no primitive polynomial found");
    }

    bool try_generator(std::uint32_t g)
    {
        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        std::vector<bool> seen(q_, false);
        std::uint32_t x = 1;
        for (std::int64_t i = 0; i < q_ - 1; ++i) {
            if (x == 0 || seen[x]) return false;
            seen[x] = true;
            exp_[i] = x;
            log_[x] = static_cast<std::uint32_t>(i);
            x = m_ == 1 ? static_cast<std::uint32_t>((static_cast<std::int64_t>(x) * g) % p_) : slow_mul(x, g);
        }
        return x == 1;
    }

    std::int64_t p_;
    int m_;
    std::int64_t q_ = 0;
    std::vector<std::int64_t> modulus_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
};

} // namespace vfield
