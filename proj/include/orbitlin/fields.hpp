#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "orbitlin/rational.hpp"

namespace orbitlin {

// A scalar of the active field. For the rationals the value lives in `q`;
// for a prime field it is the residue `r`. All arithmetic goes through Field,
// which knows which member is live; the dormant member stays at its default
// so structural equality is meaningful.
struct Scalar {
    Rational q;
    uint32_t r = 0;

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.q == b.q && a.r == b.r; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
};

// Runtime field selector: rationals (p == 0) or a prime field F_p, p <= 97.
class Field {
public:
    Field() = default;  // rationals
    explicit Field(uint32_t p) : p_(p) {
        if (p != 0 && !is_prime(p)) throw std::invalid_argument("Field: p must be prime");
        if (p > 97) throw std::invalid_argument("Field: primes above 97 not shipped");
    }

    static Field rationals() { return Field(); }
    static Field prime(uint32_t p) { return Field(p); }

    bool is_rationals() const { return p_ == 0; }
    uint32_t p() const { return p_; }

    Scalar zero() const { return Scalar{}; }
    Scalar one() const { return from_int(1); }

    Scalar from_int(long long n) const {
        Scalar s;
        if (p_ == 0) s.q = Rational(n);
        else s.r = static_cast<uint32_t>(((n % p_) + p_) % p_);
        return s;
    }
    Scalar from_rational(const Rational& x) const {
        if (p_ == 0) { Scalar s; s.q = x; return s; }
        // Residue of n/d, requiring gcd(d, p) = 1.
        Scalar n = from_int(x.num());
        Scalar d = from_int(x.den());
        return div(n, d);
    }

    bool is_zero(const Scalar& a) const { return p_ == 0 ? a.q.is_zero() : a.r == 0; }

    Scalar add(const Scalar& a, const Scalar& b) const {
        Scalar s;
        if (p_ == 0) s.q = a.q + b.q;
        else s.r = (a.r + b.r) % p_;
        return s;
    }
    Scalar sub(const Scalar& a, const Scalar& b) const {
        Scalar s;
        if (p_ == 0) s.q = a.q - b.q;
        else s.r = (a.r + p_ - b.r) % p_;
        return s;
    }
    Scalar neg(const Scalar& a) const { return sub(zero(), a); }
    Scalar mul(const Scalar& a, const Scalar& b) const {
        Scalar s;
        if (p_ == 0) s.q = a.q * b.q;
        else s.r = (uint64_t(a.r) * b.r) % p_;
        return s;
    }
    Scalar inv(const Scalar& a) const {
        if (is_zero(a)) throw std::domain_error("Field: inverse of zero");
        if (p_ == 0) { Scalar s; s.q = Rational(1) / a.q; return s; }
        // Fermat: a^(p-2) mod p.
        uint64_t b = a.r, e = p_ - 2, acc = 1;
        while (e) {
            if (e & 1) acc = acc * b % p_;
            b = b * b % p_;
            e >>= 1;
        }
        Scalar s;
        s.r = static_cast<uint32_t>(acc);
        return s;
    }
    Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

    std::string str(const Scalar& a) const { return p_ == 0 ? a.q.str() : std::to_string(a.r); }

    Scalar parse(const std::string& s) const { return from_rational(Rational::parse(s)); }

    // CLI spelling: "q" for the rationals, "p:<prime>" for F_p.
    static Field parse_spec(const std::string& s) {
        if (s == "q" || s == "Q") return rationals();
        if (s.rfind("p:", 0) == 0) return prime(static_cast<uint32_t>(std::stoul(s.substr(2))));
        throw std::invalid_argument("field spec must be 'q' or 'p:<prime>'");
    }
    std::string spec() const { return p_ == 0 ? "q" : "p:" + std::to_string(p_); }

    friend bool operator==(const Field& a, const Field& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Field& a, const Field& b) { return !(a == b); }

private:
    static bool is_prime(uint32_t n) {
        if (n < 2) return false;
        for (uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

    uint32_t p_ = 0;
};

// Coefficients of Lin_E vectors: tuples in F^m, m = 1 for plain scalars.
// Only ever added, subtracted and negated by the cog machinery.
using Coeff = std::vector<Scalar>;

inline Coeff coeff_zero(const Field& f, size_t m) { return Coeff(m, f.zero()); }
inline bool coeff_is_zero(const Field& f, const Coeff& c) {
    for (const auto& s : c)
        if (!f.is_zero(s)) return false;
    return true;
}
inline Coeff coeff_add(const Field& f, const Coeff& a, const Coeff& b) {
    Coeff r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
    return r;
}
inline Coeff coeff_sub(const Field& f, const Coeff& a, const Coeff& b) {
    Coeff r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = f.sub(a[i], b[i]);
    return r;
}
inline Coeff coeff_neg(const Field& f, const Coeff& a) {
    Coeff r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = f.neg(a[i]);
    return r;
}
inline Coeff coeff_scale(const Field& f, const Scalar& s, const Coeff& a) {
    Coeff r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = f.mul(s, a[i]);
    return r;
}

}  // namespace orbitlin
