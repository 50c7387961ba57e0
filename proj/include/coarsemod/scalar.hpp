#pragma once

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>

namespace coarsemod {

enum class RingKind { Integers, Rationals, IntegersMod, PrimeField };

/// Exact scalar: num/den with den > 0 and gcd(num,den) = 1.
/// Residue-ring values keep den = 1 and num in [0, modulus).
struct Scalar {
    mpz_class num{0};
    mpz_class den{1};

    Scalar() = default;
    Scalar(long v) : num(v) {}
    Scalar(mpz_class v) : num(std::move(v)) {}
    Scalar(mpz_class n, mpz_class d);

    bool operator==(const Scalar& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool operator<(const Scalar& o) const;  // exact rational compare
    std::string str() const;
};

/// Coefficient ring descriptor. All arithmetic goes through this object so the
/// residue reduction and rational normalization stay in one place.
struct Ring {
    RingKind kind = RingKind::Integers;
    mpz_class modulus{0};  // for IntegersMod / PrimeField

    static Ring integers() { return {RingKind::Integers, 0}; }
    static Ring rationals() { return {RingKind::Rationals, 0}; }
    static Ring integersMod(const mpz_class& n);
    static Ring primeField(const mpz_class& p);
    static Ring parse(const std::string& name);

    bool isField() const { return kind == RingKind::Rationals || kind == RingKind::PrimeField; }
    bool operator==(const Ring& o) const { return kind == o.kind && modulus == o.modulus; }
    bool operator!=(const Ring& o) const { return !(*this == o); }
    std::string name() const;

    Scalar canon(const Scalar& a) const;
    Scalar zero() const { return Scalar(0); }
    Scalar one() const { return Scalar(1); }
    Scalar fromInt(long v) const { return canon(Scalar(v)); }

    Scalar add(const Scalar& a, const Scalar& b) const;
    Scalar sub(const Scalar& a, const Scalar& b) const;
    Scalar mul(const Scalar& a, const Scalar& b) const;
    Scalar neg(const Scalar& a) const;
    bool isZero(const Scalar& a) const;
    bool isOne(const Scalar& a) const { return a.num == 1 && a.den == 1; }

    /// Exact division; nullopt when b does not divide a in this ring.
    std::optional<Scalar> tryDivide(const Scalar& a, const Scalar& b) const;
    /// Multiplicative inverse; nullopt for non-units.
    std::optional<Scalar> tryInverse(const Scalar& a) const;

    Scalar parseScalar(const std::string& text) const;
};

/// xgcd on integers: returns g = gcd(a,b) >= 0 and s,t with s*a + t*b = g.
void xgcd(const mpz_class& a, const mpz_class& b, mpz_class& g, mpz_class& s, mpz_class& t);

}  // namespace coarsemod
