#include "coarsemod/scalar.hpp"

namespace coarsemod {

Scalar::Scalar(mpz_class n, mpz_class d) : num(std::move(n)), den(std::move(d)) {
    if (den == 0) throw std::invalid_argument("scalar: zero denominator");
    if (den < 0) { num = -num; den = -den; }
    mpz_class g = gcd(num, den);
    if (g > 1) { num /= g; den /= g; }
}

bool Scalar::operator<(const Scalar& o) const {
    return num * o.den < o.num * den;
}

std::string Scalar::str() const {
    if (den == 1) return num.get_str();
    return num.get_str() + "/" + den.get_str();
}

Ring Ring::integersMod(const mpz_class& n) {
    if (n < 2) throw std::invalid_argument("IntegersMod: modulus must be >= 2");
    return {RingKind::IntegersMod, n};
}

Ring Ring::primeField(const mpz_class& p) {
    if (p < 2) throw std::invalid_argument("PrimeField: p must be >= 2");
    if (mpz_probab_prime_p(p.get_mpz_t(), 32) == 0)
        throw std::invalid_argument("PrimeField: " + p.get_str() + " is not prime");
    return {RingKind::PrimeField, p};
}

Ring Ring::parse(const std::string& name) {
    if (name == "Z" || name == "Integers") return integers();
    if (name == "Q" || name == "Rationals") return rationals();
    auto inner = [&](size_t open) {
        size_t close = name.rfind(')');
        if (close == std::string::npos || close <= open) throw std::invalid_argument("bad ring: " + name);
        return mpz_class(name.substr(open + 1, close - open - 1));
    };
    if (name.rfind("Z/", 0) == 0) return integersMod(mpz_class(name.substr(2)));
    if (name.rfind("IntegersMod(", 0) == 0) return integersMod(inner(name.find('(')));
    if (name.rfind("PrimeField(", 0) == 0) return primeField(inner(name.find('(')));
    if (name.size() > 1 && name[0] == 'F') return primeField(mpz_class(name.substr(1)));
    throw std::invalid_argument("unknown ring: " + name);
}

std::string Ring::name() const {
    switch (kind) {
        case RingKind::Integers: return "Z";
        case RingKind::Rationals: return "Q";
        case RingKind::IntegersMod: return "Z/" + modulus.get_str();
        case RingKind::PrimeField: return "F" + modulus.get_str();
    }
    return "?";
}

Scalar Ring::canon(const Scalar& a) const {
    switch (kind) {
        case RingKind::Integers:
            if (a.den != 1) throw std::domain_error("non-integer scalar over Z: " + a.str());
            return a;
        case RingKind::Rationals:
            return a;
        case RingKind::IntegersMod:
        case RingKind::PrimeField: {
            mpz_class v = a.num;
            if (a.den != 1) {
                // accept p/q when q is a unit
                auto di = tryInverse(Scalar(a.den));
                if (!di) throw std::domain_error("non-unit denominator over " + name());
                v = a.num * di->num;
            }
            mpz_class r = v % modulus;
            if (r < 0) r += modulus;
            return Scalar(r);
        }
    }
    return a;
}

Scalar Ring::add(const Scalar& a, const Scalar& b) const {
    if (kind == RingKind::Rationals) return Scalar(a.num * b.den + b.num * a.den, a.den * b.den);
    return canon(Scalar(a.num + b.num));
}

Scalar Ring::sub(const Scalar& a, const Scalar& b) const {
    if (kind == RingKind::Rationals) return Scalar(a.num * b.den - b.num * a.den, a.den * b.den);
    return canon(Scalar(a.num - b.num));
}

Scalar Ring::mul(const Scalar& a, const Scalar& b) const {
    if (kind == RingKind::Rationals) return Scalar(a.num * b.num, a.den * b.den);
    return canon(Scalar(a.num * b.num));
}

Scalar Ring::neg(const Scalar& a) const {
    if (kind == RingKind::Rationals) return Scalar(-a.num, a.den);
    return canon(Scalar(-a.num));
}

bool Ring::isZero(const Scalar& a) const { return a.num == 0; }

std::optional<Scalar> Ring::tryDivide(const Scalar& a, const Scalar& b) const {
    if (isZero(b)) return std::nullopt;
    switch (kind) {
        case RingKind::Rationals:
            return Scalar(a.num * b.den, a.den * b.num);
        case RingKind::Integers: {
            if (a.num % b.num == 0) return Scalar(a.num / b.num);
            return std::nullopt;
        }
        case RingKind::IntegersMod:
        case RingKind::PrimeField: {
            // solve x*b = a mod n: solvable iff gcd(b,n) | a
            mpz_class g, s, t;
            xgcd(b.num, modulus, g, s, t);
            if (a.num % g != 0) return std::nullopt;
            mpz_class x = (a.num / g) * s;
            return canon(Scalar(x));
        }
    }
    return std::nullopt;
}

std::optional<Scalar> Ring::tryInverse(const Scalar& a) const {
    return tryDivide(one(), canon(a));
}

Scalar Ring::parseScalar(const std::string& text) const {
    auto slash = text.find('/');
    if (slash == std::string::npos) return canon(Scalar(mpz_class(text)));
    mpz_class n(text.substr(0, slash)), d(text.substr(slash + 1));
    return canon(Scalar(n, d));
}

void xgcd(const mpz_class& a, const mpz_class& b, mpz_class& g, mpz_class& s, mpz_class& t) {
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

}  // namespace coarsemod
