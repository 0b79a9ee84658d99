#include "homcube/scalar.hpp"

namespace homcube::rings {

namespace {

Int mod_floor(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

bool is_prime(const Int& m) {
    if (m < 2) return false;
    for (Int d = 2; d * d <= m; ++d)
        if (m % d == 0) return false;
    return true;
}

} // namespace

Ring Ring::integers_mod(Int m, int vars) {
    if (m < 2) throw StructuralError("IntegersMod modulus must be >= 2");
    return Ring{RingKind::IntegersMod, std::move(m), vars};
}

bool Ring::is_field() const {
    switch (kind) {
    case RingKind::Rationals: return true;
    case RingKind::IntegersMod: return is_prime(modulus);
    case RingKind::Integers: return false;
    }
    return false;
}

bool Ring::is_pid() const {
    return kind == RingKind::Integers || is_field();
}

std::string Ring::name() const {
    std::string base;
    switch (kind) {
    case RingKind::Integers: base = "Z"; break;
    case RingKind::Rationals: base = "Q"; break;
    case RingKind::IntegersMod: base = "Z/" + modulus.str(); break;
    }
    return base;
}

Scalar canon(const Ring& r, const Rat& raw) {
    switch (r.kind) {
    case RingKind::Rationals:
        return raw;
    case RingKind::Integers:
        if (denominator(raw) != 1)
            throw StructuralError("non-integral scalar over Z: " + scalar_to_string(raw));
        return raw;
    case RingKind::IntegersMod: {
        if (denominator(raw) != 1)
            throw StructuralError("non-integral scalar over Z/m: " + scalar_to_string(raw));
        return Rat(mod_floor(numerator(raw), r.modulus));
    }
    }
    return raw;
}

Scalar add(const Ring& r, const Scalar& a, const Scalar& b) { return canon(r, a + b); }
Scalar sub(const Ring& r, const Scalar& a, const Scalar& b) { return canon(r, a - b); }
Scalar mul(const Ring& r, const Scalar& a, const Scalar& b) { return canon(r, a * b); }
Scalar neg(const Ring& r, const Scalar& a) { return canon(r, -a); }

bool is_zero(const Scalar& a) { return a.is_zero(); }

bool is_unit(const Ring& r, const Scalar& a) {
    switch (r.kind) {
    case RingKind::Rationals: return !a.is_zero();
    case RingKind::Integers: return a == 1 || a == -1;
    case RingKind::IntegersMod: {
        Int g = gcd(mod_floor(numerator(a), r.modulus), r.modulus);
        return g == 1;
    }
    }
    return false;
}

Scalar inv(const Ring& r, const Scalar& a) {
    if (!is_unit(r, a)) throw DomainError("not a unit: " + scalar_to_string(a));
    switch (r.kind) {
    case RingKind::Rationals:
        return Rat(1) / a;
    case RingKind::Integers:
        return a; // only +-1
    case RingKind::IntegersMod: {
        // extended euclid modulo m
        Int v = mod_floor(numerator(a), r.modulus);
        Int old_r = v, cur_r = r.modulus;
        Int old_s = 1, cur_s = 0;
        while (cur_r != 0) {
            Int q = old_r / cur_r;
            Int t = old_r - q * cur_r; old_r = cur_r; cur_r = t;
            t = old_s - q * cur_s; old_s = cur_s; cur_s = t;
        }
        return Rat(mod_floor(old_s, r.modulus));
    }
    }
    throw DomainError("unreachable");
}

std::optional<Scalar> divide(const Ring& r, const Scalar& a, const Scalar& b) {
    if (b.is_zero()) return std::nullopt;
    switch (r.kind) {
    case RingKind::Rationals:
        return canon(r, a / b);
    case RingKind::Integers: {
        Int an = numerator(a), bn = numerator(b);
        if (an % bn != 0) return std::nullopt;
        return Rat(an / bn);
    }
    case RingKind::IntegersMod: {
        // solve b*x = a mod m; solvable iff gcd(b, m) | a
        Int bv = mod_floor(numerator(b), r.modulus);
        Int av = mod_floor(numerator(a), r.modulus);
        Int g = gcd(bv, r.modulus);
        if (av % g != 0) return std::nullopt;
        Int m2 = r.modulus / g;
        Ring rm2 = m2 == 1 ? r : Ring::integers_mod(m2);
        if (m2 == 1) return Rat(mod_floor(av / g, r.modulus));
        Scalar binv = inv(rm2, Rat(bv / g));
        Int x = mod_floor((av / g) * numerator(binv), m2);
        return Rat(x);
    }
    }
    return std::nullopt;
}

std::string scalar_to_string(const Scalar& a) {
    if (denominator(a) == 1) return numerator(a).str();
    return numerator(a).str() + "/" + denominator(a).str();
}

Scalar scalar_from_string(const Ring& r, const std::string& text) {
    try {
        return canon(r, Rat(text));
    } catch (const std::exception&) {
        throw StructuralError("cannot parse scalar: " + text);
    }
}

} // namespace homcube::rings
