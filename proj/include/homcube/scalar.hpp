#ifndef HOMCUBE_SCALAR_HPP
#define HOMCUBE_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

#include "homcube/errors.hpp"

namespace homcube::rings {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

enum class RingKind { Integers, IntegersMod, Rationals };

// Coefficient ring descriptor. `variables > 0` describes the Laurent
// polynomial ring over the base ring in that many indeterminates; all
// scalar operations below ignore `variables` and act on the base.
struct Ring {
    RingKind kind = RingKind::Integers;
    Int modulus = 0; // >= 2 when kind == IntegersMod
    int variables = 0;

    static Ring integers(int vars = 0) { return Ring{RingKind::Integers, 0, vars}; }
    static Ring rationals(int vars = 0) { return Ring{RingKind::Rationals, 0, vars}; }
    static Ring integers_mod(Int m, int vars = 0);

    Ring base() const { return Ring{kind, modulus, 0}; }
    Ring with_variables(int vars) const { return Ring{kind, modulus, vars}; }

    bool same_base(const Ring& other) const {
        return kind == other.kind && modulus == other.modulus;
    }
    bool operator==(const Ring& other) const {
        return same_base(other) && variables == other.variables;
    }

    bool is_field() const;
    // Fields and the integers; Z/m only for prime m.
    bool is_pid() const;
    std::string name() const;
};

// Scalars are stored as exact rationals; for Integers the denominator is 1,
// for IntegersMod the value is the canonical representative in 0..m-1.
using Scalar = Rat;

Scalar canon(const Ring& r, const Rat& raw);
Scalar add(const Ring& r, const Scalar& a, const Scalar& b);
Scalar sub(const Ring& r, const Scalar& a, const Scalar& b);
Scalar mul(const Ring& r, const Scalar& a, const Scalar& b);
Scalar neg(const Ring& r, const Scalar& a);
bool is_zero(const Scalar& a);
bool is_unit(const Ring& r, const Scalar& a);
// Throws DomainError when `a` is not a unit.
Scalar inv(const Ring& r, const Scalar& a);
// Exact division a / b; empty when b does not divide a in the ring.
std::optional<Scalar> divide(const Ring& r, const Scalar& a, const Scalar& b);

std::string scalar_to_string(const Scalar& a);
Scalar scalar_from_string(const Ring& r, const std::string& text);

} // namespace homcube::rings

#endif
