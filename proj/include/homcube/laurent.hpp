#ifndef HOMCUBE_LAURENT_HPP
#define HOMCUBE_LAURENT_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homcube/scalar.hpp"

namespace homcube::rings {

using Exponent = std::vector<std::int64_t>;

// Multivariate Laurent polynomial in canonical form: the term map holds no
// zero coefficients, and the std::map key order is the lexicographic order
// on exponent vectors used everywhere for serialization.
struct LaurentPoly {
    int vars = 0;
    std::map<Exponent, Scalar> terms;

    bool is_zero() const { return terms.empty(); }
    bool operator==(const LaurentPoly& other) const {
        return vars == other.vars && terms == other.terms;
    }
};

LaurentPoly lp_zero(int vars);
LaurentPoly lp_constant(const Ring& r, const Scalar& c);
LaurentPoly lp_monomial(const Ring& r, Exponent e, const Scalar& c);
LaurentPoly lp_one(const Ring& r);
// x_k as a polynomial (k is 0-based).
LaurentPoly lp_variable(const Ring& r, int k);

LaurentPoly lp_add(const Ring& r, const LaurentPoly& f, const LaurentPoly& g);
LaurentPoly lp_sub(const Ring& r, const LaurentPoly& f, const LaurentPoly& g);
LaurentPoly lp_neg(const Ring& r, const LaurentPoly& f);
LaurentPoly lp_mul(const Ring& r, const LaurentPoly& f, const LaurentPoly& g);
LaurentPoly lp_scale(const Ring& r, const Scalar& c, const LaurentPoly& f);

// Evaluation at a point whose coordinates must all be units.
Scalar lp_specialize(const Ring& r, const LaurentPoly& f, const std::vector<Scalar>& point);

// The unique term (e, c) if f is a single term with unit coefficient.
std::optional<std::pair<Exponent, Scalar>> lp_is_monomial_unit(const Ring& r, const LaurentPoly& f);

// Substitute variables: x_k := image of k (a polynomial in possibly fewer
// variables). Used for collapsing torus variables onto base variables.
LaurentPoly lp_substitute(const Ring& r_out, const LaurentPoly& f,
                          const std::vector<LaurentPoly>& images);

// Textual grammar: terms joined by +/-, each `coeff*x1^a1*...*xn^an` with
// zero exponents omitted; printed in lexicographic term order.
std::string lp_to_string(const LaurentPoly& f);
LaurentPoly lp_parse(const Ring& r, const std::string& text);

} // namespace homcube::rings

#endif
