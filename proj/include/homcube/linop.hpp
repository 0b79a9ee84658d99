#ifndef HOMCUBE_LINOP_HPP
#define HOMCUBE_LINOP_HPP

#include "homcube/complex.hpp"

namespace homcube::findom {

using homalg::FreeComplex;
using rings::LaurentPoly;
using rings::Ring;
using rings::Scalar;

// R-linear operators on Laurent polynomials generated by multiplications,
// partial evaluations E_k : x_k := c_k, and divided differences
// D_k : p -> (p - p|_{x_k=c_k}) / (x_k - c_k). A term acts as
// p -> coeff * (per-variable tails applied to p), where the tail in
// variable k is E_k^{eval} D_k^{delta}. Composition pushes coefficients
// through tails with the product rule
//   D_k (q .) = (q .) D_k + (D_k q .) E_k,
// and sums are kept in a reduced form via (x_k - c_k) D_k = id - E_k.
struct LinOpTerm {
    LaurentPoly coeff;
    std::vector<std::pair<int, int>> tail; // per variable (eval, delta)
};

struct LinOp {
    Ring ring;                       // the Laurent ring carrying the variables
    std::vector<Scalar> center;      // evaluation point c (unit coordinates)
    std::vector<LinOpTerm> terms;

    LaurentPoly apply(const LaurentPoly& p) const;
    bool is_zero() const;
};

LinOp op_zero(const Ring& r, std::vector<Scalar> center);
LinOp op_identity(const Ring& r, std::vector<Scalar> center);
LinOp op_mult(const Ring& r, std::vector<Scalar> center, LaurentPoly q);
// E_k alone, D_k alone (0-based variable index)
LinOp op_eval(const Ring& r, std::vector<Scalar> center, int k);
LinOp op_delta(const Ring& r, std::vector<Scalar> center, int k);

LinOp op_add(const LinOp& a, const LinOp& b);
LinOp op_sub(const LinOp& a, const LinOp& b);
LinOp op_neg(const LinOp& a);
LinOp op_scale(const Scalar& c, const LinOp& a);
LinOp op_compose(const LinOp& second, const LinOp& first);

// Exact normalization; empty normal form means the zero operator. The
// residual window check covers reduced nonzero forms (piecewise-polynomial
// coefficients in the exponent, so a grid of sufficient size decides).
void op_normalize(LinOp& a);
bool op_is_zero(const LinOp& a);

// Partial evaluation and divided difference on polynomials.
LaurentPoly partial_eval(const Ring& r, const LaurentPoly& p, int k, const Scalar& c);
LaurentPoly divided_difference(const Ring& r, const LaurentPoly& p, int k, const Scalar& c);

// Graded matrix of operators between complexes viewed over the base ring.
// Block at source degree l maps into target degree l + degree; entries act
// on Laurent-polynomial coordinate vectors.
struct OpMap {
    int degree = 0;
    Ring ring;                      // variable-carrying ring of the entries
    std::vector<Scalar> center;
    std::map<int, std::vector<std::vector<LinOp>>> blocks;

    const std::vector<std::vector<LinOp>>* block(int l) const {
        auto it = blocks.find(l);
        return it == blocks.end() ? nullptr : &it->second;
    }
};

OpMap opmap_zero(const Ring& r, std::vector<Scalar> center, int degree);
OpMap opmap_identity(const FreeComplex& c, std::vector<Scalar> center);
// Lift an ordinary matrix-valued graded map to operator form.
OpMap opmap_from_graded(const Ring& r, std::vector<Scalar> center, const homalg::GradedMap& g,
                        const FreeComplex& source, const FreeComplex& target);
OpMap opmap_compose(const OpMap& second, const OpMap& first, const FreeComplex& source,
                    const FreeComplex& middle, const FreeComplex& target);
OpMap opmap_add(const OpMap& a, const OpMap& b);
OpMap opmap_sub(const OpMap& a, const OpMap& b);
bool opmap_is_zero(const OpMap& a);

} // namespace homcube::findom

#endif
