#ifndef HOMCUBE_SNF_HPP
#define HOMCUBE_SNF_HPP

#include <optional>
#include <vector>

#include "homcube/matrix.hpp"

namespace homcube::homalg {

using rings::Matrix;
using rings::Ring;
using rings::Scalar;

// U * A * V = S with U, V unimodular and S diagonal with the divisibility
// chain s1 | s2 | ... Over a field the nonzero diagonal entries are 1.
struct SnfResult {
    Matrix s, u, v;
    int rank = 0;
    std::vector<Scalar> divisors; // nonzero diagonal entries, in chain order
};

// Requires a PID among Z, Q, Z/p (p prime); entries must be constants.
SnfResult smith_normal_form(const Ring& r, const Matrix& a);

int mat_rank(const Ring& r, const Matrix& a);

// One solution x of A x = b, or empty when none exists over the ring.
std::optional<std::vector<Scalar>> solve_linear(const Ring& r, const Matrix& a,
                                                const std::vector<Scalar>& b);

// Basis of the kernel lattice of A (columns are basis vectors).
std::vector<std::vector<Scalar>> kernel_basis(const Ring& r, const Matrix& a);

// Determinant of a square constant matrix (exact, fraction-free for Z).
Scalar mat_det(const Ring& r, const Matrix& a);

} // namespace homcube::homalg

#endif
