#ifndef HOMCUBE_MATRIX_HPP
#define HOMCUBE_MATRIX_HPP

#include <map>
#include <utility>

#include "homcube/laurent.hpp"

namespace homcube::rings {

// Sparse matrix over a (Laurent polynomial) ring: absent entries are zero.
struct Matrix {
    int rows = 0, cols = 0;
    std::map<std::pair<int, int>, LaurentPoly> entries;

    static Matrix zero(int rows, int cols) { return Matrix{rows, cols, {}}; }
    static Matrix identity(const Ring& r, int n);
    static Matrix scalar_diag(const Ring& r, int n, const Scalar& c);

    const LaurentPoly* at(int i, int j) const {
        auto it = entries.find({i, j});
        return it == entries.end() ? nullptr : &it->second;
    }
    void set(const Ring& r, int i, int j, LaurentPoly value);
    bool is_zero() const { return entries.empty(); }
    bool operator==(const Matrix& other) const {
        return rows == other.rows && cols == other.cols && entries == other.entries;
    }
};

Matrix mat_add(const Ring& r, const Matrix& a, const Matrix& b);
Matrix mat_sub(const Ring& r, const Matrix& a, const Matrix& b);
Matrix mat_neg(const Ring& r, const Matrix& a);
Matrix mat_mul(const Ring& r, const Matrix& a, const Matrix& b);
Matrix mat_scale(const Ring& r, const Scalar& c, const Matrix& a);
Matrix mat_scale_poly(const Ring& r, const LaurentPoly& p, const Matrix& a);
// Entry-wise specialization into the base ring (variables become the point).
Matrix mat_specialize(const Ring& r, const Matrix& a, const std::vector<Scalar>& point);
// Entry-wise variable substitution.
Matrix mat_substitute(const Ring& r_out, const Matrix& a, const std::vector<LaurentPoly>& images);
// Reinterpret a matrix over the base ring as a matrix over a larger ring
// (scalar extension along R -> R[x1^/-1, ...]).
Matrix mat_extend(const Ring& r_to, const Matrix& a);

// Paste `block` into `dest` with its upper-left corner at (i0, j0).
void mat_paste(const Ring& r, Matrix& dest, const Matrix& block, int i0, int j0);
// Extract the sub-matrix of size (rows, cols) at (i0, j0).
Matrix mat_extract(const Matrix& a, int i0, int j0, int rows, int cols);

} // namespace homcube::rings

#endif
