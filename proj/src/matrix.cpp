#include "homcube/matrix.hpp"

namespace homcube::rings {

namespace {

void check_dims(const Matrix& a, const Matrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw StructuralError("matrix dimension mismatch");
}

void check_index(const Matrix& a, int i, int j) {
    if (i < 0 || i >= a.rows || j < 0 || j >= a.cols)
        throw StructuralError("matrix index out of range");
}

} // namespace

Matrix Matrix::identity(const Ring& r, int n) { return scalar_diag(r, n, Scalar(1)); }

Matrix Matrix::scalar_diag(const Ring& r, int n, const Scalar& c) {
    Matrix m = zero(n, n);
    if (!homcube::rings::is_zero(canon(r, c)))
        for (int i = 0; i < n; ++i) m.entries[{i, i}] = lp_constant(r, c);
    return m;
}

void Matrix::set(const Ring& r, int i, int j, LaurentPoly value) {
    check_index(*this, i, j);
    if (value.vars != r.variables) throw StructuralError("entry variable count mismatch");
    if (value.is_zero()) entries.erase({i, j});
    else entries[{i, j}] = std::move(value);
}

Matrix mat_add(const Ring& r, const Matrix& a, const Matrix& b) {
    check_dims(a, b);
    Matrix out = a;
    for (const auto& [ij, p] : b.entries) {
        auto it = out.entries.find(ij);
        if (it == out.entries.end()) {
            out.entries.emplace(ij, p);
        } else {
            it->second = lp_add(r, it->second, p);
            if (it->second.is_zero()) out.entries.erase(it);
        }
    }
    return out;
}

Matrix mat_sub(const Ring& r, const Matrix& a, const Matrix& b) {
    return mat_add(r, a, mat_neg(r, b));
}

Matrix mat_neg(const Ring& r, const Matrix& a) {
    Matrix out{a.rows, a.cols, {}};
    for (const auto& [ij, p] : a.entries) out.entries.emplace(ij, lp_neg(r, p));
    return out;
}

Matrix mat_mul(const Ring& r, const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw StructuralError("matrix product dimension mismatch");
    Matrix out = Matrix::zero(a.rows, b.cols);
    // group b's entries by row for sparse traversal
    for (const auto& [ij_a, pa] : a.entries) {
        auto it = b.entries.lower_bound({ij_a.second, 0});
        for (; it != b.entries.end() && it->first.first == ij_a.second; ++it) {
            std::pair<int, int> key{ij_a.first, it->first.second};
            LaurentPoly prod = lp_mul(r, pa, it->second);
            if (prod.is_zero()) continue;
            auto out_it = out.entries.find(key);
            if (out_it == out.entries.end()) {
                out.entries.emplace(key, std::move(prod));
            } else {
                out_it->second = lp_add(r, out_it->second, prod);
                if (out_it->second.is_zero()) out.entries.erase(out_it);
            }
        }
    }
    return out;
}

Matrix mat_scale(const Ring& r, const Scalar& c, const Matrix& a) {
    Matrix out{a.rows, a.cols, {}};
    for (const auto& [ij, p] : a.entries) {
        LaurentPoly q = lp_scale(r, c, p);
        if (!q.is_zero()) out.entries.emplace(ij, std::move(q));
    }
    return out;
}

Matrix mat_scale_poly(const Ring& r, const LaurentPoly& p, const Matrix& a) {
    Matrix out{a.rows, a.cols, {}};
    for (const auto& [ij, q] : a.entries) {
        LaurentPoly v = lp_mul(r, p, q);
        if (!v.is_zero()) out.entries.emplace(ij, std::move(v));
    }
    return out;
}

Matrix mat_specialize(const Ring& r, const Matrix& a, const std::vector<Scalar>& point) {
    Ring base = r.base();
    Matrix out{a.rows, a.cols, {}};
    for (const auto& [ij, p] : a.entries) {
        Scalar v = lp_specialize(r, p, point);
        if (!is_zero(v)) out.entries.emplace(ij, lp_constant(base, v));
    }
    return out;
}

Matrix mat_substitute(const Ring& r_out, const Matrix& a, const std::vector<LaurentPoly>& images) {
    Matrix out{a.rows, a.cols, {}};
    for (const auto& [ij, p] : a.entries) {
        LaurentPoly q = lp_substitute(r_out, p, images);
        if (!q.is_zero()) out.entries.emplace(ij, std::move(q));
    }
    return out;
}

Matrix mat_extend(const Ring& r_to, const Matrix& a) {
    Matrix out{a.rows, a.cols, {}};
    for (const auto& [ij, p] : a.entries) {
        LaurentPoly q = lp_zero(r_to.variables);
        for (const auto& [e, c] : p.terms) {
            Exponent e2(static_cast<size_t>(r_to.variables), 0);
            for (size_t i = 0; i < e.size(); ++i) e2[i] = e[i];
            q.terms.emplace(std::move(e2), c);
        }
        out.entries.emplace(ij, std::move(q));
    }
    return out;
}

void mat_paste(const Ring& r, Matrix& dest, const Matrix& block, int i0, int j0) {
    if (i0 < 0 || j0 < 0 || i0 + block.rows > dest.rows || j0 + block.cols > dest.cols)
        throw StructuralError("block paste out of range");
    (void)r;
    for (const auto& [ij, p] : block.entries)
        dest.entries[{ij.first + i0, ij.second + j0}] = p;
}

Matrix mat_extract(const Matrix& a, int i0, int j0, int rows, int cols) {
    Matrix out = Matrix::zero(rows, cols);
    for (const auto& [ij, p] : a.entries) {
        int i = ij.first - i0, j = ij.second - j0;
        if (i >= 0 && i < rows && j >= 0 && j < cols) out.entries[{i, j}] = p;
    }
    return out;
}

} // namespace homcube::rings
