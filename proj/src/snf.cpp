#include "homcube/snf.hpp"

namespace homcube::homalg {

using rings::Int;
using rings::LaurentPoly;
using rings::Rat;
using rings::RingKind;

using rings::add;
using rings::canon;
using rings::divide;
using rings::inv;
using rings::is_unit;
using rings::is_zero;
using rings::lp_constant;
using rings::mul;
using rings::neg;
using rings::sub;


namespace {

void require_pid(const Ring& r) {
    if (r.variables != 0)
        throw UnsupportedError("SNF requires constant entries (Laurent ring given)");
    if (!r.is_pid())
        throw UnsupportedError("SNF over Z/m needs prime m; got m = " + r.modulus.str());
}

struct Dense {
    int rows, cols;
    std::vector<Scalar> a; // row-major
    Scalar& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Scalar& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

Dense to_dense(const Ring& r, const Matrix& m) {
    Dense d{m.rows, m.cols, std::vector<Scalar>(static_cast<size_t>(m.rows) * m.cols, Scalar(0))};
    for (const auto& [ij, p] : m.entries) {
        if (p.terms.size() > 1 || (p.terms.size() == 1 && !p.terms.begin()->first.empty() &&
                                   p.terms.begin()->first != rings::Exponent(p.terms.begin()->first.size(), 0)))
            throw UnsupportedError("matrix entry is not constant");
        if (!p.terms.empty()) d(ij.first, ij.second) = canon(r, p.terms.begin()->second);
    }
    return d;
}

Matrix from_dense(const Ring& r, const Dense& d) {
    Matrix m = Matrix::zero(d.rows, d.cols);
    Ring base = r.base();
    for (int i = 0; i < d.rows; ++i)
        for (int j = 0; j < d.cols; ++j)
            if (!is_zero(d(i, j))) m.entries[{i, j}] = lp_constant(base, d(i, j));
    return m;
}

// Row/column operations mirrored on the transform matrices.
struct Worker {
    const Ring& ring;
    Dense a, u, v; // invariants: u * a0 * v = a

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < a.cols; ++k) std::swap(a(i, k), a(j, k));
        for (int k = 0; k < u.cols; ++k) std::swap(u(i, k), u(j, k));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int k = 0; k < a.rows; ++k) std::swap(a(k, i), a(k, j));
        for (int k = 0; k < v.rows; ++k) std::swap(v(k, i), v(k, j));
    }
    // row i -= q * row j
    void row_sub(int i, int j, const Scalar& q) {
        if (is_zero(q)) return;
        for (int k = 0; k < a.cols; ++k) a(i, k) = sub(ring, a(i, k), mul(ring, q, a(j, k)));
        for (int k = 0; k < u.cols; ++k) u(i, k) = sub(ring, u(i, k), mul(ring, q, u(j, k)));
    }
    // col i -= q * col j
    void col_sub(int i, int j, const Scalar& q) {
        if (is_zero(q)) return;
        for (int k = 0; k < a.rows; ++k) a(k, i) = sub(ring, a(k, i), mul(ring, q, a(k, j)));
        for (int k = 0; k < v.rows; ++k) v(k, i) = sub(ring, v(k, i), mul(ring, q, v(k, j)));
    }
    void scale_row(int i, const Scalar& unit) {
        for (int k = 0; k < a.cols; ++k) a(i, k) = mul(ring, unit, a(i, k));
        for (int k = 0; k < u.cols; ++k) u(i, k) = mul(ring, unit, u(i, k));
    }
};

Int int_of(const Scalar& s) { return numerator(s); }

// Quotient used for Euclidean reduction over Z: round to nearest so the
// remainder magnitude shrinks.
Scalar z_quot(const Scalar& a, const Scalar& b) {
    Int an = int_of(a), bn = int_of(b);
    Int q = an / bn, rem = an % bn;
    if (rem != 0 && 2 * abs(rem) > abs(bn)) q += (an < 0) == (bn < 0) ? 1 : -1;
    return Rat(q);
}

} // namespace

SnfResult smith_normal_form(const Ring& ring_in, const Matrix& input) {
    require_pid(ring_in);
    Ring ring = ring_in.base();
    Dense a = to_dense(ring, input);
    Dense u{a.rows, a.rows, {}}, v{a.cols, a.cols, {}};
    u.a.assign(static_cast<size_t>(a.rows) * a.rows, Scalar(0));
    v.a.assign(static_cast<size_t>(a.cols) * a.cols, Scalar(0));
    for (int i = 0; i < a.rows; ++i) u(i, i) = Scalar(1);
    for (int j = 0; j < a.cols; ++j) v(j, j) = Scalar(1);
    Worker w{ring, std::move(a), std::move(u), std::move(v)};

    const bool field = ring.is_field();
    int n = std::min(w.a.rows, w.a.cols);
    int t = 0;
    for (; t < n; ++t) {
        // find a pivot: over Z pick the entry of least absolute value
        int pi = -1, pj = -1;
        if (field) {
            for (int i = t; i < w.a.rows && pi < 0; ++i)
                for (int j = t; j < w.a.cols; ++j)
                    if (!is_zero(w.a(i, j))) { pi = i; pj = j; break; }
        } else {
            Int best = 0;
            for (int i = t; i < w.a.rows; ++i)
                for (int j = t; j < w.a.cols; ++j) {
                    if (is_zero(w.a(i, j))) continue;
                    Int m = abs(int_of(w.a(i, j)));
                    if (pi < 0 || m < best) { best = m; pi = i; pj = j; }
                }
        }
        if (pi < 0) break;
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);

        if (field) {
            for (int i = t + 1; i < w.a.rows; ++i)
                w.row_sub(i, t, mul(ring, w.a(i, t), inv(ring, w.a(t, t))));
            for (int j = t + 1; j < w.a.cols; ++j)
                w.col_sub(j, t, mul(ring, w.a(t, j), inv(ring, w.a(t, t))));
            w.scale_row(t, inv(ring, w.a(t, t)));
            continue;
        }

        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < w.a.rows; ++i) {
                if (is_zero(w.a(i, t))) continue;
                w.row_sub(i, t, z_quot(w.a(i, t), w.a(t, t)));
                if (!is_zero(w.a(i, t))) { w.swap_rows(t, i); clean = false; }
            }
            for (int j = t + 1; j < w.a.cols; ++j) {
                if (is_zero(w.a(t, j))) continue;
                w.col_sub(j, t, z_quot(w.a(t, j), w.a(t, t)));
                if (!is_zero(w.a(t, j))) { w.swap_cols(t, j); clean = false; }
            }
            if (!clean) continue;
            // pivot must divide the remaining block for the divisor chain
            bool divides = true;
            for (int i = t + 1; i < w.a.rows && divides; ++i)
                for (int j = t + 1; j < w.a.cols; ++j) {
                    if (is_zero(w.a(i, j))) continue;
                    if (int_of(w.a(i, j)) % int_of(w.a(t, t)) != 0) {
                        // fold the offending row into row t and restart
                        w.row_sub(t, i, Scalar(-1));
                        divides = false;
                        break;
                    }
                }
            if (divides) break;
        }
        if (w.a(t, t) < 0) w.scale_row(t, Scalar(-1));
    }

    SnfResult out;
    out.rank = t;
    for (int i = 0; i < t; ++i) out.divisors.push_back(w.a(i, i));
    out.s = from_dense(ring, w.a);
    out.u = from_dense(ring, w.u);
    out.v = from_dense(ring, w.v);
    return out;
}

int mat_rank(const Ring& r, const Matrix& a) { return smith_normal_form(r, a).rank; }

std::optional<std::vector<Scalar>> solve_linear(const Ring& r, const Matrix& a,
                                                const std::vector<Scalar>& b) {
    if (static_cast<int>(b.size()) != a.rows) throw StructuralError("rhs length mismatch");
    SnfResult snf = smith_normal_form(r, a);
    Ring base = r.base();
    // y solves S y = U b, then x = V y
    std::vector<Scalar> ub(static_cast<size_t>(a.rows), Scalar(0));
    for (const auto& [ij, p] : snf.u.entries)
        ub[static_cast<size_t>(ij.first)] =
            add(base, ub[static_cast<size_t>(ij.first)],
                mul(base, p.terms.begin()->second, b[static_cast<size_t>(ij.second)]));
    std::vector<Scalar> y(static_cast<size_t>(a.cols), Scalar(0));
    for (int i = 0; i < a.rows; ++i) {
        const LaurentPoly* s = i < std::min(a.rows, a.cols) ? snf.s.at(i, i) : nullptr;
        Scalar sv = s ? s->terms.begin()->second : Scalar(0);
        if (is_zero(sv)) {
            if (!is_zero(ub[static_cast<size_t>(i)])) return std::nullopt;
        } else {
            auto q = divide(base, ub[static_cast<size_t>(i)], sv);
            if (!q) return std::nullopt;
            y[static_cast<size_t>(i)] = *q;
        }
    }
    std::vector<Scalar> x(static_cast<size_t>(a.cols), Scalar(0));
    for (const auto& [ij, p] : snf.v.entries)
        x[static_cast<size_t>(ij.first)] =
            add(base, x[static_cast<size_t>(ij.first)],
                mul(base, p.terms.begin()->second, y[static_cast<size_t>(ij.second)]));
    return x;
}

std::vector<std::vector<Scalar>> kernel_basis(const Ring& r, const Matrix& a) {
    SnfResult snf = smith_normal_form(r, a);
    std::vector<std::vector<Scalar>> out;
    for (int j = snf.rank; j < a.cols; ++j) {
        std::vector<Scalar> col(static_cast<size_t>(a.cols), Scalar(0));
        for (int i = 0; i < a.cols; ++i)
            if (const LaurentPoly* p = snf.v.at(i, j)) col[static_cast<size_t>(i)] = p->terms.begin()->second;
        out.push_back(std::move(col));
    }
    return out;
}

Scalar mat_det(const Ring& r, const Matrix& a) {
    if (a.rows != a.cols) throw StructuralError("determinant of non-square matrix");
    Ring base = r.base();
    // fraction-free over Q; for Z/Z-mod go through rationals then canonize
    Dense d = to_dense(base, a);
    Rat det(1);
    int n = a.rows;
    int sign = 1;
    for (int t = 0; t < n; ++t) {
        int p = -1;
        for (int i = t; i < n; ++i)
            if (!d(i, t).is_zero()) { p = i; break; }
        if (p < 0) return Scalar(0);
        if (p != t) {
            for (int k = 0; k < n; ++k) std::swap(d(p, k), d(t, k));
            sign = -sign;
        }
        for (int i = t + 1; i < n; ++i) {
            Rat f = d(i, t) / d(t, t);
            for (int k = t; k < n; ++k) d(i, k) -= f * d(t, k);
        }
        det *= d(t, t);
    }
    if (sign < 0) det = -det;
    return canon(base, det);
}

} // namespace homcube::homalg
