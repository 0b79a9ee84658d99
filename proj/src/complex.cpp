#include "homcube/complex.hpp"

namespace homcube::homalg {

using rings::mat_add;
using rings::mat_extend;
using rings::mat_mul;
using rings::mat_neg;
using rings::mat_scale;
using rings::mat_specialize;
using rings::mat_sub;

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


GradedMap gm_compose(const Ring& r, const GradedMap& second, const GradedMap& first) {
    GradedMap out;
    out.degree = first.degree + second.degree;
    for (const auto& [l, m1] : first.blocks) {
        const Matrix* m2 = second.block(l + first.degree);
        if (!m2) continue;
        Matrix prod = mat_mul(r, *m2, m1);
        if (!prod.is_zero()) out.blocks[l] = std::move(prod);
    }
    return out;
}

GradedMap gm_add(const Ring& r, const GradedMap& a, const GradedMap& b) {
    if (a.degree != b.degree) throw StructuralError("graded map degree mismatch in sum");
    GradedMap out = a;
    for (const auto& [l, m] : b.blocks) {
        auto it = out.blocks.find(l);
        if (it == out.blocks.end()) out.blocks[l] = m;
        else {
            it->second = mat_add(r, it->second, m);
            if (it->second.is_zero()) out.blocks.erase(it);
        }
    }
    return out;
}

GradedMap gm_sub(const Ring& r, const GradedMap& a, const GradedMap& b) {
    return gm_add(r, a, gm_neg(r, b));
}

GradedMap gm_neg(const Ring& r, const GradedMap& a) {
    GradedMap out;
    out.degree = a.degree;
    for (const auto& [l, m] : a.blocks) out.blocks[l] = mat_neg(r, m);
    return out;
}

GradedMap gm_scale(const Ring& r, const Scalar& c, const GradedMap& a) {
    GradedMap out;
    out.degree = a.degree;
    if (is_zero(canon(r, c))) return out;
    for (const auto& [l, m] : a.blocks) {
        Matrix s = mat_scale(r, c, m);
        if (!s.is_zero()) out.blocks[l] = std::move(s);
    }
    return out;
}

GradedMap gm_extend(const Ring& r_to, const GradedMap& a) {
    GradedMap out;
    out.degree = a.degree;
    for (const auto& [l, m] : a.blocks) out.blocks[l] = mat_extend(r_to, m);
    return out;
}

Matrix FreeComplex::d(int l) const {
    if (const Matrix* m = diff.block(l)) return *m;
    return Matrix::zero(rank(l + 1), rank(l));
}

namespace {

void validate_ranks(const std::map<int, int>& ranks) {
    for (const auto& [deg, rk] : ranks)
        if (rk < 0) throw StructuralError("negative rank in degree " + std::to_string(deg));
}

std::map<int, int> prune(std::map<int, int> ranks) {
    for (auto it = ranks.begin(); it != ranks.end();)
        it = it->second == 0 ? ranks.erase(it) : std::next(it);
    return ranks;
}

} // namespace

void gm_validate(const GradedMap& f, const FreeComplex& source, const FreeComplex& target) {
    for (const auto& [l, m] : f.blocks) {
        if (m.cols != source.rank(l) || m.rows != target.rank(l + f.degree))
            throw StructuralError("graded map block at degree " + std::to_string(l) +
                                  " has wrong dimensions");
        for (const auto& [ij, p] : m.entries)
            if (p.vars != source.ring.variables)
                throw StructuralError("graded map entry variable count mismatch");
    }
}

FreeComplex FreeComplex::make_unchecked(Ring ring, std::map<int, int> ranks, GradedMap diff) {
    validate_ranks(ranks);
    if (diff.degree != 1) throw StructuralError("differential must have degree +1");
    FreeComplex c{std::move(ring), prune(std::move(ranks)), std::move(diff)};
    gm_validate(c.diff, c, c);
    return c;
}

FreeComplex FreeComplex::make(Ring ring, std::map<int, int> ranks, GradedMap diff) {
    FreeComplex c = make_unchecked(std::move(ring), std::move(ranks), std::move(diff));
    if (!check_complex(c)) throw ContractViolation("d o d != 0");
    return c;
}

GradedMap gm_identity(const FreeComplex& c) {
    GradedMap id;
    id.degree = 0;
    for (const auto& [deg, rk] : c.ranks) id.blocks[deg] = Matrix::identity(c.ring, rk);
    return id;
}

GradedMap gm_zero(int degree) {
    GradedMap z;
    z.degree = degree;
    return z;
}

bool check_complex(const FreeComplex& c) {
    GradedMap dd = gm_compose(c.ring, c.diff, c.diff);
    return dd.is_zero();
}

bool is_cochain_map(const GradedMap& phi, const FreeComplex& source, const FreeComplex& target) {
    if (phi.degree != 0) return false;
    gm_validate(phi, source, target);
    GradedMap lhs = gm_compose(source.ring, target.diff, phi);
    GradedMap rhs = gm_compose(source.ring, phi, source.diff);
    return gm_sub(source.ring, lhs, rhs).is_zero();
}

CohomologyReport cohomology(const FreeComplex& c) {
    if (!c.ring.is_pid() || c.ring.variables != 0)
        throw UnsupportedError("cohomology requires a PID base ring");
    CohomologyReport report;
    if (c.ranks.empty()) return report;
    int lo = c.min_degree(), hi = c.max_degree();
    std::map<int, SnfResult> snfs;
    for (int l = lo - 1; l <= hi; ++l) {
        Matrix m = c.d(l);
        if (m.rows == 0 || m.cols == 0) {
            SnfResult trivial;
            trivial.rank = 0;
            snfs[l] = trivial;
        } else {
            snfs[l] = smith_normal_form(c.ring, m);
        }
    }
    for (int l = lo; l <= hi; ++l) {
        int free_rank = c.rank(l) - snfs[l].rank - snfs[l - 1].rank;
        std::vector<Scalar> torsion;
        for (const Scalar& s : snfs[l - 1].divisors)
            if (!(s == 1 || s == -1) && !is_zero(s)) torsion.push_back(s);
        if (free_rank != 0 || !torsion.empty())
            report.groups[l] = {free_rank, std::move(torsion)};
        else
            report.groups[l] = {0, {}};
    }
    return report;
}

bool is_acyclic(const FreeComplex& c) { return cohomology(c).all_trivial(); }

FreeComplex mapping_cone(const Ring& r, const GradedMap& phi, const FreeComplex& c,
                         const FreeComplex& d) {
    if (!is_cochain_map(phi, c, d))
        throw ContractViolation("mapping cone requires a cochain map");
    std::map<int, int> ranks;
    int lo = std::min(c.min_degree(), d.min_degree() + 1);
    int hi = std::max(c.max_degree(), d.max_degree() + 1);
    for (int l = lo; l <= hi; ++l) {
        int rk = c.rank(l) + d.rank(l - 1);
        if (rk > 0) ranks[l] = rk;
    }
    GradedMap diff;
    diff.degree = 1;
    for (int l = lo; l <= hi; ++l) {
        int rows = c.rank(l + 1) + d.rank(l);
        int cols = c.rank(l) + d.rank(l - 1);
        if (rows == 0 || cols == 0) continue;
        Matrix m = Matrix::zero(rows, cols);
        rings::mat_paste(r, m, c.d(l), 0, 0);
        if (const Matrix* f = phi.block(l)) rings::mat_paste(r, m, *f, c.rank(l + 1), 0);
        rings::mat_paste(r, m, mat_neg(r, d.d(l - 1)), c.rank(l + 1), c.rank(l));
        if (!m.is_zero()) diff.blocks[l] = std::move(m);
    }
    return FreeComplex::make_unchecked(r, std::move(ranks), std::move(diff));
}

FreeComplex shift(const FreeComplex& c, int k) {
    std::map<int, int> ranks;
    for (const auto& [deg, rk] : c.ranks) ranks[deg - k] = rk;
    GradedMap diff;
    diff.degree = 1;
    Scalar sign = (k % 2 == 0) ? Scalar(1) : Scalar(-1);
    for (const auto& [l, m] : c.diff.blocks) {
        Matrix shifted = sign == 1 ? m : mat_neg(c.ring, m);
        diff.blocks[l - k] = std::move(shifted);
    }
    return FreeComplex::make_unchecked(c.ring, std::move(ranks), std::move(diff));
}

// Evaluation ring for spot checks: rational points over a Z-base land in Q.
Ring spot_ring(const Ring& r) {
    Ring base = r.base();
    return base.kind == rings::RingKind::Integers ? Ring::rationals() : base;
}

FreeComplex specialize_complex(const FreeComplex& c, const std::vector<Scalar>& point) {
    Ring target = spot_ring(c.ring);
    Ring eval = target.with_variables(c.ring.variables);
    GradedMap diff;
    diff.degree = 1;
    for (const auto& [l, m] : c.diff.blocks) {
        Matrix s = mat_specialize(eval, m, point);
        if (!s.is_zero()) diff.blocks[l] = std::move(s);
    }
    return FreeComplex::make_unchecked(target, c.ranks, std::move(diff));
}

GradedMap specialize_map(const Ring& r, const GradedMap& f, const std::vector<Scalar>& point) {
    Ring eval = spot_ring(r).with_variables(r.variables);
    GradedMap out;
    out.degree = f.degree;
    for (const auto& [l, m] : f.blocks) {
        Matrix s = mat_specialize(eval, m, point);
        if (!s.is_zero()) out.blocks[l] = std::move(s);
    }
    return out;
}

bool is_quasi_iso(const GradedMap& phi, const FreeComplex& source, const FreeComplex& target,
                  const std::vector<std::vector<Scalar>>& points) {
    if (source.ring.variables == 0 && points.empty()) {
        FreeComplex cone = mapping_cone(source.ring, phi, source, target);
        return is_acyclic(cone);
    }
    if (points.empty())
        throw UnsupportedError("quasi-isomorphism over a Laurent ring needs specialization points");
    Ring spot = spot_ring(source.ring);
    for (const auto& pt : points) {
        FreeComplex s0 = specialize_complex(source, pt);
        FreeComplex t0 = specialize_complex(target, pt);
        GradedMap f0 = specialize_map(source.ring, phi, pt);
        FreeComplex cone = mapping_cone(spot, f0, s0, t0);
        if (!is_acyclic(cone)) return false;
    }
    return true;
}

} // namespace homcube::homalg
