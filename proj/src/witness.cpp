#include "homcube/witness.hpp"

#include <algorithm>

namespace homcube::findom {

using cubes::card;
using cubes::Mask;
using homalg::GradedMap;
using rings::Matrix;

namespace {

OpMap opmap_diff(const FreeComplex& c, const Ring& r, const std::vector<Scalar>& center) {
    return opmap_from_graded(r, center, c.diff, c, c);
}

// a map into the finite-side complex is determined by the entries' values
// on the constant generators; those values must be variable-free
GradedMap extract_constant(const OpMap& m, const FreeComplex& source, const FreeComplex& target,
                           const Ring& out_ring) {
    GradedMap g;
    g.degree = m.degree;
    for (const auto& [l, block] : m.blocks) {
        int rows = target.rank(l + m.degree), cols = source.rank(l);
        Matrix mat = Matrix::zero(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const LinOp& op = block[static_cast<size_t>(i)][static_cast<size_t>(j)];
                LaurentPoly value = op.apply(rings::lp_one(m.ring));
                bool has_var = false;
                for (const auto& [e, cc] : value.terms) {
                    (void)cc;
                    for (auto x : e)
                        if (x != 0) has_var = true;
                }
                if (has_var) throw InternalError("operator entry has variable content");
                if (!value.terms.empty())
                    mat.set(out_ring, i, j,
                            rings::lp_constant(out_ring, value.terms.begin()->second));
            }
        if (!mat.is_zero()) g.blocks[l] = std::move(mat);
    }
    return g;
}

} // namespace

Witness trivial_witness(const FreeComplex& c) {
    if (c.ring.variables != 0)
        throw StructuralError("trivial witness needs a finite complex over the base ring");
    Witness w;
    w.c = c;
    w.d = c;
    w.center = {};
    w.alpha = opmap_identity(c, w.center);
    w.beta = opmap_identity(c, w.center);
    w.homotopy = opmap_zero(c.ring, w.center, -1);
    return w;
}

Witness evaluation_witness(const Ring& base, std::vector<Scalar> point) {
    int n = static_cast<int>(point.size());
    if (n < 1) throw StructuralError("evaluation witness needs at least one variable");
    Ring rl = base.with_variables(n);
    for (const auto& c : point)
        if (!rings::is_unit(base.base(), c))
            throw DomainError("evaluation point must have unit coordinates");

    // D = Tot Triv(L; x_1 - c_1, ..., x_n - c_n) on the rank-one complex
    FreeComplex line = FreeComplex::make(rl, {{0, 1}}, homalg::gm_zero(1));
    std::vector<GradedMap> mult;
    for (int k = 0; k < n; ++k) {
        GradedMap m;
        m.degree = 0;
        Matrix mk = Matrix::zero(1, 1);
        LaurentPoly f = rings::lp_sub(rl, rings::lp_variable(rl, k),
                                      rings::lp_constant(rl, point[static_cast<size_t>(k)]));
        mk.set(rl, 0, 0, std::move(f));
        m.blocks[0] = std::move(mk);
        mult.push_back(std::move(m));
    }
    cubes::TotalisedComplex tot =
        cubes::totalise(cubes::expand_special(cubes::trivial_cube(line, mult)));

    Witness w;
    w.d = tot.complex;
    w.center = std::move(point);
    w.c = FreeComplex::make(base.base(), {{n, 1}}, homalg::gm_zero(1));

    // alpha: the generator of C goes to the full-subset summand of Tot^n
    Mask full = (Mask{1} << n) - 1;
    w.alpha = opmap_zero(rl, w.center, 0);
    {
        std::vector<std::vector<LinOp>> block(
            static_cast<size_t>(w.d.rank(n)),
            std::vector<LinOp>(1, op_zero(rl, w.center)));
        int off = tot.offsets.at(n).at(full);
        block[static_cast<size_t>(off)][0] = op_identity(rl, w.center);
        w.alpha.blocks[n] = std::move(block);
    }
    // beta: evaluate the full-subset coordinate at the point, zero elsewhere
    w.beta = opmap_zero(rl, w.center, 0);
    {
        std::vector<std::vector<LinOp>> block(
            1, std::vector<LinOp>(static_cast<size_t>(w.d.rank(n)), op_zero(rl, w.center)));
        LinOp evall = op_identity(rl, w.center);
        for (int k = 0; k < n; ++k) evall = op_compose(op_eval(rl, w.center, k), evall);
        int off = tot.offsets.at(n).at(full);
        block[0][static_cast<size_t>(off)] = std::move(evall);
        w.beta.blocks[n] = std::move(block);
    }
    // G: on the A-summand, subtract along the variables forming an initial
    // segment inside A, with alternating signs
    w.homotopy = opmap_zero(rl, w.center, -1);
    for (int deg = 1; deg <= n; ++deg) {
        int rows = w.d.rank(deg - 1), cols = w.d.rank(deg);
        if (rows == 0 || cols == 0) continue;
        std::vector<std::vector<LinOp>> block(
            static_cast<size_t>(rows),
            std::vector<LinOp>(static_cast<size_t>(cols), op_zero(rl, w.center)));
        bool nonzero = false;
        for (Mask a = 0; a < (Mask{1} << n); ++a) {
            if (card(a) != deg) continue;
            int col = tot.offsets.at(deg).at(a);
            for (int k = 0; k < n; ++k) {
                Mask kbit = Mask{1} << k;
                if (!(a & kbit)) continue;
                // require {1..k} inside A
                if ((a & (kbit - 1)) != kbit - 1) continue;
                int row = tot.offsets.at(deg - 1).at(a & ~kbit);
                LinOp op = op_delta(rl, w.center, k);
                for (int j = 0; j < k; ++j) op = op_compose(op, op_eval(rl, w.center, j));
                if (k % 2 == 0) op = op_neg(op);
                block[static_cast<size_t>(row)][static_cast<size_t>(col)] = std::move(op);
                nonzero = true;
            }
        }
        if (nonzero) w.homotopy.blocks[deg] = std::move(block);
    }
    validate_witness(w);
    return w;
}

void validate_witness(const Witness& w) {
    const Ring& rl = w.d.ring;
    OpMap d_c = opmap_diff(w.c, rl, w.center);
    OpMap d_d = opmap_diff(w.d, rl, w.center);

    // alpha and beta are cochain maps
    OpMap a1 = opmap_compose(d_d, w.alpha, w.c, w.d, w.d);
    OpMap a2 = opmap_compose(w.alpha, d_c, w.c, w.c, w.d);
    if (!opmap_is_zero(opmap_sub(a1, a2)))
        throw ContractViolation("witness: alpha is not a cochain map");
    OpMap b1 = opmap_compose(d_c, w.beta, w.d, w.c, w.c);
    OpMap b2 = opmap_compose(w.beta, d_d, w.d, w.d, w.c);
    if (!opmap_is_zero(opmap_sub(b1, b2)))
        throw ContractViolation("witness: beta is not a cochain map");

    // dG + Gd = alpha beta - id_D
    OpMap lhs = opmap_add(opmap_compose(d_d, w.homotopy, w.d, w.d, w.d),
                          opmap_compose(w.homotopy, d_d, w.d, w.d, w.d));
    OpMap ab = opmap_compose(w.alpha, w.beta, w.d, w.c, w.d);
    OpMap rhs = opmap_sub(ab, opmap_identity(w.d, w.center));
    if (!opmap_is_zero(opmap_sub(lhs, rhs)))
        throw ContractViolation("witness: dG + Gd differs from alpha beta - id");
}

SpecialCubeData derive_cube_from_witness(const Witness& w, const std::vector<int>& vars) {
    const Ring& rl = w.d.ring;
    const Ring base = w.c.ring;
    int u = static_cast<int>(vars.size());

    std::vector<OpMap> h;
    for (int k : vars) {
        if (k < 0 || k >= rl.variables) throw StructuralError("variable index out of range");
        GradedMap mult;
        mult.degree = 0;
        for (const auto& [deg, rk] : w.d.ranks)
            mult.blocks[deg] = rings::mat_scale_poly(rl, rings::lp_variable(rl, k),
                                                     Matrix::identity(rl, rk));
        h.push_back(opmap_from_graded(rl, w.center, mult, w.d, w.d));
    }

    SpecialCubeData cube;
    cube.n = u;
    cube.complex = w.c;
    for (int k = 0; k < u; ++k) {
        OpMap f = opmap_compose(w.beta, opmap_compose(h[static_cast<size_t>(k)], w.alpha, w.c,
                                                      w.d, w.d),
                                w.c, w.d, w.c);
        cube.f.push_back(extract_constant(f, w.c, w.c, base));
    }
    for (Mask mask = 0; mask < (Mask{1} << u); ++mask) {
        int cs = card(mask);
        if (cs < 2) continue;
        std::vector<int> elems;
        for (int k = 0; k < u; ++k)
            if (mask & (Mask{1} << k)) elems.push_back(k);
        std::vector<int> perm = elems;
        OpMap total = opmap_zero(rl, w.center, 1 - cs);
        bool first = true;
        do {
            int inversions = 0;
            for (size_t i = 0; i < perm.size(); ++i)
                for (size_t j = i + 1; j < perm.size(); ++j)
                    if (perm[i] > perm[j]) ++inversions;
            OpMap acc = h[static_cast<size_t>(perm.back())];
            for (size_t i = perm.size() - 1; i-- > 0;) {
                acc = opmap_compose(w.homotopy, acc, w.d, w.d, w.d);
                acc = opmap_compose(h[static_cast<size_t>(perm[i])], acc, w.d, w.d, w.d);
            }
            if (inversions % 2 == 1)
                for (auto& [l, block] : acc.blocks)
                    for (auto& row : block)
                        for (auto& op : row) op = op_neg(op);
            total = first ? acc : opmap_add(total, acc);
            first = false;
        } while (std::next_permutation(perm.begin(), perm.end()));
        OpMap hs = opmap_compose(w.beta, opmap_compose(total, w.alpha, w.c, w.d, w.d), w.c, w.d,
                                 w.c);
        GradedMap extracted = extract_constant(hs, w.c, w.c, base);
        if (!extracted.is_zero()) cube.h[mask] = std::move(extracted);
    }

    cubes::SpecialReport report = cubes::verify_special(cube);
    if (!report.ok)
        throw InternalError("derived cube from witness failed the special-cube criterion");
    return cube;
}

DominationWitnessResult domination_witness(const Witness& w, const std::vector<int>& vars) {
    validate_witness(w);
    DominationWitnessResult out;
    out.cube = derive_cube_from_witness(w, vars);
    int u = static_cast<int>(vars.size());
    out.shifted_d = homalg::shift(w.d, -u);
    if (u == 0) {
        // empty torus: the complex C itself
        cubes::NDiagram diag = cubes::expand_special(out.cube);
        out.torus.base = out.cube;
        out.torus.extended = out.cube;
        out.torus.tot = cubes::totalise(diag);
        return out;
    }
    out.torus = tori::mapping_torus(out.cube);
    return out;
}

bool domination_spot_check(const DominationWitnessResult& dw, const Witness& w,
                           const std::vector<int>& vars,
                           const std::vector<std::vector<Scalar>>& points) {
    int u = static_cast<int>(vars.size());
    for (const auto& pt : points) {
        if (static_cast<int>(pt.size()) != w.d.ring.variables)
            throw StructuralError("specialization point has wrong length");
        std::vector<Scalar> torus_pt;
        for (int k : vars) torus_pt.push_back(pt[static_cast<size_t>(k)]);
        FreeComplex torus_fib =
            u == 0 ? dw.torus.tot.complex : homalg::specialize_complex(dw.torus.tot.complex, torus_pt);
        if (u == 0) torus_fib.ring = homalg::spot_ring(w.c.ring);
        FreeComplex target_fib = homalg::specialize_complex(dw.shifted_d, pt);
        homalg::CohomologyReport h1 = homalg::cohomology(torus_fib);
        homalg::CohomologyReport h2 = homalg::cohomology(target_fib);
        auto dim = [](const homalg::CohomologyReport& rep, int deg) {
            auto it = rep.groups.find(deg);
            return it == rep.groups.end() ? 0 : it->second.first;
        };
        int lo = std::min(torus_fib.min_degree(), target_fib.min_degree()) - 1;
        int hi = std::max(torus_fib.max_degree(), target_fib.max_degree()) + 1;
        for (int m = lo; m <= hi; ++m)
            if (dim(h1, m) != dim(h2, m)) return false;
    }
    return true;
}

} // namespace homcube::findom
