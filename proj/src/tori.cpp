#include "homcube/tori.hpp"

#include <random>

namespace homcube::tori {

using cubes::card;
using cubes::parity_sign;
using cubes::subset;
using cubes::total_incidence;
using homalg::gm_add;
using homalg::gm_compose;
using homalg::gm_extend;
using homalg::gm_identity;
using homalg::gm_scale;
using homalg::gm_sub;
using homalg::gm_zero;
using rings::LaurentPoly;
using rings::Matrix;

namespace {

// f (x) 1 - 1 (x) x_k on the extended complex
GradedMap torus_map(const FreeComplex& extended, const GradedMap& f_ext, int var_index) {
    const Ring& r = extended.ring;
    LaurentPoly xk = rings::lp_variable(r, var_index);
    GradedMap shift_part;
    shift_part.degree = 0;
    for (const auto& [deg, rk] : extended.ranks)
        shift_part.blocks[deg] = rings::mat_scale_poly(r, xk, Matrix::identity(r, rk));
    return gm_sub(r, f_ext, shift_part);
}

} // namespace

TorusData mapping_torus(const SpecialCubeData& s) {
    cubes::SpecialReport base_report = cubes::verify_special(s);
    if (!base_report.ok)
        throw ContractViolation("mapping torus of data that is not a special cube");

    const Ring& r0 = s.complex.ring;
    Ring rl = r0.with_variables(r0.variables + s.n);
    TorusData out;
    out.base = s;
    out.torus_var_offset = r0.variables;

    SpecialCubeData ext;
    ext.n = s.n;
    GradedMap ext_diff = gm_extend(rl, s.complex.diff);
    ext.complex = FreeComplex::make_unchecked(rl, s.complex.ranks, std::move(ext_diff));
    for (int k = 0; k < s.n; ++k)
        ext.f.push_back(torus_map(ext.complex, gm_extend(rl, s.f[static_cast<size_t>(k)]),
                                  out.torus_var_offset + k));
    for (const auto& [mask, h] : s.h) ext.h[mask] = gm_extend(rl, h);
    cubes::SpecialReport ext_report = cubes::verify_special(ext);
    if (!ext_report.ok)
        throw InternalError("mapping torus data failed the special-cube criterion");
    out.extended = std::move(ext);
    out.tot = cubes::totalise(cubes::expand_special(out.extended));
    return out;
}

namespace {

// Core maps M_{B \ A}: g for the empty set, G h_k g for singletons,
// G H_S for larger sets, where H_S comes from the derived cube on D.
std::map<Mask, GradedMap> mather_cores(const Ring& r, int n, const GradedMap& g,
                                       const GradedMap& big_g, const SpecialCubeData& derived) {
    std::map<Mask, GradedMap> cores;
    cores[0] = g;
    for (Mask mask = 1; mask < (Mask{1} << n); ++mask) {
        int cs = card(mask);
        if (cs == 1) {
            int k = std::countr_zero(mask);
            cores[mask] = gm_compose(r, big_g, derived.f[static_cast<size_t>(k)]);
        } else if (const GradedMap* hs = derived.homotopy(mask)) {
            cores[mask] = gm_compose(r, big_g, *hs);
        } else {
            cores[mask] = gm_zero(-cs);
        }
    }
    return cores;
}

std::map<std::pair<Mask, Mask>, GradedMap> mather_blocks(const Ring& r, int n,
                                                         const std::map<Mask, GradedMap>& cores) {
    std::map<std::pair<Mask, Mask>, GradedMap> blocks;
    for (Mask a = 0; a < (Mask{1} << n); ++a) {
        for (Mask b = a;; b = (b + 1) | a) {
            if (subset(a, b)) {
                int ca = card(a), cb = card(b);
                int sign = parity_sign(cb) * parity_sign(static_cast<long long>(ca) * cb) *
                           total_incidence(b, a);
                GradedMap block = gm_scale(r, Scalar(sign), cores.at(b & ~a));
                if (!block.is_zero()) blocks[{b, a}] = std::move(block);
            }
            if (b == (Mask{1} << n) - 1) break;
        }
    }
    return blocks;
}

MatherMap finish_mather(char kind, const Ring& r,
                        std::map<std::pair<Mask, Mask>, GradedMap> blocks,
                        TotalisedComplex source, TotalisedComplex target) {
    MatherMap out;
    out.kind = kind;
    out.blocks = std::move(blocks);
    out.tot_map = cubes::assemble_blocks(r, out.blocks, source, target, 0);
    GradedMap lhs = gm_compose(r, out.tot_map, source.complex.diff);
    GradedMap rhs = gm_compose(r, target.complex.diff, out.tot_map);
    if (!gm_sub(r, lhs, rhs).is_zero())
        throw InternalError(std::string("Mather map ") + kind + " is not a cochain map");
    out.source = std::move(source);
    out.target = std::move(target);
    return out;
}

} // namespace

MatherMap mather_M(const FreeComplex& d, const GradedMap& g, const GradedMap& big_g,
                   const std::vector<GradedMap>& h) {
    const Ring& r = d.ring;
    SpecialCubeData derived = cubes::derive_cube(d, d, g, gm_identity(d), big_g, h);
    SpecialCubeData trivial = cubes::trivial_cube(d, h);
    auto cores = mather_cores(r, static_cast<int>(h.size()), g, big_g, derived);
    auto blocks = mather_blocks(r, static_cast<int>(h.size()), cores);
    return finish_mather('M', r, std::move(blocks),
                         cubes::totalise(cubes::expand_special(derived)),
                         cubes::totalise(cubes::expand_special(trivial)));
}

MatherMap mather_L(const FreeComplex& c, const FreeComplex& d, const GradedMap& alpha,
                   const GradedMap& beta, const GradedMap& big_g,
                   const std::vector<GradedMap>& h) {
    const Ring& r = d.ring;
    GradedMap g = gm_compose(r, alpha, beta);
    SpecialCubeData y_cube = cubes::derive_cube(d, d, g, gm_identity(d), big_g, h);
    SpecialCubeData z_cube = cubes::derive_cube(c, d, alpha, beta, big_g, h);
    std::map<std::pair<Mask, Mask>, GradedMap> blocks;
    int n = static_cast<int>(h.size());
    for (Mask a = 0; a < (Mask{1} << n); ++a) blocks[{a, a}] = beta;
    return finish_mather('L', r, std::move(blocks),
                         cubes::totalise(cubes::expand_special(y_cube)),
                         cubes::totalise(cubes::expand_special(z_cube)));
}

MatherMap mather_K(const FreeComplex& d, const GradedMap& g, const GradedMap& big_g,
                   const std::vector<GradedMap>& h) {
    SpecialCubeData derived = cubes::derive_cube(d, d, g, gm_identity(d), big_g, h);
    SpecialCubeData trivial = cubes::trivial_cube(d, h);
    TorusData torus_y = mapping_torus(derived);
    TorusData torus_x = mapping_torus(trivial);
    const Ring& rl = torus_y.extended.complex.ring;
    auto cores = mather_cores(d.ring, static_cast<int>(h.size()), g, big_g, derived);
    std::map<Mask, GradedMap> ext_cores;
    for (const auto& [mask, core] : cores) ext_cores[mask] = gm_extend(rl, core);
    auto blocks = mather_blocks(rl, static_cast<int>(h.size()), ext_cores);
    return finish_mather('K', rl, std::move(blocks), std::move(torus_y.tot),
                         std::move(torus_x.tot));
}

MatherMap mather_J(const FreeComplex& c, const FreeComplex& d, const GradedMap& alpha,
                   const GradedMap& beta, const GradedMap& big_g,
                   const std::vector<GradedMap>& h) {
    const Ring& r = d.ring;
    GradedMap g = gm_compose(r, alpha, beta);
    SpecialCubeData y_cube = cubes::derive_cube(d, d, g, gm_identity(d), big_g, h);
    SpecialCubeData z_cube = cubes::derive_cube(c, d, alpha, beta, big_g, h);
    TorusData torus_y = mapping_torus(y_cube);
    TorusData torus_z = mapping_torus(z_cube);
    const Ring& rl = torus_y.extended.complex.ring;
    GradedMap beta_ext = gm_extend(rl, beta);
    std::map<std::pair<Mask, Mask>, GradedMap> blocks;
    int n = static_cast<int>(h.size());
    for (Mask a = 0; a < (Mask{1} << n); ++a) blocks[{a, a}] = beta_ext;
    return finish_mather('J', rl, std::move(blocks), std::move(torus_y.tot),
                         std::move(torus_z.tot));
}

PsiData build_psi(const FreeComplex& d) {
    const Ring& r = d.ring;
    int n = r.variables;
    if (n < 1) throw DomainError("psi needs at least one Laurent variable");

    std::vector<GradedMap> mult;
    for (int k = 0; k < n; ++k) {
        LaurentPoly xk = rings::lp_variable(r, k);
        GradedMap m;
        m.degree = 0;
        for (const auto& [deg, rk] : d.ranks)
            m.blocks[deg] = rings::mat_scale_poly(r, xk, Matrix::identity(r, rk));
        mult.push_back(std::move(m));
    }

    PsiData out;
    out.torus = mapping_torus(cubes::trivial_cube(d, mult));
    out.target = homalg::shift(d, -n);
    Mask full = (Mask{1} << n) - 1;

    // psi on generators: select the full-subset summand
    out.psi.degree = 0;
    for (const auto& [l, off] : out.torus.tot.offsets) {
        int rows = out.target.rank(l);
        int cols = out.torus.tot.complex.rank(l);
        if (rows == 0 || cols == 0) continue;
        Matrix m = Matrix::zero(rows, cols);
        rings::mat_paste(r, m, Matrix::identity(r, rows), 0, off.at(full));
        out.psi.blocks[l] = std::move(m);
    }

    // cochain property: collapse torus variables s_k onto x_k and compare
    // row blocks of the torus differential with d_Sigma o psi
    std::vector<LaurentPoly> images;
    for (int k = 0; k < n; ++k) images.push_back(rings::lp_variable(r, k));
    for (int k = 0; k < n; ++k) images.push_back(rings::lp_variable(r, k));

    for (const auto& [l, off] : out.torus.tot.offsets) {
        auto next = out.torus.tot.offsets.find(l + 1);
        int target_rank = out.target.rank(l + 1);
        Matrix lhs = Matrix::zero(target_rank, out.torus.tot.complex.rank(l));
        if (next != out.torus.tot.offsets.end() && target_rank > 0) {
            Matrix dm = out.torus.tot.complex.d(l);
            Matrix top = rings::mat_extract(dm, next->second.at(full), 0, target_rank, dm.cols);
            lhs = rings::mat_substitute(r, top, images);
        }
        Matrix rhs = Matrix::zero(target_rank, out.torus.tot.complex.rank(l));
        if (const Matrix* p = out.psi.block(l)) {
            Matrix dsig = out.target.d(l);
            rhs = rings::mat_mul(r, dsig, *p);
        }
        if (!(lhs == rhs)) throw InternalError("psi is not a cochain map");
    }
    return out;
}

bool psi_spot_check(const PsiData& psi, const std::vector<std::vector<Scalar>>& points) {
    // psi is linear for the torus-variable action, which acts on the target
    // through the base variables. Consequences at a fibre (x, s) = (t, u):
    // for u_k != t_k the target's derived fibre vanishes, so the cone
    // reduces to the torus fibre, which must be acyclic; on the diagonal
    // u = t the derived fibre is a Koszul fattening of the target fibre and
    // the cohomology dimensions must match binomially.
    const Ring& r = psi.target.ring;
    int n = r.variables;
    for (const auto& pt : points) {
        if (static_cast<int>(pt.size()) != n)
            throw StructuralError("specialization point has wrong length");
        std::vector<Scalar> off = pt;
        for (auto& v : off) {
            v = v + 1;
            if (rings::is_zero(v)) v = v + 1;
        }
        std::vector<Scalar> both = pt;
        both.insert(both.end(), off.begin(), off.end());
        FreeComplex torus_off = homalg::specialize_complex(psi.torus.tot.complex, both);
        if (!homalg::is_acyclic(torus_off)) return false;

        std::vector<Scalar> doubled = pt;
        doubled.insert(doubled.end(), pt.begin(), pt.end());
        FreeComplex torus_diag = homalg::specialize_complex(psi.torus.tot.complex, doubled);
        FreeComplex target_diag = homalg::specialize_complex(psi.target, pt);
        homalg::CohomologyReport torus_h = homalg::cohomology(torus_diag);
        homalg::CohomologyReport target_h = homalg::cohomology(target_diag);
        auto dim = [](const homalg::CohomologyReport& rep, int deg) {
            auto it = rep.groups.find(deg);
            return it == rep.groups.end() ? 0 : it->second.first;
        };
        int lo = torus_diag.min_degree() - n - 1, hi = torus_diag.max_degree() + n + 1;
        for (int m = lo; m <= hi; ++m) {
            int expected = 0;
            long long binom = 1;
            for (int j = 0; j <= n; ++j) {
                expected += static_cast<int>(binom) * dim(target_h, m + j);
                binom = binom * (n - j) / (j + 1);
            }
            if (dim(torus_h, m) != expected) return false;
        }
    }
    return true;
}

FreeComplex koszul(int n) {
    if (n < 1) throw DomainError("koszul needs n >= 1");
    Ring rl = Ring::integers(n);
    FreeComplex line = FreeComplex::make(rl, {{0, 1}}, gm_zero(1));
    std::vector<GradedMap> mult;
    for (int k = 0; k < n; ++k) {
        GradedMap m;
        m.degree = 0;
        Matrix mk = Matrix::zero(1, 1);
        mk.set(rl, 0, 0, rings::lp_variable(rl, k));
        m.blocks[0] = std::move(mk);
        mult.push_back(std::move(m));
    }
    TotalisedComplex tot = cubes::totalise(cubes::expand_special(cubes::trivial_cube(line, mult)));
    if (!homalg::check_complex(tot.complex)) throw InternalError("koszul complex fails d*d = 0");
    return tot.complex;
}

FreeComplex koszul_slice(int n, const std::vector<int>& multidegree) {
    if (static_cast<int>(multidegree.size()) != n)
        throw StructuralError("multidegree length mismatch");
    Ring z = Ring::integers();
    // generator for subset A sits in degree #A with monomial exponent
    // c_A = m - char(N \ A); present iff c_A is componentwise nonnegative
    auto exponent_of = [&](Mask a) {
        std::vector<int> c(multidegree);
        for (int k = 0; k < n; ++k)
            if (!(a & (Mask{1} << k))) c[static_cast<size_t>(k)] -= 1;
        return c;
    };
    auto present = [&](Mask a) {
        for (int v : exponent_of(a))
            if (v < 0) return false;
        return true;
    };
    std::map<int, std::vector<Mask>> by_degree;
    for (Mask a = 0; a < (Mask{1} << n); ++a)
        if (present(a)) by_degree[card(a)].push_back(a);
    std::map<int, int> ranks;
    for (const auto& [deg, masks] : by_degree) ranks[deg] = static_cast<int>(masks.size());
    GradedMap diff;
    diff.degree = 1;
    for (const auto& [deg, masks] : by_degree) {
        auto next = by_degree.find(deg + 1);
        if (next == by_degree.end()) continue;
        Matrix m = Matrix::zero(static_cast<int>(next->second.size()),
                                static_cast<int>(masks.size()));
        for (size_t j = 0; j < masks.size(); ++j) {
            Mask a = masks[j];
            for (int k = 0; k < n; ++k) {
                if (a & (Mask{1} << k)) continue;
                Mask b = a | (Mask{1} << k);
                auto it = std::lower_bound(next->second.begin(), next->second.end(), b);
                if (it == next->second.end() || *it != b) continue;
                int sign = parity_sign(static_cast<long long>(card(a)) * card(b)) *
                           total_incidence(b, a);
                m.set(z, static_cast<int>(it - next->second.begin()), static_cast<int>(j),
                      rings::lp_constant(z, Scalar(sign)));
            }
        }
        if (!m.is_zero()) diff.blocks[deg] = std::move(m);
    }
    return FreeComplex::make(z, std::move(ranks), std::move(diff));
}

std::vector<std::vector<Scalar>> random_unit_points(int vars, int count, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(1, 9), den(1, 9), sign(0, 1);
    std::vector<std::vector<Scalar>> out;
    for (int i = 0; i < count; ++i) {
        std::vector<Scalar> pt;
        for (int v = 0; v < vars; ++v) {
            rings::Rat q(num(rng), den(rng));
            if (sign(rng)) q = -q;
            pt.push_back(q);
        }
        out.push_back(std::move(pt));
    }
    return out;
}

} // namespace homcube::tori
