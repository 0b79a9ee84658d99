#include "homcube/cubes.hpp"

#include <algorithm>
#include <bit>

namespace homcube::cubes {

using homalg::gm_add;
using homalg::gm_compose;
using homalg::gm_identity;
using homalg::gm_scale;
using homalg::gm_sub;
using homalg::gm_validate;
using homalg::is_cochain_map;
using rings::Matrix;

int total_incidence(Mask b, Mask a) {
    if (!subset(a, b)) return 0;
    Mask removed = b & ~a;
    int m = card(removed);
    if (m == 0) return 1;
    long long exponent = m;
    for (Mask rest = removed; rest;) {
        Mask bit = rest & (~rest + 1);
        // 1-based rank of this element within b
        exponent += card(b & (bit - 1)) + 1;
        rest &= ~bit;
    }
    return parity_sign(exponent);
}

const GradedMap* NDiagram::structure_map(Mask b, Mask a) const {
    if (a == b) return &complexes[a].diff;
    auto it = maps.find({b, a});
    return it == maps.end() ? nullptr : &it->second;
}

void NDiagram::set_map(Mask b, Mask a, GradedMap h) {
    if (!subset(a, b) || a == b) throw StructuralError("structure map needs A strictly inside B");
    int expected = card(a) - card(b) + 1;
    if (h.degree != expected)
        throw StructuralError("H_{B,A} must have degree " + std::to_string(expected));
    gm_validate(h, complexes[a], complexes[b]);
    if (h.is_zero()) maps.erase({b, a});
    else maps[{b, a}] = std::move(h);
}

void NDiagram::validate() const {
    if (complexes.size() != (size_t{1} << n)) throw StructuralError("diagram needs 2^n complexes");
    for (const auto& c : complexes)
        if (!(c.ring == ring)) throw StructuralError("diagram complexes over mismatched rings");
    for (const auto& [key, h] : maps) {
        auto [b, a] = key;
        if (!subset(a, b) || a == b) throw StructuralError("bad subset pair in diagram");
        if (h.degree != card(a) - card(b) + 1) throw StructuralError("bad structure map degree");
        gm_validate(h, complexes[a], complexes[b]);
    }
}

namespace {

// Degree range and offsets for Tot(F) restricted to the given subsets.
TotalisedComplex assemble_totalisation(const NDiagram& f, const std::vector<Mask>& subsets) {
    TotalisedComplex tot;
    tot.subset_order = subsets;
    if (subsets.empty()) {
        tot.complex = FreeComplex::make_unchecked(f.ring, {}, homalg::gm_zero(1));
        return tot;
    }
    int lo = 0, hi = 0;
    bool any = false;
    for (Mask a : subsets) {
        const FreeComplex& c = f.at(a);
        if (c.ranks.empty()) continue;
        int clo = c.min_degree() + card(a), chi = c.max_degree() + card(a);
        lo = any ? std::min(lo, clo) : clo;
        hi = any ? std::max(hi, chi) : chi;
        any = true;
    }
    std::map<int, int> ranks;
    if (any) {
        for (int l = lo; l <= hi; ++l) {
            int offset = 0;
            std::map<Mask, int> at_degree;
            for (Mask a : subsets) {
                at_degree[a] = offset;
                offset += f.at(a).rank(l - card(a));
            }
            if (offset > 0) {
                tot.offsets[l] = std::move(at_degree);
                ranks[l] = offset;
            }
        }
    }

    GradedMap diff;
    diff.degree = 1;
    for (int l = lo; any && l <= hi; ++l) {
        auto row_it = tot.offsets.find(l + 1);
        auto col_it = tot.offsets.find(l);
        if (row_it == tot.offsets.end() || col_it == tot.offsets.end()) continue;
        Matrix m = Matrix::zero(ranks.at(l + 1), ranks.at(l));
        for (Mask a : subsets) {
            int ca = card(a);
            for (Mask b : subsets) {
                if (!subset(a, b)) continue;
                const GradedMap* h = f.structure_map(b, a);
                if (!h) continue;
                const Matrix* block = h->block(l - ca);
                if (!block) continue;
                int sign = parity_sign(static_cast<long long>(ca) * card(b)) * total_incidence(b, a);
                Matrix signed_block = sign == 1 ? *block : rings::mat_neg(f.ring, *block);
                rings::mat_paste(f.ring, m, signed_block, row_it->second.at(b), col_it->second.at(a));
            }
        }
        if (!m.is_zero()) diff.blocks[l] = std::move(m);
    }
    tot.complex = FreeComplex::make_unchecked(f.ring, std::move(ranks), std::move(diff));
    return tot;
}

std::vector<Mask> all_subsets(int n) {
    std::vector<Mask> out;
    out.reserve(size_t{1} << n);
    for (Mask a = 0; a < (Mask{1} << n); ++a) out.push_back(a);
    return out;
}

} // namespace

TotalisedComplex totalise(const NDiagram& f) {
    f.validate();
    return assemble_totalisation(f, all_subsets(f.n));
}

std::map<std::pair<Mask, Mask>, GradedMap> d_squared(const NDiagram& f) {
    std::map<std::pair<Mask, Mask>, GradedMap> out;
    const Ring& r = f.ring;
    for (Mask a = 0; a < (Mask{1} << f.n); ++a) {
        for (Mask b = a; b < (Mask{1} << f.n); b = (b + 1) | a) {
            // iterate over supersets b of a
            if (!subset(a, b)) continue;
            int ca = card(a), cb = card(b);
            GradedMap total = homalg::gm_zero(ca - cb + 2);
            Mask diffm = b & ~a;
            // all s with a <= s <= b
            for (Mask t = 0;; t = (t - diffm) & diffm) {
                Mask s = a | t;
                const GradedMap* h1 = f.structure_map(s, a);
                const GradedMap* h2 = f.structure_map(b, s);
                if (h1 && h2) {
                    int cs = card(s);
                    int sign = parity_sign(static_cast<long long>(cb) * cs +
                                           static_cast<long long>(cs) * ca) *
                               total_incidence(b, s) * total_incidence(s, a);
                    GradedMap prod = gm_compose(r, *h2, *h1);
                    total = gm_add(r, total, gm_scale(r, Scalar(sign), prod));
                }
                if (t == diffm) break;
            }
            if (!total.is_zero()) out[{b, a}] = std::move(total);
            if (b == (Mask{1} << f.n) - 1) break;
        }
    }
    return out;
}

bool is_cube(const NDiagram& f) { return d_squared(f).empty(); }

NDiagram expand_special(const SpecialCubeData& s) {
    NDiagram f;
    f.n = s.n;
    f.ring = s.complex.ring;
    f.complexes.assign(size_t{1} << s.n, s.complex);
    if (static_cast<int>(s.f.size()) != s.n)
        throw StructuralError("special cube needs exactly n maps f_k");
    for (Mask a = 0; a < (Mask{1} << s.n); ++a) {
        for (Mask b = a; b < (Mask{1} << s.n); ++b) {
            if (!subset(a, b) || a == b) continue;
            Mask d = b & ~a;
            int cd = card(d);
            if (cd == 1) {
                int k = std::countr_zero(d);
                if (!s.f[static_cast<size_t>(k)].is_zero()) f.set_map(b, a, s.f[static_cast<size_t>(k)]);
            } else if (const GradedMap* h = s.homotopy(d)) {
                f.set_map(b, a, *h);
            }
        }
    }
    return f;
}

namespace {

std::string first_entry_detail(const GradedMap& g) {
    for (const auto& [l, m] : g.blocks) {
        if (m.is_zero()) continue;
        const auto& [ij, p] = *m.entries.begin();
        return "degree " + std::to_string(l) + ", entry (" + std::to_string(ij.first) + "," +
               std::to_string(ij.second) + ") = " + rings::lp_to_string(p);
    }
    return "";
}

} // namespace

SpecialReport verify_special(const SpecialCubeData& s) {
    SpecialReport report;
    const Ring& r = s.complex.ring;
    const GradedMap& d = s.complex.diff;
    if (static_cast<int>(s.f.size()) != s.n)
        throw StructuralError("special cube needs exactly n maps f_k");
    for (const auto& [mask, h] : s.h) {
        int cs = card(mask);
        if (cs < 2) throw StructuralError("homotopy indexed by a subset with < 2 elements");
        if (h.degree != 1 - cs) throw StructuralError("H_S degree must be 1 - |S|");
        gm_validate(h, s.complex, s.complex);
    }

    auto homotopy_or_zero = [&](Mask mask, int degree) -> GradedMap {
        if (const GradedMap* h = s.homotopy(mask)) return *h;
        return homalg::gm_zero(degree);
    };

    for (Mask mask = 0; mask < (Mask{1} << s.n); ++mask) {
        SubsetCheck check;
        check.s = mask;
        int cs = card(mask);
        GradedMap sum;
        if (cs == 0) {
            sum = gm_compose(r, d, d);
        } else if (cs == 1) {
            int k = std::countr_zero(mask);
            const GradedMap& fk = s.f[static_cast<size_t>(k)];
            sum = gm_sub(r, gm_compose(r, d, fk), gm_compose(r, fk, d));
        } else if (cs == 2) {
            int k = std::countr_zero(mask);
            int l = 31 - std::countl_zero(mask);
            const GradedMap& fk = s.f[static_cast<size_t>(k)];
            const GradedMap& fl = s.f[static_cast<size_t>(l)];
            GradedMap h = homotopy_or_zero(mask, -1);
            sum = gm_add(r, gm_compose(r, d, h), gm_compose(r, h, d));
            sum = gm_sub(r, sum, gm_compose(r, fk, fl));
            sum = gm_add(r, sum, gm_compose(r, fl, fk));
        } else {
            int sg = parity_sign(cs);
            int inc_s0 = total_incidence(mask, 0);
            GradedMap hs = homotopy_or_zero(mask, 1 - cs);
            sum = gm_scale(r, Scalar(sg * inc_s0), gm_compose(r, d, hs));
            sum = gm_add(r, sum, gm_scale(r, Scalar(inc_s0), gm_compose(r, hs, d)));
            for (Mask bit = 1; bit < (Mask{1} << s.n); bit <<= 1) {
                if (!(mask & bit)) continue;
                int z = std::countr_zero(bit);
                Mask rest = mask & ~bit;
                GradedMap hrest = homotopy_or_zero(rest, 2 - cs);
                int c1 = total_incidence(mask, rest) * total_incidence(rest, 0);
                sum = gm_add(r, sum,
                             gm_scale(r, Scalar(c1),
                                      gm_compose(r, s.f[static_cast<size_t>(z)], hrest)));
                int c2 = sg * total_incidence(mask, bit);
                sum = gm_add(r, sum,
                             gm_scale(r, Scalar(c2),
                                      gm_compose(r, hrest, s.f[static_cast<size_t>(z)])));
            }
            // proper middle terms H_{S\T} o H_T
            for (Mask t = (mask - 1) & mask; t; t = (t - 1) & mask) {
                int ct = card(t);
                if (ct < 2 || cs - ct < 2) continue;
                GradedMap ht = homotopy_or_zero(t, 1 - ct);
                GradedMap hcomp = homotopy_or_zero(mask & ~t, 1 - (cs - ct));
                int c = parity_sign(static_cast<long long>(ct) * cs) *
                        total_incidence(mask, t) * total_incidence(t, 0);
                sum = gm_add(r, sum, gm_scale(r, Scalar(c), gm_compose(r, hcomp, ht)));
            }
        }
        if (!sum.is_zero()) {
            check.ok = false;
            check.detail = first_entry_detail(sum);
            if (!report.first_failure) report.first_failure = mask;
            report.ok = false;
        }
        report.checks.push_back(std::move(check));
    }
    return report;
}

SpecialCubeData trivial_cube(const FreeComplex& c, std::vector<GradedMap> f) {
    const Ring& r = c.ring;
    for (size_t k = 0; k < f.size(); ++k)
        if (!is_cochain_map(f[k], c, c))
            throw ContractViolation("trivial cube: f_" + std::to_string(k + 1) +
                                    " is not a cochain map");
    for (size_t k = 0; k < f.size(); ++k)
        for (size_t l = k + 1; l < f.size(); ++l) {
            GradedMap commutator = gm_sub(r, gm_compose(r, f[k], f[l]), gm_compose(r, f[l], f[k]));
            if (!commutator.is_zero())
                throw ContractViolation("trivial cube: maps f_" + std::to_string(k + 1) + " and f_" +
                                        std::to_string(l + 1) + " do not commute");
        }
    SpecialCubeData s;
    s.n = static_cast<int>(f.size());
    s.complex = c;
    s.f = std::move(f);
    return s;
}

SpecialCubeData derive_cube(const FreeComplex& c, const FreeComplex& d, const GradedMap& alpha,
                            const GradedMap& beta, const GradedMap& g,
                            const std::vector<GradedMap>& h) {
    const Ring& r = c.ring;
    if (!(c.ring == d.ring)) throw StructuralError("derive_cube: C, D over different rings");
    if (!is_cochain_map(alpha, c, d)) throw ContractViolation("derive_cube: alpha not a cochain map");
    if (!is_cochain_map(beta, d, c)) throw ContractViolation("derive_cube: beta not a cochain map");
    if (g.degree != -1) throw StructuralError("derive_cube: G must have degree -1");
    for (size_t k = 0; k < h.size(); ++k) {
        if (!is_cochain_map(h[k], d, d))
            throw ContractViolation("derive_cube: h_" + std::to_string(k + 1) +
                                    " is not a cochain map");
        for (size_t l = k + 1; l < h.size(); ++l)
            if (!gm_sub(r, gm_compose(r, h[k], h[l]), gm_compose(r, h[l], h[k])).is_zero())
                throw ContractViolation("derive_cube: h_" + std::to_string(k + 1) + ", h_" +
                                        std::to_string(l + 1) + " do not commute");
    }
    // dG + Gd = alpha beta - id_D
    GradedMap lhs = gm_add(r, gm_compose(r, d.diff, g), gm_compose(r, g, d.diff));
    GradedMap rhs = gm_sub(r, gm_compose(r, alpha, beta), gm_identity(d));
    GradedMap gap = gm_sub(r, lhs, rhs);
    if (!gap.is_zero())
        throw ContractViolation("derive_cube: dG + Gd != alpha beta - id at " +
                                first_entry_detail(gap));

    int n = static_cast<int>(h.size());
    SpecialCubeData s;
    s.n = n;
    s.complex = c;
    for (int k = 0; k < n; ++k)
        s.f.push_back(gm_compose(r, beta, gm_compose(r, h[static_cast<size_t>(k)], alpha)));

    for (Mask mask = 0; mask < (Mask{1} << n); ++mask) {
        int cs = card(mask);
        if (cs < 2) continue;
        std::vector<int> elems;
        for (int k = 0; k < n; ++k)
            if (mask & (Mask{1} << k)) elems.push_back(k);
        std::vector<int> perm(elems.begin(), elems.end());
        std::sort(perm.begin(), perm.end());
        GradedMap total = homalg::gm_zero(1 - cs);
        do {
            int inversions = 0;
            for (size_t i = 0; i < perm.size(); ++i)
                for (size_t j = i + 1; j < perm.size(); ++j)
                    if (perm[i] > perm[j]) ++inversions;
            GradedMap acc = h[static_cast<size_t>(perm.back())];
            for (size_t i = perm.size() - 1; i-- > 0;)
                acc = gm_compose(r, h[static_cast<size_t>(perm[i])], gm_compose(r, g, acc));
            total = gm_add(r, total, gm_scale(r, Scalar(parity_sign(inversions)), acc));
        } while (std::next_permutation(perm.begin(), perm.end()));
        GradedMap hs = gm_compose(r, beta, gm_compose(r, total, alpha));
        if (!hs.is_zero()) s.h[mask] = std::move(hs);
    }
    return s;
}

FiltrationResult filtration(const NDiagram& f, int k) {
    f.validate();
    int kk = std::clamp(k, 0, f.n + 1);
    std::vector<Mask> sub_subsets, quot_subsets;
    for (Mask a = 0; a < (Mask{1} << f.n); ++a) {
        if (card(a) >= kk) sub_subsets.push_back(a);
        if (card(a) == kk) quot_subsets.push_back(a);
    }
    FiltrationResult out;
    TotalisedComplex sub = assemble_totalisation(f, sub_subsets);
    out.sub = std::move(sub.complex);
    out.subset_order = std::move(sub.subset_order);
    TotalisedComplex quot = assemble_totalisation(f, quot_subsets);
    out.quotient = std::move(quot.complex);
    out.quotient_order = std::move(quot.subset_order);
    return out;
}

GradedMap assemble_blocks(const Ring& r,
                          const std::map<std::pair<Mask, Mask>, GradedMap>& blocks,
                          const TotalisedComplex& source, const TotalisedComplex& target,
                          int tot_degree) {
    GradedMap out;
    out.degree = tot_degree;
    for (const auto& [l, col_offsets] : source.offsets) {
        auto row_it = target.offsets.find(l + tot_degree);
        if (row_it == target.offsets.end()) continue;
        int rows = target.complex.rank(l + tot_degree);
        int cols = source.complex.rank(l);
        Matrix m = Matrix::zero(rows, cols);
        for (const auto& [key, gm] : blocks) {
            auto [b, a] = key;
            auto coff = col_offsets.find(a);
            auto roff = row_it->second.find(b);
            if (coff == col_offsets.end() || roff == row_it->second.end()) continue;
            int expected = card(a) - card(b) + tot_degree;
            if (gm.degree != expected)
                throw StructuralError("block (B,A) has degree " + std::to_string(gm.degree) +
                                      ", expected " + std::to_string(expected));
            const Matrix* block = gm.block(l - card(a));
            if (!block) continue;
            rings::mat_paste(r, m, *block, roff->second, coff->second);
        }
        if (!m.is_zero()) out.blocks[l] = std::move(m);
    }
    return out;
}

} // namespace homcube::cubes
