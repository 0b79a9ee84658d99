#include "homcube/multicomplex.hpp"

#include <algorithm>

namespace homcube::mc {

using cubes::card;
using cubes::Mask;
using cubes::total_incidence;
using rings::add;
using rings::is_zero;
using rings::mat_neg;
using rings::mat_paste;
using rings::mul;
using rings::sub;

namespace {

Position shifted(Position p, int i, int by = 1) {
    p[static_cast<size_t>(i)] += by;
    return p;
}

int coord_sum(const Position& p) {
    int s = 0;
    for (int v : p) s += v;
    return s;
}

Scalar entry_scalar(const rings::LaurentPoly& p) {
    if (p.terms.empty()) return Scalar(0);
    return p.terms.begin()->second;
}

std::vector<Scalar> mat_apply(const Ring& r, const Matrix& m, const std::vector<Scalar>& v) {
    std::vector<Scalar> out(static_cast<size_t>(m.rows), Scalar(0));
    for (const auto& [ij, p] : m.entries)
        out[static_cast<size_t>(ij.first)] =
            add(r, out[static_cast<size_t>(ij.first)],
                mul(r, entry_scalar(p), v[static_cast<size_t>(ij.second)]));
    return out;
}

std::vector<Scalar> vec_sub(const Ring& r, std::vector<Scalar> a, const std::vector<Scalar>& b) {
    for (size_t i = 0; i < a.size(); ++i) a[i] = sub(r, a[i], b[i]);
    return a;
}

bool vec_is_zero(const std::vector<Scalar>& v) {
    for (const auto& x : v)
        if (!is_zero(x)) return false;
    return true;
}

} // namespace

Matrix MultiComplex::d(const Position& p, int i) const {
    auto it = diff.find({p, i});
    if (it != diff.end()) return it->second;
    return Matrix::zero(rank(shifted(p, i)), rank(p));
}

void MultiComplex::set_d(const Position& p, int i, Matrix m) {
    if (i < 0 || i >= dirs) throw StructuralError("direction out of range");
    if (m.rows != rank(shifted(p, i)) || m.cols != rank(p))
        throw StructuralError("multicomplex differential has wrong dimensions");
    if (m.is_zero()) diff.erase({p, i});
    else diff[{p, i}] = std::move(m);
}

std::optional<std::string> check_multicomplex(const MultiComplex& e) {
    for (const auto& [p, rk] : e.modules) {
        (void)rk;
        for (int i = 0; i < e.dirs; ++i) {
            for (int j = i; j < e.dirs; ++j) {
                Position pi = shifted(p, i), pj = shifted(p, j);
                Position pij = shifted(pi, j);
                if (!e.modules.count(pij)) continue;
                if (i != j && (!e.modules.count(pi) || !e.modules.count(pj))) continue;
                Matrix lhs = rings::mat_mul(e.ring, e.d(pi, j), e.d(p, i));
                Matrix sum = i == j
                                 ? lhs
                                 : rings::mat_add(e.ring, lhs,
                                                  rings::mat_mul(e.ring, e.d(pj, i), e.d(p, j)));
                if (!sum.is_zero()) {
                    std::string pos;
                    for (int v : p) pos += std::to_string(v) + ",";
                    return "anticommutation fails at position (" + pos + ") directions " +
                           std::to_string(i + 1) + "," + std::to_string(j + 1);
                }
            }
        }
    }
    return std::nullopt;
}

MultiComplex from_trivial_cube(const FreeComplex& c, const std::vector<GradedMap>& f) {
    cubes::trivial_cube(c, f); // validates commutativity and the cochain property
    int n = static_cast<int>(f.size());
    MultiComplex e;
    e.ring = c.ring;
    e.dirs = n + 1;
    for (Mask eps = 0; eps < (Mask{1} << n); ++eps) {
        for (const auto& [q, rk] : c.ranks) {
            Position p(static_cast<size_t>(n + 1), 0);
            for (int k = 0; k < n; ++k) p[static_cast<size_t>(k)] = (eps >> k) & 1;
            p[static_cast<size_t>(n)] = q;
            e.modules[p] = rk;
        }
    }
    for (Mask eps = 0; eps < (Mask{1} << n); ++eps) {
        for (const auto& [q, rk] : c.ranks) {
            (void)rk;
            Position p(static_cast<size_t>(n + 1), 0);
            for (int k = 0; k < n; ++k) p[static_cast<size_t>(k)] = (eps >> k) & 1;
            p[static_cast<size_t>(n)] = q;
            if (c.rank(q + 1) > 0) {
                Matrix dq = c.d(q);
                if (card(eps) % 2 == 1) dq = mat_neg(c.ring, dq);
                if (!dq.is_zero()) e.set_d(p, n, std::move(dq));
            }
            for (int k = 0; k < n; ++k) {
                if ((eps >> k) & 1) continue;
                const Matrix* blk = f[static_cast<size_t>(k)].block(q);
                if (!blk) continue;
                Matrix m = *blk;
                if (card(eps & ((Mask{1} << k) - 1)) % 2 == 1) m = mat_neg(c.ring, m);
                if (!m.is_zero()) e.set_d(p, k, std::move(m));
            }
        }
    }
    if (auto bad = check_multicomplex(e)) throw InternalError(*bad);
    return e;
}

TotSum tot_sum(const MultiComplex& e) {
    TotSum out;
    std::map<int, int> ranks;
    for (const auto& [p, rk] : e.modules) {
        int k = coord_sum(p);
        out.offsets[k][p] = 0; // filled below
        ranks[k] += rk;
    }
    for (auto& [k, off] : out.offsets) {
        int acc = 0;
        for (auto& [p, o] : off) {
            o = acc;
            acc += e.rank(p);
        }
    }
    GradedMap diff;
    diff.degree = 1;
    for (const auto& [k, off] : out.offsets) {
        auto next = out.offsets.find(k + 1);
        if (next == out.offsets.end()) continue;
        Matrix m = Matrix::zero(ranks.at(k + 1), ranks.at(k));
        for (const auto& [p, o] : off) {
            for (int i = 0; i < e.dirs; ++i) {
                auto dit = e.diff.find({p, i});
                if (dit == e.diff.end()) continue;
                Position q = shifted(p, i);
                auto it = next->second.find(q);
                if (it == next->second.end()) continue;
                mat_paste(e.ring, m, dit->second, it->second, o);
            }
        }
        if (!m.is_zero()) diff.blocks[k] = std::move(m);
    }
    std::map<int, int> pruned;
    for (const auto& [k, rk] : ranks)
        if (rk > 0) pruned[k] = rk;
    out.complex = FreeComplex::make_unchecked(e.ring, std::move(pruned), std::move(diff));
    return out;
}

std::vector<Mask> subsets_of_size(int n, int p) {
    std::vector<Mask> out;
    for (Mask a = 0; a < (Mask{1} << n); ++a)
        if (card(a) == p) out.push_back(a);
    return out;
}

MultiComplex partial_tot_2complex(const FreeComplex& c, const std::vector<GradedMap>& f) {
    cubes::trivial_cube(c, f);
    int n = static_cast<int>(f.size());
    MultiComplex e;
    e.ring = c.ring;
    e.dirs = 2;
    for (int p = 0; p <= n; ++p) {
        int count = static_cast<int>(subsets_of_size(n, p).size());
        for (const auto& [q, rk] : c.ranks) e.modules[{p, q}] = count * rk;
    }
    for (int p = 0; p <= n; ++p) {
        auto rows_subsets = subsets_of_size(n, p + 1);
        auto cols_subsets = subsets_of_size(n, p);
        for (const auto& [q, rk] : c.ranks) {
            (void)rk;
            if (p + 1 <= n) {
                Matrix m = Matrix::zero(e.rank({p + 1, q}), e.rank({p, q}));
                for (size_t col_idx = 0; col_idx < cols_subsets.size(); ++col_idx) {
                    Mask a = cols_subsets[col_idx];
                    for (int j = 0; j < n; ++j) {
                        if (a & (Mask{1} << j)) continue;
                        Mask b = a | (Mask{1} << j);
                        auto row_pos =
                            std::lower_bound(rows_subsets.begin(), rows_subsets.end(), b);
                        size_t row_idx = static_cast<size_t>(row_pos - rows_subsets.begin());
                        const Matrix* blk = f[static_cast<size_t>(j)].block(q);
                        if (!blk) continue;
                        Matrix signed_blk =
                            total_incidence(b, a) == 1 ? *blk : mat_neg(c.ring, *blk);
                        mat_paste(c.ring, m, signed_blk, static_cast<int>(row_idx) * c.rank(q),
                                  static_cast<int>(col_idx) * c.rank(q));
                    }
                }
                if (!m.is_zero()) e.set_d({p, q}, 0, std::move(m));
            }
            if (c.rank(q + 1) > 0) {
                Matrix m = Matrix::zero(e.rank({p, q + 1}), e.rank({p, q}));
                Matrix dq = c.d(q);
                if (p % 2 == 1) dq = mat_neg(c.ring, dq);
                for (size_t idx = 0; idx < cols_subsets.size(); ++idx)
                    mat_paste(c.ring, m, dq, static_cast<int>(idx) * c.rank(q + 1),
                              static_cast<int>(idx) * c.rank(q));
                if (!m.is_zero()) e.set_d({p, q}, 1, std::move(m));
            }
        }
    }
    if (auto bad = check_multicomplex(e)) throw InternalError(*bad);
    return e;
}

MultiComplex realize_L(const SpecialCubeData& f, int box_radius) {
    cubes::NDiagram diag = cubes::expand_special(f);
    cubes::TotalisedComplex tot = cubes::totalise(diag);
    const FreeComplex& t = tot.complex;
    int n = f.n;
    MultiComplex e;
    e.ring = f.complex.ring;
    e.dirs = n + 1;
    if (t.ranks.empty()) return e;

    std::vector<Position> box;
    Position a(static_cast<size_t>(n), -box_radius);
    for (;;) {
        box.push_back(a);
        int k = 0;
        while (k < n && a[static_cast<size_t>(k)] == box_radius) {
            a[static_cast<size_t>(k)] = -box_radius;
            ++k;
        }
        if (k == n) break;
        ++a[static_cast<size_t>(k)];
    }

    for (const Position& pos : box) {
        int abs_sum = coord_sum(pos);
        for (const auto& [deg, rk] : t.ranks) {
            Position p = pos;
            p.push_back(deg - abs_sum);
            e.modules[p] = rk;
        }
    }
    for (const Position& pos : box) {
        int abs_sum = coord_sum(pos);
        for (const auto& [deg, rk] : t.ranks) {
            (void)rk;
            Position p = pos;
            p.push_back(deg - abs_sum);
            // direction n+1 carries the totalisation differential, re-indexed
            if (t.rank(deg + 1) > 0) {
                Matrix dm = t.d(deg);
                if (!dm.is_zero()) e.set_d(p, n, std::move(dm));
            }
            // directions k <= n: -[A+k : A] times the inclusion of summands
            for (int k = 0; k < n; ++k) {
                if (pos[static_cast<size_t>(k)] + 1 > box_radius) continue;
                auto src_off = tot.offsets.find(deg);
                auto dst_off = tot.offsets.find(deg + 1);
                if (src_off == tot.offsets.end() || dst_off == tot.offsets.end()) continue;
                Matrix m = Matrix::zero(t.rank(deg + 1), t.rank(deg));
                for (Mask sub : tot.subset_order) {
                    if (sub & (Mask{1} << k)) continue;
                    Mask sup = sub | (Mask{1} << k);
                    int block_rank = f.complex.rank(deg - card(sub));
                    if (block_rank == 0) continue;
                    int sign = -total_incidence(sup, sub);
                    Matrix incl = Matrix::identity(e.ring, block_rank);
                    if (sign == -1) incl = mat_neg(e.ring, incl);
                    mat_paste(e.ring, m, incl, dst_off->second.at(sup), src_off->second.at(sub));
                }
                if (!m.is_zero()) e.set_d(p, k, std::move(m));
            }
        }
    }
    if (auto bad = check_multicomplex(e)) throw InternalError(*bad);
    return e;
}

TrTotResult tr_tot(const MultiComplex& e, const TruncationWindow& w) {
    TrTotResult out;
    std::map<int, int> ranks;
    std::map<int, std::map<Position, int>> full_offsets;
    for (const auto& [p, rk] : e.modules) {
        Position a(p.begin(), p.end() - 1);
        if (!w.contains(a)) continue;
        int k = coord_sum(p);
        full_offsets[k][p] = 0;
        ranks[k] += rk;
    }
    for (auto& [k, off] : full_offsets) {
        int acc = 0;
        for (auto& [p, o] : off) {
            o = acc;
            acc += e.rank(p);
        }
    }
    GradedMap diff;
    diff.degree = 1;
    for (const auto& [k, off] : full_offsets) {
        auto next = full_offsets.find(k + 1);
        Matrix m = Matrix::zero(next == full_offsets.end() ? 0 : ranks.at(k + 1), ranks.at(k));
        for (const auto& [p, o] : off) {
            for (int i = 0; i < e.dirs; ++i) {
                auto dit = e.diff.find({p, i});
                if (dit == e.diff.end()) continue;
                Position q = shifted(p, i);
                if (i < e.dirs - 1) {
                    Position qa(q.begin(), q.end() - 1);
                    if (!w.contains(qa)) {
                        out.leakage.emplace_back(p, i);
                        continue;
                    }
                }
                if (next == full_offsets.end() || !next->second.count(q)) {
                    if (e.rank(q) > 0) out.leakage.emplace_back(p, i);
                    continue;
                }
                mat_paste(e.ring, m, dit->second, next->second.at(q), o);
            }
        }
        if (!m.is_zero()) diff.blocks[k] = std::move(m);
    }
    std::map<int, int> pruned;
    for (const auto& [k, rk] : ranks)
        if (rk > 0) pruned[k] = rk;
    out.complex = FreeComplex::make_unchecked(e.ring, std::move(pruned), std::move(diff));
    for (auto& [k, off] : full_offsets) {
        auto& keyed = out.offsets[k];
        for (auto& [p, o] : off) keyed[Position(p.begin(), p.end() - 1)] = o;
    }
    return out;
}

TrCochain apply_diff(const MultiComplex& e, const TrCochain& c) {
    int n = e.dirs - 1;
    TrCochain out;
    out.degree = c.degree + 1;
    const Ring& r = e.ring;
    auto component = [&](const Position& a) -> const std::vector<Scalar>* {
        auto it = c.comps.find(a);
        return it == c.comps.end() ? nullptr : &it->second;
    };
    for (const auto& [p, rk] : e.modules) {
        if (coord_sum(p) != out.degree) continue;
        Position a(p.begin(), p.end() - 1);
        std::vector<Scalar> acc(static_cast<size_t>(rk), Scalar(0));
        bool touched = false;
        Position below = p;
        --below[static_cast<size_t>(n)];
        if (const auto* v = component(a); v && e.rank(below) > 0) {
            if (static_cast<int>(v->size()) != e.rank(below))
                throw StructuralError("cochain component length mismatch");
            auto img = mat_apply(r, e.d(below, n), *v);
            for (size_t i = 0; i < acc.size(); ++i) acc[i] = add(r, acc[i], img[i]);
            touched = true;
        }
        for (int j = 0; j < n; ++j) {
            Position src = p;
            --src[static_cast<size_t>(j)];
            Position src_a(src.begin(), src.end() - 1);
            if (const auto* v = component(src_a); v && e.rank(src) > 0) {
                auto img = mat_apply(r, e.d(src, j), *v);
                for (size_t i = 0; i < acc.size(); ++i) acc[i] = add(r, acc[i], img[i]);
                touched = true;
            }
        }
        if (touched && !vec_is_zero(acc)) out.comps[a] = std::move(acc);
    }
    return out;
}

bool cochain_is_zero(const TrCochain& c) {
    for (const auto& [a, v] : c.comps)
        if (!vec_is_zero(v)) return false;
    return true;
}

TrCochain contract_cocycle(const MultiComplex& e, const TrCochain& c) {
    const Ring& r = e.ring;
    if (r.variables != 0 || !r.is_pid())
        throw UnsupportedError("contract_cocycle needs a PID base ring");
    int n = e.dirs - 1;
    int m = c.degree;

    bool has_support = false;
    int k0 = 0;
    for (const auto& [a, v] : c.comps) {
        if (vec_is_zero(v)) continue;
        int hook = a.empty() ? 0 : *std::min_element(a.begin(), a.end());
        k0 = has_support ? std::min(k0, hook) : hook;
        has_support = true;
    }
    TrCochain b;
    b.degree = m - 1;
    if (!has_support) return b;

    if (!cochain_is_zero(apply_diff(e, c)))
        throw ContractViolation("contract_cocycle: input is not a cocycle on the window");

    // per-position exactness in the degree direction, decided by SNF
    std::map<Position, bool> columns;
    for (const auto& [p, rk] : e.modules) {
        (void)rk;
        columns[Position(p.begin(), p.end() - 1)] = true;
    }
    for (const auto& [a, flag] : columns) {
        (void)flag;
        std::map<int, int> ranks;
        for (const auto& [p, rk] : e.modules) {
            if (!std::equal(a.begin(), a.end(), p.begin())) continue;
            ranks[p.back()] = rk;
        }
        GradedMap diff;
        diff.degree = 1;
        for (const auto& [q, rk] : ranks) {
            (void)rk;
            Position p = a;
            p.push_back(q);
            Matrix dm = e.d(p, n);
            if (!dm.is_zero()) diff.blocks[q] = std::move(dm);
        }
        FreeComplex column = FreeComplex::make_unchecked(r, std::move(ranks), std::move(diff));
        if (!homalg::is_acyclic(column)) {
            std::string pos;
            for (int v : a) pos += std::to_string(v) + ",";
            throw DomainError("column at (" + pos + ") is not exact in the degree direction");
        }
    }

    auto get_b = [&](const Position& a) -> std::vector<Scalar> {
        auto it = b.comps.find(a);
        if (it != b.comps.end()) return it->second;
        Position p = a;
        p.push_back(m - 1 - coord_sum(a));
        return std::vector<Scalar>(static_cast<size_t>(e.rank(p)), Scalar(0));
    };

    std::vector<Position> order;
    for (const auto& [a, flag] : columns) {
        (void)flag;
        int hook = a.empty() ? 0 : *std::min_element(a.begin(), a.end());
        if (hook >= k0) order.push_back(a);
    }
    std::stable_sort(order.begin(), order.end(), [](const Position& x, const Position& y) {
        return coord_sum(x) < coord_sum(y);
    });

    for (const Position& a : order) {
        Position p_target = a;
        p_target.push_back(m - coord_sum(a));
        int target_rank = e.rank(p_target);
        Position p_source = a;
        p_source.push_back(m - 1 - coord_sum(a));
        int source_rank = e.rank(p_source);

        std::vector<Scalar> rhs(static_cast<size_t>(target_rank), Scalar(0));
        if (auto it = c.comps.find(a); it != c.comps.end() && target_rank > 0) rhs = it->second;
        for (int j = 0; j < n && target_rank > 0; ++j) {
            Position src_a = a;
            --src_a[static_cast<size_t>(j)];
            Position src = src_a;
            src.push_back(m - 1 - coord_sum(src_a));
            if (e.rank(src) == 0) continue;
            rhs = vec_sub(r, std::move(rhs), mat_apply(r, e.d(src, j), get_b(src_a)));
        }
        if (vec_is_zero(rhs)) continue;
        if (source_rank == 0) throw InternalError("no room to contract at a rank-0 position");
        auto sol = homalg::solve_linear(r, e.d(p_source, n), rhs);
        if (!sol)
            throw InternalError("interior contraction system unsolvable despite exactness");
        b.comps[a] = std::move(*sol);
    }

    // d(b) = c on every stored position
    TrCochain db = apply_diff(e, b);
    for (const auto& [p, rk] : e.modules) {
        if (coord_sum(p) != m) continue;
        Position a(p.begin(), p.end() - 1);
        std::vector<Scalar> lhs(static_cast<size_t>(rk), Scalar(0));
        if (auto it = db.comps.find(a); it != db.comps.end()) lhs = it->second;
        std::vector<Scalar> want(static_cast<size_t>(rk), Scalar(0));
        if (auto it = c.comps.find(a); it != c.comps.end()) want = it->second;
        if (!vec_is_zero(vec_sub(r, lhs, want)))
            throw InternalError("contraction verification failed");
    }
    return b;
}

} // namespace homcube::mc
