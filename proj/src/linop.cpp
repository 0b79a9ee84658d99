#include "homcube/linop.hpp"

#include <algorithm>

namespace homcube::findom {

using rings::add;
using rings::inv;
using rings::is_unit;
using rings::lp_add;
using rings::lp_mul;
using rings::lp_neg;
using rings::lp_scale;
using rings::lp_zero;
using rings::mul;

LaurentPoly partial_eval(const Ring& r, const LaurentPoly& p, int k, const Scalar& c) {
    Ring base = r.base();
    if (!is_unit(base, c)) throw DomainError("evaluation point coordinate is not a unit");
    Scalar cinv = inv(base, c);
    LaurentPoly out = lp_zero(p.vars);
    for (const auto& [e, v] : p.terms) {
        Scalar factor(1);
        std::int64_t a = e[static_cast<size_t>(k)];
        const Scalar& b = a >= 0 ? c : cinv;
        for (std::int64_t i = 0; i < (a >= 0 ? a : -a); ++i) factor = mul(base, factor, b);
        rings::Exponent e2 = e;
        e2[static_cast<size_t>(k)] = 0;
        out = lp_add(r, out, rings::lp_monomial(r, e2, mul(base, v, factor)));
    }
    return out;
}

LaurentPoly divided_difference(const Ring& r, const LaurentPoly& p, int k, const Scalar& c) {
    // x^a -> (x^a - c^a) / (x - c) in the k-th variable, term by term
    Ring base = r.base();
    if (!is_unit(base, c)) throw DomainError("difference center coordinate is not a unit");
    Scalar cinv = inv(base, c);
    LaurentPoly out = lp_zero(p.vars);
    for (const auto& [e, v] : p.terms) {
        std::int64_t a = e[static_cast<size_t>(k)];
        if (a == 0) continue;
        if (a > 0) {
            Scalar factor(1); // c^{a-1-j} starting at j = a-1
            for (std::int64_t j = a - 1; j >= 0; --j) {
                rings::Exponent e2 = e;
                e2[static_cast<size_t>(k)] = j;
                out = lp_add(r, out, rings::lp_monomial(r, e2, mul(base, v, factor)));
                factor = mul(base, factor, c);
            }
        } else {
            Scalar factor = cinv; // c^{a-1-j} at j = a
            for (std::int64_t j = a; j <= -1; ++j) {
                rings::Exponent e2 = e;
                e2[static_cast<size_t>(k)] = j;
                out = lp_add(r, out,
                             rings::lp_monomial(r, e2, rings::neg(base, mul(base, v, factor))));
                factor = mul(base, factor, cinv);
            }
        }
    }
    return out;
}

namespace {

LaurentPoly apply_term(const Ring& r, const std::vector<Scalar>& center, const LinOpTerm& t,
                       const LaurentPoly& p) {
    LaurentPoly cur = p;
    for (size_t k = 0; k < t.tail.size(); ++k) {
        auto [e, m] = t.tail[k];
        for (int i = 0; i < m; ++i)
            cur = divided_difference(r, cur, static_cast<int>(k), center[k]);
        if (e) cur = partial_eval(r, cur, static_cast<int>(k), center[k]);
        if (cur.is_zero()) return cur;
    }
    return lp_mul(r, t.coeff, cur);
}

} // namespace

LaurentPoly LinOp::apply(const LaurentPoly& p) const {
    LaurentPoly out = lp_zero(ring.variables);
    for (const auto& t : terms) out = lp_add(ring, out, apply_term(ring, center, t, p));
    return out;
}

bool LinOp::is_zero() const { return op_is_zero(*this); }

LinOp op_zero(const Ring& r, std::vector<Scalar> center) {
    return LinOp{r, std::move(center), {}};
}

LinOp op_identity(const Ring& r, std::vector<Scalar> center) {
    return op_mult(r, std::move(center), rings::lp_one(r));
}

LinOp op_mult(const Ring& r, std::vector<Scalar> center, LaurentPoly q) {
    LinOp out{r, std::move(center), {}};
    if (!q.is_zero())
        out.terms.push_back({std::move(q), std::vector<std::pair<int, int>>(
                                               static_cast<size_t>(r.variables), {0, 0})});
    return out;
}

LinOp op_eval(const Ring& r, std::vector<Scalar> center, int k) {
    LinOp out = op_identity(r, std::move(center));
    out.terms[0].tail[static_cast<size_t>(k)] = {1, 0};
    return out;
}

LinOp op_delta(const Ring& r, std::vector<Scalar> center, int k) {
    LinOp out = op_identity(r, std::move(center));
    out.terms[0].tail[static_cast<size_t>(k)] = {0, 1};
    return out;
}

void op_normalize(LinOp& a) {
    const Ring& r = a.ring;
    // split terms with eval = 0, delta >= 1 whose coefficient vanishes at the
    // center, using (x_k - c_k) D_k = id - E_k
    std::vector<LinOpTerm> pending = std::move(a.terms);
    std::vector<LinOpTerm> reduced;
    int guard = 0;
    while (!pending.empty()) {
        if (++guard > 200000) throw InternalError("operator reduction failed to terminate");
        LinOpTerm t = std::move(pending.back());
        pending.pop_back();
        if (t.coeff.is_zero()) continue;
        bool split = false;
        for (size_t k = 0; k < t.tail.size(); ++k) {
            auto [e, m] = t.tail[k];
            if (e == 0 && m >= 1 &&
                partial_eval(r, t.coeff, static_cast<int>(k), a.center[k]).is_zero()) {
                LaurentPoly quotient =
                    divided_difference(r, t.coeff, static_cast<int>(k), a.center[k]);
                LinOpTerm plain{quotient, t.tail};
                plain.tail[k] = {0, m - 1};
                LinOpTerm evaled{lp_neg(r, quotient), t.tail};
                evaled.tail[k] = {1, m - 1};
                pending.push_back(std::move(plain));
                pending.push_back(std::move(evaled));
                split = true;
                break;
            }
        }
        if (!split) reduced.push_back(std::move(t));
    }
    std::sort(reduced.begin(), reduced.end(),
              [](const LinOpTerm& x, const LinOpTerm& y) { return x.tail < y.tail; });
    std::vector<LinOpTerm> merged;
    for (auto& t : reduced) {
        if (!merged.empty() && merged.back().tail == t.tail)
            merged.back().coeff = lp_add(r, merged.back().coeff, t.coeff);
        else
            merged.push_back(std::move(t));
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const LinOpTerm& t) { return t.coeff.is_zero(); }),
                 merged.end());
    a.terms = std::move(merged);
}

bool op_is_zero(const LinOp& a) {
    LinOp copy = a;
    op_normalize(copy);
    if (copy.terms.empty()) return true;
    // residual grid check: matrix coefficients of reduced terms are
    // piecewise polynomial in the exponent with breaks inside the spread
    int spread = 1;
    for (const auto& t : copy.terms) {
        for (const auto& [e, v] : t.coeff.terms) {
            (void)v;
            for (auto x : e) spread = std::max<int>(spread, static_cast<int>(std::abs(x)));
        }
        for (auto [e, m] : t.tail) spread = std::max(spread, m + 1);
    }
    int w = spread + 4;
    if (copy.ring.variables == 0) {
        LaurentPoly one = rings::lp_one(copy.ring);
        return copy.apply(one).is_zero();
    }
    rings::Exponent probe(static_cast<size_t>(copy.ring.variables), -w);
    for (;;) {
        LaurentPoly mono = rings::lp_monomial(copy.ring, probe, Scalar(1));
        if (!copy.apply(mono).is_zero()) return false;
        int k = 0;
        while (k < copy.ring.variables && probe[static_cast<size_t>(k)] == w) {
            probe[static_cast<size_t>(k)] = -w;
            ++k;
        }
        if (k == copy.ring.variables) break;
        ++probe[static_cast<size_t>(k)];
    }
    return true;
}

LinOp op_add(const LinOp& a, const LinOp& b) {
    if (!(a.ring == b.ring) || a.center != b.center)
        throw StructuralError("operator context mismatch");
    LinOp out = a;
    out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
    op_normalize(out);
    return out;
}

LinOp op_neg(const LinOp& a) {
    LinOp out = a;
    for (auto& t : out.terms) t.coeff = lp_neg(a.ring, t.coeff);
    return out;
}

LinOp op_sub(const LinOp& a, const LinOp& b) { return op_add(a, op_neg(b)); }

LinOp op_scale(const Scalar& c, const LinOp& a) {
    LinOp out = a;
    for (auto& t : out.terms) t.coeff = lp_scale(a.ring, c, t.coeff);
    op_normalize(out);
    return out;
}

namespace {

// expansion of tail o (q .): list of (coefficient, tail)
void push_through(const Ring& r, const std::vector<Scalar>& center,
                  const std::vector<std::pair<int, int>>& tail, const LaurentPoly& q,
                  std::vector<std::pair<LaurentPoly, std::vector<std::pair<int, int>>>>& out) {
    std::vector<std::pair<LaurentPoly, std::vector<std::pair<int, int>>>> acc{
        {q, std::vector<std::pair<int, int>>(tail.size(), {0, 0})}};
    for (size_t k = 0; k < tail.size(); ++k) {
        auto [e, m] = tail[k];
        std::vector<std::pair<LaurentPoly, std::vector<std::pair<int, int>>>> next;
        for (auto& [coeff, new_tail] : acc) {
            // D^m o (q .) = (q .) D^m + sum_{j>=1} ((D^j q) .) E D^{m-j}
            std::vector<LaurentPoly> diffs{coeff};
            for (int j = 1; j <= m; ++j)
                diffs.push_back(
                    divided_difference(r, diffs.back(), static_cast<int>(k), center[k]));
            for (int j = 0; j <= m; ++j) {
                LaurentPoly c2 = diffs[static_cast<size_t>(j)];
                int eval_flag = (j > 0) ? 1 : 0;
                int delta_left = m - j;
                if (e) {
                    c2 = partial_eval(r, c2, static_cast<int>(k), center[k]);
                    eval_flag = 1;
                }
                if (c2.is_zero()) continue;
                auto t2 = new_tail;
                t2[k] = {eval_flag, delta_left};
                next.emplace_back(std::move(c2), std::move(t2));
            }
        }
        acc = std::move(next);
    }
    for (auto& p : acc) out.push_back(std::move(p));
}

// per-variable tail composition; false when the composite vanishes (D o E = 0)
bool compose_tails(const std::vector<std::pair<int, int>>& outer,
                   const std::vector<std::pair<int, int>>& inner,
                   std::vector<std::pair<int, int>>& out) {
    out.resize(outer.size());
    for (size_t k = 0; k < out.size(); ++k) {
        auto [e1, m1] = outer[k];
        auto [e2, m2] = inner[k];
        if (m1 >= 1 && e2 == 1) return false;
        if (m1 >= 1) out[k] = {e1, m1 + m2};
        else out[k] = {e1 | e2, m2};
    }
    return true;
}

} // namespace

LinOp op_compose(const LinOp& second, const LinOp& first) {
    if (!(second.ring == first.ring) || second.center != first.center)
        throw StructuralError("operator context mismatch");
    const Ring& r = second.ring;
    LinOp out = op_zero(r, second.center);
    for (const auto& ts : second.terms) {
        for (const auto& tf : first.terms) {
            std::vector<std::pair<LaurentPoly, std::vector<std::pair<int, int>>>> pushed;
            push_through(r, second.center, ts.tail, tf.coeff, pushed);
            for (auto& [coeff, mid_tail] : pushed) {
                std::vector<std::pair<int, int>> tail;
                if (!compose_tails(mid_tail, tf.tail, tail)) continue;
                LinOpTerm t;
                t.coeff = lp_mul(r, ts.coeff, coeff);
                t.tail = std::move(tail);
                if (!t.coeff.is_zero()) out.terms.push_back(std::move(t));
            }
        }
    }
    op_normalize(out);
    return out;
}

// ---------------------------------------------------------------------------

OpMap opmap_zero(const Ring& r, std::vector<Scalar> center, int degree) {
    OpMap out;
    out.degree = degree;
    out.ring = r;
    out.center = std::move(center);
    return out;
}

OpMap opmap_identity(const FreeComplex& c, std::vector<Scalar> center) {
    OpMap out = opmap_zero(c.ring, std::move(center), 0);
    for (const auto& [deg, rk] : c.ranks) {
        std::vector<std::vector<LinOp>> m(
            static_cast<size_t>(rk),
            std::vector<LinOp>(static_cast<size_t>(rk), op_zero(out.ring, out.center)));
        for (int i = 0; i < rk; ++i)
            m[static_cast<size_t>(i)][static_cast<size_t>(i)] = op_identity(out.ring, out.center);
        out.blocks[deg] = std::move(m);
    }
    return out;
}

OpMap opmap_from_graded(const Ring& r, std::vector<Scalar> center, const homalg::GradedMap& g,
                        const FreeComplex& source, const FreeComplex& target) {
    OpMap out = opmap_zero(r, std::move(center), g.degree);
    for (const auto& [l, m] : g.blocks) {
        int rows = target.rank(l + g.degree), cols = source.rank(l);
        std::vector<std::vector<LinOp>> block(
            static_cast<size_t>(rows),
            std::vector<LinOp>(static_cast<size_t>(cols), op_zero(r, out.center)));
        for (const auto& [ij, p] : m.entries) {
            LaurentPoly q = p;
            if (p.vars != r.variables) {
                q = rings::lp_zero(r.variables);
                for (const auto& [e, c] : p.terms) {
                    rings::Exponent e2(static_cast<size_t>(r.variables), 0);
                    for (size_t i = 0; i < e.size(); ++i) e2[i] = e[i];
                    q.terms.emplace(std::move(e2), c);
                }
            }
            block[static_cast<size_t>(ij.first)][static_cast<size_t>(ij.second)] =
                op_mult(r, out.center, std::move(q));
        }
        out.blocks[l] = std::move(block);
    }
    return out;
}

OpMap opmap_compose(const OpMap& second, const OpMap& first, const FreeComplex& source,
                    const FreeComplex& middle, const FreeComplex& target) {
    OpMap out = opmap_zero(second.ring, second.center, first.degree + second.degree);
    for (const auto& [l, fblock] : first.blocks) {
        const auto* sblock = second.block(l + first.degree);
        if (!sblock) continue;
        int rows = target.rank(l + out.degree);
        int mid = middle.rank(l + first.degree);
        int cols = source.rank(l);
        if (rows == 0 || cols == 0 || mid == 0) continue;
        std::vector<std::vector<LinOp>> block(
            static_cast<size_t>(rows),
            std::vector<LinOp>(static_cast<size_t>(cols), op_zero(out.ring, out.center)));
        bool nonzero = false;
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                LinOp acc = op_zero(out.ring, out.center);
                for (int k = 0; k < mid; ++k) {
                    const LinOp& a = (*sblock)[static_cast<size_t>(i)][static_cast<size_t>(k)];
                    const LinOp& b = fblock[static_cast<size_t>(k)][static_cast<size_t>(j)];
                    if (a.terms.empty() || b.terms.empty()) continue;
                    acc = op_add(acc, op_compose(a, b));
                }
                if (!acc.terms.empty()) nonzero = true;
                block[static_cast<size_t>(i)][static_cast<size_t>(j)] = std::move(acc);
            }
        if (nonzero) out.blocks[l] = std::move(block);
    }
    return out;
}

OpMap opmap_add(const OpMap& a, const OpMap& b) {
    if (a.degree != b.degree) throw StructuralError("operator map degree mismatch");
    OpMap out = a;
    for (const auto& [l, block] : b.blocks) {
        auto it = out.blocks.find(l);
        if (it == out.blocks.end()) {
            out.blocks[l] = block;
            continue;
        }
        for (size_t i = 0; i < block.size(); ++i)
            for (size_t j = 0; j < block[i].size(); ++j)
                it->second[i][j] = op_add(it->second[i][j], block[i][j]);
    }
    return out;
}

OpMap opmap_sub(const OpMap& a, const OpMap& b) {
    OpMap negb = b;
    for (auto& [l, block] : negb.blocks)
        for (auto& row : block)
            for (auto& op : row) op = op_neg(op);
    return opmap_add(a, negb);
}

bool opmap_is_zero(const OpMap& a) {
    for (const auto& [l, block] : a.blocks)
        for (const auto& row : block)
            for (const auto& op : row)
                if (!op_is_zero(op)) return false;
    return true;
}

} // namespace homcube::findom
