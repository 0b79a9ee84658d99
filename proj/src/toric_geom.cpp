#include "homcube/toric_geom.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace homcube::toric {

using rings::LaurentPoly;
using rings::Matrix;
using rings::Rat;
using rings::Ring;
using rings::Scalar;

namespace {

Matrix int_matrix(const std::vector<std::vector<Int>>& rows, int cols) {
    Ring z = Ring::integers();
    Matrix m = Matrix::zero(static_cast<int>(rows.size()), cols);
    for (size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < cols; ++j)
            if (rows[i][static_cast<size_t>(j)] != 0)
                m.set(z, static_cast<int>(i), j,
                      rings::lp_constant(z, Scalar(rows[i][static_cast<size_t>(j)])));
    return m;
}

std::vector<Int> cross3(const std::vector<Int>& a, const std::vector<Int>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

bool is_zero_vec(const std::vector<Int>& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

// generators of the dual of a POINTED H-cone {x : <w_i, x> >= 0} whose
// normals have full rank; n <= 3
std::vector<std::vector<Int>> pointed_h_to_v(const std::vector<std::vector<Int>>& normals, int n) {
    std::vector<std::vector<Int>> candidates;
    if (n == 1) {
        candidates.push_back({Int(1)});
        candidates.push_back({Int(-1)});
    } else if (n == 2) {
        for (const auto& w : normals) {
            candidates.push_back({-w[1], w[0]});
            candidates.push_back({w[1], -w[0]});
        }
    } else if (n == 3) {
        for (size_t i = 0; i < normals.size(); ++i)
            for (size_t j = i + 1; j < normals.size(); ++j) {
                std::vector<Int> c = cross3(normals[i], normals[j]);
                if (is_zero_vec(c)) continue;
                candidates.push_back(c);
                std::vector<Int> neg = c;
                for (auto& x : neg) x = -x;
                candidates.push_back(std::move(neg));
            }
    } else {
        throw UnsupportedError("dual cone generators only implemented for n <= 3");
    }
    std::set<std::vector<Int>> kept;
    for (auto& c : candidates) {
        bool ok = true;
        for (const auto& w : normals)
            if (dot(c, w) < 0) { ok = false; break; }
        if (ok && !is_zero_vec(c)) kept.insert(primitive(std::move(c)));
    }
    return {kept.begin(), kept.end()};
}

} // namespace

Int dot(const std::vector<Int>& a, const std::vector<Int>& b) {
    if (a.size() != b.size()) throw StructuralError("dot product length mismatch");
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::vector<Int> primitive(std::vector<Int> v) {
    Int g = 0;
    for (const auto& x : v) g = gcd(g, abs(x));
    if (g > 1)
        for (auto& x : v) x /= g;
    return v;
}

Cone Cone::make(int n, std::vector<std::vector<Int>> gens) {
    Cone c;
    c.n = n;
    std::set<std::vector<Int>> kept;
    for (auto& g : gens) {
        if (static_cast<int>(g.size()) != n) throw StructuralError("generator length mismatch");
        if (is_zero_vec(g)) continue;
        kept.insert(primitive(std::move(g)));
    }
    c.gens = {kept.begin(), kept.end()};
    return c;
}

std::vector<std::vector<Int>> integer_kernel(const std::vector<std::vector<Int>>& rows, int cols) {
    if (rows.empty()) {
        std::vector<std::vector<Int>> basis;
        for (int i = 0; i < cols; ++i) {
            std::vector<Int> e(static_cast<size_t>(cols), 0);
            e[static_cast<size_t>(i)] = 1;
            basis.push_back(std::move(e));
        }
        return basis;
    }
    Ring z = Ring::integers();
    auto ker = homalg::kernel_basis(z, int_matrix(rows, cols));
    std::vector<std::vector<Int>> out;
    for (const auto& v : ker) {
        std::vector<Int> w;
        for (const auto& s : v) w.push_back(numerator(s));
        out.push_back(std::move(w));
    }
    return out;
}

CospanResult cospan(const Cone& sigma) {
    // a generator's negative lies in the cone iff it belongs to the
    // lineality space; the reversible generators span it
    CospanResult out;
    std::vector<std::vector<Int>> reversible;
    for (const auto& g : sigma.gens) {
        std::vector<Int> neg = g;
        for (auto& x : neg) x = -x;
        if (cone_contains(sigma, neg)) reversible.push_back(g);
    }
    if (reversible.empty()) return out;
    // saturated basis of the span: kernel of the kernel
    auto perp = integer_kernel(reversible, sigma.n);
    out.basis = integer_kernel(perp, sigma.n);
    out.dim = static_cast<int>(out.basis.size());
    return out;
}

bool is_pointed(const Cone& sigma) { return cospan(sigma).dim == 0; }

int cone_dim(const Cone& sigma) {
    if (sigma.gens.empty()) return 0;
    Ring q = Ring::rationals();
    return homalg::mat_rank(q, int_matrix(sigma.gens, sigma.n));
}

Cone dual_cone(const Cone& sigma) {
    int n = sigma.n;
    if (n > 3) throw UnsupportedError("dual_cone limited to n <= 3");
    // lineality of the dual = vectors orthogonal to all generators
    auto lin = integer_kernel(sigma.gens, n);
    int l = static_cast<int>(lin.size());
    std::vector<std::vector<Int>> gens;
    for (const auto& v : lin) {
        gens.push_back(v);
        std::vector<Int> neg = v;
        for (auto& x : neg) x = -x;
        gens.push_back(std::move(neg));
    }
    if (l < n) {
        // split off the lineality and dualize the pointed quotient part
        auto u = complete_basis(lin, n);
        // constraints in the new coordinates only involve the last n-l ones
        std::vector<std::vector<Int>> reduced;
        for (const auto& v : sigma.gens) {
            std::vector<Int> w;
            for (int j = l; j < n; ++j) {
                Int s = 0;
                for (int i = 0; i < n; ++i) s += u[static_cast<size_t>(i)][static_cast<size_t>(j)] * v[static_cast<size_t>(i)];
                w.push_back(s);
            }
            reduced.push_back(std::move(w));
        }
        auto rays = pointed_h_to_v(reduced, n - l);
        for (const auto& ray : rays) {
            std::vector<Int> full(static_cast<size_t>(n), 0);
            for (int i = 0; i < n; ++i)
                for (int j = l; j < n; ++j)
                    full[static_cast<size_t>(i)] +=
                        u[static_cast<size_t>(i)][static_cast<size_t>(j)] * ray[static_cast<size_t>(j - l)];
            gens.push_back(std::move(full));
        }
    }
    return Cone::make(n, std::move(gens));
}

bool cone_contains(const Cone& sigma, const std::vector<Int>& x) {
    Cone dual = dual_cone(sigma);
    for (const auto& w : dual.gens)
        if (dot(w, x) < 0) return false;
    return true;
}

bool cone_equal(const Cone& a, const Cone& b) {
    if (a.n != b.n) return false;
    for (const auto& g : a.gens)
        if (!cone_contains(b, g)) return false;
    for (const auto& g : b.gens)
        if (!cone_contains(a, g)) return false;
    return true;
}

namespace {

// intersection of two cones via joint inequality description
Cone cone_intersection(const Cone& a, const Cone& b) {
    Cone da = dual_cone(a), db = dual_cone(b);
    std::vector<std::vector<Int>> normals = da.gens;
    normals.insert(normals.end(), db.gens.begin(), db.gens.end());
    return dual_cone(Cone::make(a.n, std::move(normals)));
}

// face of sigma spanned by the constraints vanishing on all of f
bool is_face_of(const Cone& f, const Cone& sigma) {
    for (const auto& g : f.gens)
        if (!cone_contains(sigma, g)) return false;
    Cone dual = dual_cone(sigma);
    std::vector<std::vector<Int>> normals = dual.gens;
    for (const auto& w : dual.gens) {
        bool vanishes = true;
        for (const auto& g : f.gens)
            if (dot(w, g) != 0) { vanishes = false; break; }
        if (vanishes) {
            std::vector<Int> neg = w;
            for (auto& x : neg) x = -x;
            normals.push_back(std::move(neg));
        }
    }
    Cone smallest_face = dual_cone(Cone::make(sigma.n, std::move(normals)));
    return cone_equal(f, smallest_face);
}

// strict angular order on primitive vectors in the plane
bool angle_less(const std::vector<Int>& a, const std::vector<Int>& b) {
    auto half = [](const std::vector<Int>& v) {
        return (v[1] < 0 || (v[1] == 0 && v[0] < 0)) ? 1 : 0;
    };
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    Int cr = a[0] * b[1] - a[1] * b[0];
    return cr > 0;
}

} // namespace

FanCheck is_complete_fan(const Fan& fan) {
    FanCheck out;
    int n = fan.n;
    if (n < 1 || n > 3) {
        out.diagnostic = "fan rank must be 1, 2 or 3";
        return out;
    }
    for (const auto& c : fan.cones) {
        if (c.n != n) {
            out.diagnostic = "cone with mismatched ambient rank";
            return out;
        }
        if (!is_pointed(c)) {
            out.diagnostic = "fan contains a non-pointed cone";
            return out;
        }
    }
    // pairwise intersections are faces of both and members of the fan
    for (size_t i = 0; i < fan.cones.size(); ++i) {
        for (size_t j = i + 1; j < fan.cones.size(); ++j) {
            Cone meet = cone_intersection(fan.cones[i], fan.cones[j]);
            if (!is_face_of(meet, fan.cones[i]) || !is_face_of(meet, fan.cones[j])) {
                out.diagnostic = "intersection of cones " + std::to_string(i) + "," +
                                 std::to_string(j) + " is not a common face";
                return out;
            }
            bool member = false;
            for (const auto& c : fan.cones)
                if (cone_equal(c, meet)) { member = true; break; }
            if (!member) {
                out.diagnostic = "intersection of cones " + std::to_string(i) + "," +
                                 std::to_string(j) + " is missing from the fan";
                return out;
            }
        }
    }

    if (n == 1) {
        bool plus = false, minus = false;
        for (const auto& c : fan.cones)
            for (const auto& g : c.gens) (g[0] > 0 ? plus : minus) = true;
        if (!plus || !minus) {
            out.diagnostic = "rays do not cover the line";
            return out;
        }
    } else if (n == 2) {
        std::set<std::vector<Int>> ray_set;
        for (const auto& c : fan.cones)
            for (const auto& g : c.gens) ray_set.insert(g);
        std::vector<std::vector<Int>> rays(ray_set.begin(), ray_set.end());
        if (rays.size() < 2) {
            out.diagnostic = "not enough rays to cover the plane";
            return out;
        }
        std::sort(rays.begin(), rays.end(), angle_less);
        for (size_t i = 0; i < rays.size(); ++i) {
            const auto& r1 = rays[i];
            const auto& r2 = rays[(i + 1) % rays.size()];
            // the sector from r1 counterclockwise to r2 has angle < pi
            // exactly when the cross product is positive
            Int cr = r1[0] * r2[1] - r1[1] * r2[0];
            if (cr <= 0) {
                out.diagnostic = "angular gap of pi or more after ray (" + r1[0].str() + "," +
                                 r1[1].str() + ")";
                return out;
            }
            bool covered = false;
            for (const auto& c : fan.cones)
                if (cone_contains(c, r1) && cone_contains(c, r2)) {
                    covered = true;
                    break;
                }
            if (!covered) {
                out.diagnostic = "sector after ray (" + r1[0].str() + "," + r1[1].str() +
                                 ") is not covered by any cone";
                return out;
            }
        }
    } else {
        // n = 3: every facet of every full-dimensional cone must be shared
        // with a full-dimensional cone on the other side
        bool any_full = false;
        for (const auto& c : fan.cones) {
            if (cone_dim(c) != 3) continue;
            any_full = true;
            Cone dual = dual_cone(c);
            for (const auto& w : dual.gens) {
                // facet cut out by w
                std::vector<std::vector<Int>> normals = dual.gens;
                std::vector<Int> neg = w;
                for (auto& x : neg) x = -x;
                normals.push_back(neg);
                Cone facet = dual_cone(Cone::make(3, std::move(normals)));
                bool paired = false;
                for (const auto& other : fan.cones) {
                    if (cone_dim(other) != 3 || cone_equal(other, c)) continue;
                    bool contains_facet = true;
                    for (const auto& g : facet.gens)
                        if (!cone_contains(other, g)) { contains_facet = false; break; }
                    if (!contains_facet) continue;
                    bool other_side = false;
                    for (const auto& g : other.gens)
                        if (dot(w, g) < 0) { other_side = true; break; }
                    if (other_side) { paired = true; break; }
                }
                if (!paired) {
                    out.diagnostic = "an exposed facet found (normal " + w[0].str() + "," +
                                     w[1].str() + "," + w[2].str() + ")";
                    return out;
                }
            }
        }
        if (!any_full) {
            out.diagnostic = "no full-dimensional cone present";
            return out;
        }
    }
    out.complete = true;
    return out;
}

std::vector<std::vector<Int>> complete_basis(const std::vector<std::vector<Int>>& cols, int n) {
    int k = static_cast<int>(cols.size());
    Ring z = Ring::integers();
    if (k == 0) {
        std::vector<std::vector<Int>> id(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n), 0));
        for (int i = 0; i < n; ++i) id[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
        return id;
    }
    Matrix a = Matrix::zero(n, k);
    for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i)
            if (cols[static_cast<size_t>(j)][static_cast<size_t>(i)] != 0)
                a.set(z, i, j, rings::lp_constant(z, Scalar(cols[static_cast<size_t>(j)][static_cast<size_t>(i)])));
    homalg::SnfResult snf = homalg::smith_normal_form(z, a);
    if (snf.rank != k) throw StructuralError("complete_basis: columns are not independent");
    for (const auto& s : snf.divisors)
        if (!(s == 1 || s == -1))
            throw StructuralError("complete_basis: sublattice is not saturated");
    // columns of U^{-1}; the first k of them span the image of the columns
    std::vector<std::vector<Int>> u(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (const LaurentPoly* p = snf.u.at(i, j)) u[static_cast<size_t>(i)][static_cast<size_t>(j)] = numerator(p->terms.begin()->second);
    return unimodular_inverse(u);
}

std::vector<std::vector<Int>> unimodular_inverse(const std::vector<std::vector<Int>>& m) {
    int n = static_cast<int>(m.size());
    std::vector<std::vector<Rat>> a(static_cast<size_t>(n), std::vector<Rat>(static_cast<size_t>(2 * n), Rat(0)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = Rat(m[static_cast<size_t>(i)][static_cast<size_t>(j)]);
        a[static_cast<size_t>(i)][static_cast<size_t>(n + i)] = 1;
    }
    for (int t = 0; t < n; ++t) {
        int pivot = -1;
        for (int i = t; i < n; ++i)
            if (!a[static_cast<size_t>(i)][static_cast<size_t>(t)].is_zero()) { pivot = i; break; }
        if (pivot < 0) throw StructuralError("matrix is singular");
        std::swap(a[static_cast<size_t>(t)], a[static_cast<size_t>(pivot)]);
        Rat inv = Rat(1) / a[static_cast<size_t>(t)][static_cast<size_t>(t)];
        for (auto& x : a[static_cast<size_t>(t)]) x *= inv;
        for (int i = 0; i < n; ++i) {
            if (i == t || a[static_cast<size_t>(i)][static_cast<size_t>(t)].is_zero()) continue;
            Rat f = a[static_cast<size_t>(i)][static_cast<size_t>(t)];
            for (int j = 0; j < 2 * n; ++j)
                a[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(t)][static_cast<size_t>(j)];
        }
    }
    std::vector<std::vector<Int>> out(static_cast<size_t>(n), std::vector<Int>(static_cast<size_t>(n), 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const Rat& v = a[static_cast<size_t>(i)][static_cast<size_t>(n + j)];
            if (denominator(v) != 1) throw StructuralError("matrix inverse is not integral");
            out[static_cast<size_t>(i)][static_cast<size_t>(j)] = numerator(v);
        }
    return out;
}

std::vector<std::vector<Int>> basis_inside_cone(const Cone& sigma) {
    int n = sigma.n;
    if (cone_dim(sigma) != n || !is_pointed(sigma))
        throw DomainError("basis_inside_cone needs a pointed full-dimensional cone");
    Cone dual = dual_cone(sigma);
    auto inside = [&](const std::vector<Int>& x) {
        for (const auto& w : dual.gens)
            if (dot(w, x) < 0) return false;
        return true;
    };
    Ring z = Ring::integers();
    for (int radius = 1; radius <= 16; ++radius) {
        std::vector<std::vector<Int>> pts;
        std::vector<Int> v(static_cast<size_t>(n), -radius);
        for (;;) {
            if (!is_zero_vec(v) && inside(v) && v == primitive(v)) pts.push_back(v);
            int k = 0;
            while (k < n && v[static_cast<size_t>(k)] == radius) {
                v[static_cast<size_t>(k)] = -radius;
                ++k;
            }
            if (k == n) break;
            ++v[static_cast<size_t>(k)];
        }
        std::sort(pts.begin(), pts.end(), [](const auto& x, const auto& y) {
            Int sx = 0, sy = 0;
            for (const auto& t : x) sx += abs(t);
            for (const auto& t : y) sy += abs(t);
            if (sx != sy) return sx < sy;
            return x < y;
        });
        // greedy search for a unimodular n-subset, smallest sums first
        std::vector<size_t> pick(static_cast<size_t>(n), 0);
        std::function<bool(size_t, size_t, std::vector<std::vector<Int>>&)> rec =
            [&](size_t start, size_t depth, std::vector<std::vector<Int>>& chosen) -> bool {
            if (depth == static_cast<size_t>(n)) {
                Matrix m = Matrix::zero(n, n);
                for (int j = 0; j < n; ++j)
                    for (int i = 0; i < n; ++i)
                        if (chosen[static_cast<size_t>(j)][static_cast<size_t>(i)] != 0)
                            m.set(z, i, j,
                                  rings::lp_constant(z, Scalar(chosen[static_cast<size_t>(j)][static_cast<size_t>(i)])));
                Scalar det = homalg::mat_det(z, m);
                return det == 1 || det == -1;
            }
            for (size_t i = start; i < pts.size(); ++i) {
                chosen.push_back(pts[i]);
                if (rec(i + 1, depth + 1, chosen)) return true;
                chosen.pop_back();
            }
            return false;
        };
        std::vector<std::vector<Int>> chosen;
        if (rec(0, 0, chosen)) return chosen;
    }
    throw InternalError("no lattice basis found inside the cone at search radius 16");
}

Fan standard_fan_1d() {
    Fan f;
    f.n = 1;
    f.cones.push_back(Cone::make(1, {}));
    f.cones.push_back(Cone::make(1, {{Int(1)}}));
    f.cones.push_back(Cone::make(1, {{Int(-1)}}));
    return f;
}

Fan standard_fan_2d() {
    Fan f;
    f.n = 2;
    f.cones.push_back(Cone::make(2, {}));
    std::vector<std::vector<Int>> rays{{Int(1), Int(0)}, {Int(0), Int(1)}, {Int(-1), Int(0)}, {Int(0), Int(-1)}};
    for (const auto& r : rays) f.cones.push_back(Cone::make(2, {r}));
    for (size_t i = 0; i < 4; ++i)
        f.cones.push_back(Cone::make(2, {rays[i], rays[(i + 1) % 4]}));
    return f;
}

} // namespace homcube::toric
