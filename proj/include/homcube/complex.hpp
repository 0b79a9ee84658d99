#ifndef HOMCUBE_COMPLEX_HPP
#define HOMCUBE_COMPLEX_HPP

#include <map>
#include <vector>

#include "homcube/matrix.hpp"
#include "homcube/snf.hpp"

namespace homcube::homalg {

using rings::LaurentPoly;
using rings::Matrix;
using rings::Ring;
using rings::Scalar;

// A homogeneous map between graded free modules: blocks[l] maps the source
// piece in degree l to the target piece in degree l + degree.
struct GradedMap {
    int degree = 0;
    std::map<int, Matrix> blocks; // absent block = zero

    const Matrix* block(int l) const {
        auto it = blocks.find(l);
        return it == blocks.end() ? nullptr : &it->second;
    }
    void set_block(int l, Matrix m) {
        if (m.is_zero() && m.rows >= 0) blocks.erase(l);
        if (!m.is_zero()) blocks[l] = std::move(m);
    }
    bool is_zero() const {
        for (const auto& [l, m] : blocks)
            if (!m.is_zero()) return false;
        return true;
    }
};

GradedMap gm_compose(const Ring& r, const GradedMap& second, const GradedMap& first);
GradedMap gm_add(const Ring& r, const GradedMap& a, const GradedMap& b);
GradedMap gm_sub(const Ring& r, const GradedMap& a, const GradedMap& b);
GradedMap gm_neg(const Ring& r, const GradedMap& a);
GradedMap gm_scale(const Ring& r, const Scalar& c, const GradedMap& a);
GradedMap gm_extend(const Ring& r_to, const GradedMap& a);

// Bounded cochain complex of finitely generated free modules.
struct FreeComplex {
    Ring ring;
    std::map<int, int> ranks;  // only degrees with positive rank
    GradedMap diff;            // degree +1

    // validates block dimensions and d*d = 0
    static FreeComplex make(Ring ring, std::map<int, int> ranks, GradedMap diff);
    // validates block dimensions only (totalisations are assembled unchecked)
    static FreeComplex make_unchecked(Ring ring, std::map<int, int> ranks, GradedMap diff);

    int rank(int degree) const {
        auto it = ranks.find(degree);
        return it == ranks.end() ? 0 : it->second;
    }
    int min_degree() const { return ranks.empty() ? 0 : ranks.begin()->first; }
    int max_degree() const { return ranks.empty() ? 0 : ranks.rbegin()->first; }
    // differential block l -> l+1 with explicit dimensions
    Matrix d(int l) const;
    bool is_zero_complex() const { return ranks.empty(); }
};

// Identity map on a complex; zero map between complexes.
GradedMap gm_identity(const FreeComplex& c);
GradedMap gm_zero(int degree);

// Dimension sanity of a graded map source -> target.
void gm_validate(const GradedMap& f, const FreeComplex& source, const FreeComplex& target);

bool check_complex(const FreeComplex& c);

// Is phi a cochain map between the given complexes?
bool is_cochain_map(const GradedMap& phi, const FreeComplex& source, const FreeComplex& target);

struct CohomologyReport {
    // degree -> (free rank, torsion divisors > 1)
    std::map<int, std::pair<int, std::vector<Scalar>>> groups;
    bool all_trivial() const {
        for (const auto& [deg, g] : groups)
            if (g.first != 0 || !g.second.empty()) return false;
        return true;
    }
};

CohomologyReport cohomology(const FreeComplex& c);
bool is_acyclic(const FreeComplex& c);

// Cone of a degree-0 cochain map phi: C -> D, with Cone^l = C^l + D^{l-1}
// and differential [[d_C, 0], [phi, -d_D]].
FreeComplex mapping_cone(const Ring& r, const GradedMap& phi, const FreeComplex& c,
                         const FreeComplex& d);

// (shift(C,k))^l = C^{l+k}, differential scaled by (-1)^k.
FreeComplex shift(const FreeComplex& c, int k);

// Base ring used for specialization spot checks (Q when the base is Z).
Ring spot_ring(const Ring& r);
FreeComplex specialize_complex(const FreeComplex& c, const std::vector<Scalar>& point);
GradedMap specialize_map(const Ring& r, const GradedMap& f, const std::vector<Scalar>& point);

// PID mode when no points are given; otherwise every specialization of the
// cone must be acyclic (a falsifier, reported as "not falsified" = true).
bool is_quasi_iso(const GradedMap& phi, const FreeComplex& source, const FreeComplex& target,
                  const std::vector<std::vector<Scalar>>& points = {});

} // namespace homcube::homalg

#endif
