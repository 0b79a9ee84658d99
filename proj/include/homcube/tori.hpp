#ifndef HOMCUBE_TORI_HPP
#define HOMCUBE_TORI_HPP

#include "homcube/cubes.hpp"

namespace homcube::tori {

using cubes::Mask;
using cubes::NDiagram;
using cubes::SpecialCubeData;
using cubes::TotalisedComplex;
using homalg::FreeComplex;
using homalg::GradedMap;
using rings::Ring;
using rings::Scalar;

// Mapping n-torus: the base cube is re-read over L = R[x^{+-1}] with n new
// torus variables appended after the base ring's variables, the structure
// maps become f (x) 1 - 1 (x) x_k, H (x) 1.
struct TorusData {
    SpecialCubeData base;
    SpecialCubeData extended;
    TotalisedComplex tot;
    int torus_var_offset = 0; // torus variable k lives at index offset + k
};

TorusData mapping_torus(const SpecialCubeData& s);

struct MatherMap {
    char kind = 'M'; // 'M', 'L', 'K' or 'J'
    std::map<std::pair<Mask, Mask>, GradedMap> blocks;
    GradedMap tot_map;             // degree-0 map between the totalisations
    TotalisedComplex source, target;
};

// Comparison map Tot Der(D; g, id, G; h...) -> Tot Triv(D; h...); the
// cochain identity M D^Y = D^X M is verified exactly during construction.
MatherMap mather_M(const FreeComplex& d, const GradedMap& g, const GradedMap& big_g,
                   const std::vector<GradedMap>& h);

// Diagonal beta: Tot Der(D; alpha beta, id, G; h...) -> Tot Der(C; alpha, beta, G; h...).
MatherMap mather_L(const FreeComplex& c, const FreeComplex& d, const GradedMap& alpha,
                   const GradedMap& beta, const GradedMap& big_g,
                   const std::vector<GradedMap>& h);

// Torus-level versions: K = M (x) 1 and J = diagonal beta (x) 1.
MatherMap mather_K(const FreeComplex& d, const GradedMap& g, const GradedMap& big_g,
                   const std::vector<GradedMap>& h);
MatherMap mather_J(const FreeComplex& c, const FreeComplex& d, const GradedMap& alpha,
                   const GradedMap& beta, const GradedMap& big_g,
                   const std::vector<GradedMap>& h);

// psi: T Triv(D; x_1.,...,x_n.) -> shift(D, -n), multiplication on the full
// summand and zero elsewhere. Checked to be a cochain map by collapsing the
// torus variables onto the base variables.
struct PsiData {
    TorusData torus;
    FreeComplex target;            // shift(D, -n)
    GradedMap psi;                 // selector blocks on generators
};

PsiData build_psi(const FreeComplex& d);

// Spot check: cones of psi specialized at the given points (torus variables
// collapse onto the same point) are SNF-acyclic. Returns "not falsified".
bool psi_spot_check(const PsiData& psi, const std::vector<std::vector<Scalar>>& points);

// Koszul complex of (x_1, ..., x_n) over the integers, as the totalisation
// of the trivial cube on the rank-one complex.
FreeComplex koszul(int n);

// Multidegree slice of koszul(n): finite complex over Z whose degree-a part
// is spanned by the subset generators with nonnegative monomial exponent.
FreeComplex koszul_slice(int n, const std::vector<int>& multidegree);

// Random specialization points with unit coordinates in [-9, 9].
std::vector<std::vector<Scalar>> random_unit_points(int vars, int count, unsigned seed);

} // namespace homcube::tori

#endif
