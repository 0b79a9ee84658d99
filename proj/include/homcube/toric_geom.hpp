#ifndef HOMCUBE_TORIC_GEOM_HPP
#define HOMCUBE_TORIC_GEOM_HPP

#include <optional>
#include <string>
#include <vector>

#include "homcube/snf.hpp"

namespace homcube::toric {

using rings::Int;

// Rational polyhedral cone given by integer generators. Generators are kept
// primitive (gcd 1); the zero cone has an empty generator list.
struct Cone {
    int n = 0;
    std::vector<std::vector<Int>> gens;

    static Cone make(int n, std::vector<std::vector<Int>> gens);
    bool is_zero() const { return gens.empty(); }
};

struct Fan {
    int n = 0;
    std::vector<Cone> cones;
};

std::vector<Int> primitive(std::vector<Int> v);

// Lineality space of the cone: integer basis and its dimension.
struct CospanResult {
    std::vector<std::vector<Int>> basis;
    int dim = 0;
};
CospanResult cospan(const Cone& sigma);
bool is_pointed(const Cone& sigma);
int cone_dim(const Cone& sigma);

// Dual cone { x | <x, v> >= 0 for all generators v }, as a generator list.
// Guaranteed-correct generator enumeration only for n <= 3.
Cone dual_cone(const Cone& sigma);

// Membership x in cone(gens), decided via the dual cone's inequalities.
bool cone_contains(const Cone& sigma, const std::vector<Int>& x);
bool cone_equal(const Cone& a, const Cone& b);

struct FanCheck {
    bool complete = false;
    std::string diagnostic;
};

// Face-intersection condition plus coverage of N_R (angular sweep for
// n <= 2, facet pairing for n = 3).
FanCheck is_complete_fan(const Fan& fan);

// Lattice basis contained in a pointed full-dimensional cone, found by
// enumerating lattice points by increasing coordinate sum.
std::vector<std::vector<Int>> basis_inside_cone(const Cone& sigma);

// Helpers shared with the Novikov layer.
Int dot(const std::vector<Int>& a, const std::vector<Int>& b);
// Integer kernel basis of the matrix with the given rows (saturated lattice).
std::vector<std::vector<Int>> integer_kernel(const std::vector<std::vector<Int>>& rows, int cols);
// Completes the saturated lattice spanned by `cols` (as columns) to a basis
// of Z^n; returns the full n x n unimodular matrix whose first columns span
// the sublattice.
std::vector<std::vector<Int>> complete_basis(const std::vector<std::vector<Int>>& cols, int n);
// Exact inverse of a unimodular integer matrix.
std::vector<std::vector<Int>> unimodular_inverse(const std::vector<std::vector<Int>>& m);

Fan standard_fan_1d();
Fan standard_fan_2d();

} // namespace homcube::toric

#endif
