#ifndef HOMCUBE_WITNESS_HPP
#define HOMCUBE_WITNESS_HPP

#include "homcube/linop.hpp"
#include "homcube/tori.hpp"

namespace homcube::findom {

using cubes::SpecialCubeData;
using tori::TorusData;

// Domination witness: mutually inverse homotopy equivalences between a
// finite complex C over the base ring and an L-module complex D, with the
// D-side maps given as exact operators.
struct Witness {
    FreeComplex c;      // over the base ring (no variables)
    FreeComplex d;      // over the Laurent ring
    std::vector<Scalar> center;
    OpMap alpha;        // C -> D
    OpMap beta;         // D -> C (operator-valued)
    OpMap homotopy;     // G: D -> D of degree -1 with dG + Gd = alpha beta - id
};

// C = D over the base ring, alpha = beta = id, G = 0.
Witness trivial_witness(const FreeComplex& c);

// D = Tot Triv(L_n; x_1 - c_1, ..., x_n - c_n) on the rank-one complex,
// C = R in degree n, alpha the top-summand inclusion, beta evaluation at
// the point, G built from divided differences. The homotopy identity is
// verified exactly on construction.
Witness evaluation_witness(const Ring& base, std::vector<Scalar> point);

// Exact validation: alpha, beta cochain maps and dG + Gd = alpha beta - id.
void validate_witness(const Witness& w);

// The derived special cube on C for the chosen variable subset (0-based
// indices into the Laurent variables of D): f_k = beta x_k alpha and the
// permutation-sum homotopies, all extracted as honest matrices over the
// base ring. The result passes verify_special.
SpecialCubeData derive_cube_from_witness(const Witness& w, const std::vector<int>& vars);

struct DominationWitnessResult {
    SpecialCubeData cube;   // on C, over the base ring
    TorusData torus;        // its mapping torus over u fresh variables
    FreeComplex shifted_d;  // shift(D, -u), the comparison target
};

// Torus of the derived cube on the chosen variables; spot-checked against
// shift(D, -u) by comparing cohomology dimensions at unit points (the torus
// variables take the coordinates of the chosen subset).
DominationWitnessResult domination_witness(const Witness& w, const std::vector<int>& vars);
bool domination_spot_check(const DominationWitnessResult& dw, const Witness& w,
                           const std::vector<int>& vars,
                           const std::vector<std::vector<Scalar>>& points);

} // namespace homcube::findom

#endif
