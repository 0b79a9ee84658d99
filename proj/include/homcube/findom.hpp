#ifndef HOMCUBE_FINDOM_HPP
#define HOMCUBE_FINDOM_HPP

#include "homcube/novikov.hpp"
#include "homcube/witness.hpp"

namespace homcube::findom {

using toric::Cone;
using toric::Fan;
using toric::NovReport;
using toric::NovVerdict;

enum class Conclusion { FinitelyDominatedCertified, NotFinitelyDominatedCertified, Inconclusive };

struct ConeVerdict {
    Cone sigma;      // the fan cone
    Cone tau;        // its dual, where the Novikov test ran
    NovReport report;
};

struct FindomReport {
    Conclusion conclusion = Conclusion::Inconclusive;
    int order = 0;
    bool fan_complete = false;
    std::string fan_diagnostic;
    std::vector<ConeVerdict> cones;
    std::string detail;
};

// Default truncation order with automatic doubling on Inconclusive.
inline constexpr int kDefaultOrder = 16;
inline constexpr int kMaxOrder = 64;

// One-variable criterion over the two rays.
FindomReport ranicki_test(const FreeComplex& d, int order = kDefaultOrder);

// Fan criterion: requires a complete fan; positive conclusions need every
// nonzero cone's dual test to certify acyclic, negative ones need a
// certified witness on some cone.
FindomReport toric_findom_test(const FreeComplex& d, const Fan& fan, int order = kDefaultOrder);

struct ConsequenceReport {
    bool ok = false;
    bool chain_spot_check = false;          // torus vs shifted D at random points
    bool first_orthant_acyclic = false;
    std::vector<ConeVerdict> cone_tests;    // duals of the fan cones
    // witness complexes for the requested coordinate subspaces
    std::vector<std::pair<std::vector<int>, FreeComplex>> subspace_witnesses;
    std::string detail;
};

// Forward-direction consequences of a valid witness: the full-variable
// domination witness spot-checks, the first-orthant Novikov test and all
// fan-cone duals certify acyclic, and each requested coordinate subspace
// yields a finite witness complex.
ConsequenceReport verify_findom_consequences(const Witness& w, const Fan& fan,
                                             const std::vector<std::vector<int>>& subspaces,
                                             int order = kDefaultOrder, unsigned seed = 12345);

} // namespace homcube::findom

#endif
