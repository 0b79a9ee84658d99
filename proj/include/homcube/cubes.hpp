#ifndef HOMCUBE_CUBES_HPP
#define HOMCUBE_CUBES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homcube/complex.hpp"

namespace homcube::cubes {

using homalg::FreeComplex;
using homalg::GradedMap;
using rings::Ring;
using rings::Scalar;

using Mask = std::uint32_t;

inline int card(Mask a) { return std::popcount(a); }
inline bool subset(Mask a, Mask b) { return (a & ~b) == 0; }
inline int parity_sign(long long e) { return (e % 2 == 0) ? 1 : -1; }

// Total incidence number [B:A] in {-1, 0, +1}; elements of N are the set
// bits of the masks (bit k = element k+1).
int total_incidence(Mask b, Mask a);

// N-diagram: a graded module F(A) for each subset and structure maps
// H_{B,A} of degree #A - #B + 1 for A strictly contained in B.  The
// diagonal maps H_{A,A} are the differentials of the stored complexes.
struct NDiagram {
    int n = 0;
    Ring ring;
    std::vector<FreeComplex> complexes;                 // indexed by mask
    std::map<std::pair<Mask, Mask>, GradedMap> maps;    // key (B, A), A strict subset of B

    const FreeComplex& at(Mask a) const { return complexes[a]; }
    // H_{B,A}; for A == B the differential. nullptr = zero map (A != B only).
    const GradedMap* structure_map(Mask b, Mask a) const;
    void set_map(Mask b, Mask a, GradedMap h);
    void validate() const;
};

struct TotalisedComplex {
    FreeComplex complex;                       // assembled, not d*d-checked
    std::vector<Mask> subset_order;            // increasing mask value
    std::map<int, std::map<Mask, int>> offsets; // degree -> summand offset
    // rank of summand A inside Tot^l is at(A).rank(l - #A)
};

TotalisedComplex totalise(const NDiagram& f);

// All blocks of D(F) o D(F), indexed by subset pairs; empty map blocks are
// dropped so the diagram is a cube iff the result is empty.
std::map<std::pair<Mask, Mask>, GradedMap> d_squared(const NDiagram& f);
bool is_cube(const NDiagram& f);

// Special N-diagram data: one complex, self-maps f_k, higher homotopies H_S.
struct SpecialCubeData {
    int n = 0;
    FreeComplex complex;
    std::vector<GradedMap> f;        // size n, degree 0
    std::map<Mask, GradedMap> h;     // |S| >= 2, degree 1 - |S|; missing = 0

    const GradedMap* homotopy(Mask s) const {
        auto it = h.find(s);
        return it == h.end() ? nullptr : &it->second;
    }
};

NDiagram expand_special(const SpecialCubeData& s);

struct SubsetCheck {
    Mask s = 0;
    bool ok = true;
    std::string detail; // first failing degree/entry when !ok
};

struct SpecialReport {
    std::vector<SubsetCheck> checks; // one per subset of N, increasing mask
    bool ok = true;
    std::optional<Mask> first_failure;
};

// Evaluates, per subset S: s=0 the complex condition, s=1 the cochain
// condition for f_k, s=2 the homotopy condition, s>=3 the five-part sum.
SpecialReport verify_special(const SpecialCubeData& s);

SpecialCubeData trivial_cube(const FreeComplex& c, std::vector<GradedMap> f);

// Derived cube data: f_k = beta h_k alpha, H_S the signed permutation sums
// of h's interleaved with G, conjugated by beta/alpha. Preconditions
// (cochain maps, commuting h's, dG + Gd = alpha beta - id) are checked.
SpecialCubeData derive_cube(const FreeComplex& c, const FreeComplex& d, const GradedMap& alpha,
                            const GradedMap& beta, const GradedMap& g,
                            const std::vector<GradedMap>& h);

struct FiltrationResult {
    FreeComplex sub;                 // Tot_k(F)
    std::vector<Mask> subset_order;  // summands of the sub complex
    FreeComplex quotient;            // Tot_k / Tot_{k+1}
    std::vector<Mask> quotient_order;
};

FiltrationResult filtration(const NDiagram& f, int k);

// Helper shared with the tori module: assemble a subset-indexed block
// collection into a graded map between two totalisations. Block (B,A) is a
// graded map F(A) -> G(B); its Tot degree shift is `tot_degree`.
GradedMap assemble_blocks(const Ring& r,
                          const std::map<std::pair<Mask, Mask>, GradedMap>& blocks,
                          const TotalisedComplex& source, const TotalisedComplex& target,
                          int tot_degree);

} // namespace homcube::cubes

#endif
