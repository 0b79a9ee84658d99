#ifndef HOMCUBE_MULTICOMPLEX_HPP
#define HOMCUBE_MULTICOMPLEX_HPP

#include <optional>
#include <string>
#include <vector>

#include "homcube/cubes.hpp"

namespace homcube::mc {

using cubes::SpecialCubeData;
using homalg::FreeComplex;
using homalg::GradedMap;
using rings::Matrix;
using rings::Ring;
using rings::Scalar;

// Position in Z^{n+1}; the last coordinate plays the degree role for the
// distinguished direction n+1.
using Position = std::vector<int>;

// An (n+1)-complex with finite support: modules are free of the recorded
// rank, differentials d_i raise the i-th coordinate and anticommute.
struct MultiComplex {
    Ring ring;
    int dirs = 0;                                     // n + 1
    std::map<Position, int> modules;                  // rank > 0 entries only
    std::map<std::pair<Position, int>, Matrix> diff;  // (source position, direction 0..dirs-1)

    int rank(const Position& p) const {
        auto it = modules.find(p);
        return it == modules.end() ? 0 : it->second;
    }
    // matrix of d_i at p, materialized with correct dimensions
    Matrix d(const Position& p, int i) const;
    void set_d(const Position& p, int i, Matrix m);
};

// First anticommutation failure on the window interior, if any.
std::optional<std::string> check_multicomplex(const MultiComplex& e);

// Positions (eps_1..eps_n, k) carrying C^k, with the sign conventions
// d_{n+1} = (-1)^{|eps|} d and d_k = (-1)^{eps_1+...+eps_{k-1}} f_k.
MultiComplex from_trivial_cube(const FreeComplex& c, const std::vector<GradedMap>& f);

struct TotSum {
    FreeComplex complex;
    // degree -> (position -> offset), positions in lex order
    std::map<int, std::map<Position, int>> offsets;
};

TotSum tot_sum(const MultiComplex& e);

// Two-direction partial totalisation: D^{p,q} = sum over |A| = p of C^q with
// horizontal differential [A+j : A] f_j and vertical (-1)^p d.
MultiComplex partial_tot_2complex(const FreeComplex& c, const std::vector<GradedMap>& f);
// Column order used by partial_tot_2complex inside D^{p,*}.
std::vector<cubes::Mask> subsets_of_size(int n, int p);

// The multicomplex carrying Tot(F) shifted at every lattice position of the
// box |a_i| <= box_radius, with the cross differentials given by signed
// inclusions.
MultiComplex realize_L(const SpecialCubeData& f, int box_radius);

struct TruncationWindow {
    int n = 0;
    int hook_bound = 0;   // k0
    int degree_sum_bound = 0;

    bool contains(const Position& a) const {
        long long sum = 0;
        int hook = a.empty() ? 0 : a[0];
        for (int v : a) {
            sum += v;
            hook = std::min(hook, v);
        }
        return hook >= hook_bound && sum <= degree_sum_bound;
    }
};

struct TrTotResult {
    FreeComplex complex;
    std::map<int, std::map<Position, int>> offsets; // keyed by first-n coords
    // dropped boundary maps (source position, direction)
    std::vector<std::pair<Position, int>> leakage;
};

TrTotResult tr_tot(const MultiComplex& e, const TruncationWindow& w);

// Element of the truncated-product totalisation in one total degree:
// component at a (length n) lives in E^{[a, degree]}.
struct TrCochain {
    int degree = 0;
    std::map<Position, std::vector<Scalar>> comps;
};

// d(c) with components computed at every stored position of E.
TrCochain apply_diff(const MultiComplex& e, const TrCochain& c);
bool cochain_is_zero(const TrCochain& c);

// Constructive contraction: per-position exactness in direction n+1 is
// checked, then b with d(b) = c is produced by induction on |a|.
TrCochain contract_cocycle(const MultiComplex& e, const TrCochain& c);

} // namespace homcube::mc

#endif
