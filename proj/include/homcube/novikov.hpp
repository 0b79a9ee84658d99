#ifndef HOMCUBE_NOVIKOV_HPP
#define HOMCUBE_NOVIKOV_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "homcube/complex.hpp"
#include "homcube/toric_geom.hpp"

namespace homcube::toric {

using homalg::FreeComplex;
using rings::LaurentPoly;
using rings::Ring;
using rings::Scalar;

// Truncated arithmetic in the Novikov ring of a full-dimensional cone tau
// in M_R. The lattice splits along the cospan: a unimodular change of basis
// sends the first u coordinates to the cospan (Laurent-polynomial
// coefficients) and the rest onto the pointed quotient cone sigma_bar,
// where the weight functional phi grades the series.
struct NovikovContext {
    Ring base;             // coefficient ring R (no variables)
    int n = 0;             // ambient lattice rank
    Cone tau;              // the defining cone
    int u = 0;             // cospan dimension
    int q = 0;             // quotient rank n - u
    std::vector<std::vector<Int>> basis;      // adapted basis, columns of Q
    std::vector<std::vector<Int>> basis_inv;  // Q^{-1}
    Cone sigma_bar;                           // quotient cone, coords of the last q basis vectors
    Cone sigma_bar_dual;                      // inequalities for membership
    std::vector<Int> phi;                     // strictly positive on sigma_bar - {0}
    std::vector<Int> wbar;                    // interior vector of sigma_bar
    int order = 16;                           // truncation order

    // split an ambient exponent into (cospan part, quotient part)
    std::pair<rings::Exponent, std::vector<std::int64_t>> split(const rings::Exponent& m) const;
    rings::Exponent unsplit(const rings::Exponent& cospan, const std::vector<std::int64_t>& quot) const;
    Int phi_degree(const std::vector<std::int64_t>& quot) const;
    bool in_sigma_bar(const std::vector<std::int64_t>& diff) const;
    Ring cospan_ring() const { return base.with_variables(u); }
};

NovikovContext make_context(const Ring& base, const Cone& tau, int order);
// Same context with a caller-supplied weight functional (must be strictly
// positive on sigma_bar minus zero; validated on the generators).
NovikovContext make_context_with_phi(const Ring& base, const Cone& tau, int order,
                                     std::vector<Int> phi);

// Truncated Novikov series: finitely many known terms, each a quotient
// exponent with a cospan Laurent-polynomial coefficient. `valid` is the
// phi-degree below which the terms are exact (nullopt = exact everywhere).
// `base_pt`, when present, certifies supp(true series) inside base_pt +
// sigma_bar.
struct NovikovSeries {
    const NovikovContext* ctx = nullptr;
    std::map<std::vector<std::int64_t>, LaurentPoly> terms;
    std::optional<std::int64_t> valid;
    std::optional<std::vector<std::int64_t>> base_pt;

    bool exact() const { return !valid.has_value(); }
    bool known_zero() const { return terms.empty() && exact(); }
};

NovikovSeries nov_from_poly(const NovikovContext& ctx, const LaurentPoly& f);
NovikovSeries nov_zero(const NovikovContext& ctx);
NovikovSeries nov_one(const NovikovContext& ctx);
NovikovSeries nov_add(const NovikovSeries& f, const NovikovSeries& g);
NovikovSeries nov_sub(const NovikovSeries& f, const NovikovSeries& g);
NovikovSeries nov_neg(const NovikovSeries& f);
NovikovSeries nov_mul(const NovikovSeries& f, const NovikovSeries& g);
bool nov_equal_mod_order(const NovikovSeries& f, const NovikovSeries& g, std::int64_t order);

// Sufficient-condition inversion: succeeds when the support has a unique
// sigma_bar-minimal vertex whose cospan coefficient is a unit and the
// unknown tail is certified to stay inside vertex + sigma_bar. The inverse
// is exact below the context's truncation order.
std::optional<NovikovSeries> nov_invert(const NovikovSeries& f);

std::string nov_to_string(const NovikovSeries& f);

enum class NovVerdict { AcyclicCertified, NonacyclicCertified, Inconclusive };

struct PivotRecord {
    int degree = 0, row = 0, col = 0;
    std::vector<std::int64_t> vertex;   // quotient exponent of the pivot slice
    std::int64_t slice_order = 0;       // phi-degree of the vertex
    std::int64_t audit_order = 0;       // valid order at the time of pivoting
};

struct WitnessRecord {
    int degree = 0;
    // polynomial cocycle over R[M], one Laurent polynomial per generator
    std::vector<LaurentPoly> cocycle;
    std::int64_t order = 0;   // truncation order of the window systems
    int shift_bound = 0;      // preimage support shifts 0..shift_bound excluded
};

struct NovReport {
    NovVerdict verdict = NovVerdict::Inconclusive;
    int order = 0;
    std::vector<PivotRecord> pivots;
    std::optional<WitnessRecord> witness;
    std::string detail;
};

// Acyclicity of D (x) R<<tau>> decided by unit-pivot Gaussian elimination
// (sound certificate) or by an exact cocycle with no truncated preimage up
// to the recorded support shift (sound at the recorded shift bound);
// Inconclusive otherwise.
NovReport nov_acyclicity(const FreeComplex& d, const Cone& tau, int order);
NovReport nov_acyclicity_with_context(const FreeComplex& d, const NovikovContext& ctx);

} // namespace homcube::toric

#endif
