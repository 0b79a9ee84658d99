#include "homcube/findom.hpp"

#include "homcube/tori.hpp"

namespace homcube::findom {

using toric::cone_dim;
using toric::dual_cone;
using toric::FanCheck;
using toric::is_complete_fan;
using toric::nov_acyclicity;

namespace {

NovReport test_cone_with_doubling(const FreeComplex& d, const Cone& tau, int order) {
    int current = order;
    for (;;) {
        NovReport rep = nov_acyclicity(d, tau, current);
        if (rep.verdict != NovVerdict::Inconclusive || current >= kMaxOrder) return rep;
        current = std::min(2 * current, kMaxOrder);
    }
}

} // namespace

FindomReport ranicki_test(const FreeComplex& d, int order) {
    if (d.ring.variables != 1)
        throw StructuralError("the one-variable criterion needs exactly one Laurent variable");
    return toric_findom_test(d, toric::standard_fan_1d(), order);
}

FindomReport toric_findom_test(const FreeComplex& d, const Fan& fan, int order) {
    if (d.ring.variables != fan.n)
        throw StructuralError("complex and fan have different ranks");
    FindomReport report;
    report.order = order;
    FanCheck check = is_complete_fan(fan);
    report.fan_complete = check.complete;
    report.fan_diagnostic = check.diagnostic;
    if (!check.complete)
        throw DomainError("fan is not complete: " + check.diagnostic);

    bool all_acyclic = true;
    bool any_inconclusive = false;
    for (const auto& sigma : fan.cones) {
        if (sigma.is_zero()) continue;
        ConeVerdict verdict;
        verdict.sigma = sigma;
        verdict.tau = dual_cone(sigma);
        verdict.report = test_cone_with_doubling(d, verdict.tau, order);
        if (verdict.report.verdict != NovVerdict::AcyclicCertified) all_acyclic = false;
        if (verdict.report.verdict == NovVerdict::Inconclusive) any_inconclusive = true;
        bool negative = verdict.report.verdict == NovVerdict::NonacyclicCertified;
        report.cones.push_back(std::move(verdict));
        if (negative) {
            report.conclusion = Conclusion::NotFinitelyDominatedCertified;
            report.detail = "certified non-acyclic Novikov cohomology on a cone";
            return report;
        }
    }
    if (all_acyclic && !report.cones.empty()) {
        report.conclusion = Conclusion::FinitelyDominatedCertified;
        report.detail = "all nonzero cones certified acyclic over a complete fan";
    } else if (any_inconclusive) {
        report.conclusion = Conclusion::Inconclusive;
        report.detail = "some cone tests remained inconclusive";
    } else {
        report.conclusion = Conclusion::Inconclusive;
        report.detail = "no nonzero cones present";
    }
    return report;
}

ConsequenceReport verify_findom_consequences(const Witness& w, const Fan& fan,
                                             const std::vector<std::vector<int>>& subspaces,
                                             int order, unsigned seed) {
    ConsequenceReport report;
    validate_witness(w);
    int n = w.d.ring.variables;
    if (fan.n != n) throw StructuralError("fan rank does not match the witness complex");

    // (1) full-variable domination witness, spot-checked against shift(D,-n)
    std::vector<int> all_vars;
    for (int k = 0; k < n; ++k) all_vars.push_back(k);
    DominationWitnessResult dw = domination_witness(w, all_vars);
    report.chain_spot_check =
        domination_spot_check(dw, w, all_vars, tori::random_unit_points(n, 20, seed));

    // (2) first-orthant cone and all duals of fan cones certify acyclic
    bool all_ok = report.chain_spot_check;
    if (n > 0) {
        std::vector<std::vector<toric::Int>> orthant;
        for (int k = 0; k < n; ++k) {
            std::vector<toric::Int> e(static_cast<size_t>(n), 0);
            e[static_cast<size_t>(k)] = 1;
            orthant.push_back(std::move(e));
        }
        Cone first_orthant = Cone::make(n, orthant);
        NovReport orth = test_cone_with_doubling(w.d, first_orthant, order);
        report.first_orthant_acyclic = orth.verdict == NovVerdict::AcyclicCertified;
        all_ok = all_ok && report.first_orthant_acyclic;
        for (const auto& sigma : fan.cones) {
            if (sigma.is_zero()) continue;
            ConeVerdict verdict;
            verdict.sigma = sigma;
            verdict.tau = dual_cone(sigma);
            verdict.report = test_cone_with_doubling(w.d, verdict.tau, order);
            if (verdict.report.verdict != NovVerdict::AcyclicCertified) all_ok = false;
            report.cone_tests.push_back(std::move(verdict));
        }
    } else {
        report.first_orthant_acyclic = true;
    }

    // (3) finite witness complexes for the requested coordinate subspaces
    for (const auto& subspace : subspaces) {
        DominationWitnessResult sub = domination_witness(w, subspace);
        if (!domination_spot_check(sub, w, subspace,
                                   tori::random_unit_points(n, 20, seed + 1)))
            all_ok = false;
        report.subspace_witnesses.emplace_back(subspace, sub.torus.tot.complex);
    }

    report.ok = all_ok;
    report.detail = all_ok ? "all consequences certified"
                           : "a consequence check failed; see the flags";
    return report;
}

} // namespace homcube::findom
