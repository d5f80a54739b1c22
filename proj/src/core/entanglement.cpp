#include "entanglement.hpp"

#include <algorithm>

#include "errors.hpp"

namespace qstable {

Eigen::Index schmidt_rank(const StateVector& psi, const Bipartition& bp,
                          const TolerancePolicy& tol) {
    if (bp.party_count() != psi.shape().party_count())
        fail(errc::invalid_argument, "bipartition does not match the state's shape");
    return numerical_rank(components_over(psi, bp.left()), tol).rank;
}

SchmidtProfile schmidt_profile(const StateVector& psi, const TolerancePolicy& tol) {
    if (psi.shape().party_count() < 2)
        fail(errc::invalid_argument, "entanglement needs at least two parties");
    SchmidtProfile out;
    out.genuinely_entangled = true;
    for (Bipartition& bp : enumerate_bipartitions(psi.shape().party_count())) {
        SpectrumRank sr = numerical_rank(components_over(psi, bp.left()), tol);
        out.genuinely_entangled = out.genuinely_entangled && sr.rank > 1;
        out.entries.push_back({std::move(bp), sr.rank, std::move(sr.singular_values)});
    }
    return out;
}

bool is_genuinely_entangled(const StateVector& psi, const TolerancePolicy& tol) {
    if (psi.shape().party_count() < 2)
        fail(errc::invalid_argument, "entanglement needs at least two parties");
    for (const Bipartition& bp : enumerate_bipartitions(psi.shape().party_count()))
        if (schmidt_rank(psi, bp, tol) <= 1)
            return false;
    return true;
}

std::size_t count_entangled(const StateSet& set, const TolerancePolicy& tol) {
    if (set.shape() != SystemShape({2, 2}))
        fail(errc::invalid_argument, "entangled-state counting applies to two-qubit sets only");
    const Bipartition bp = Bipartition::one_vs_rest(0, 2);
    return static_cast<std::size_t>(
        std::count_if(set.states().begin(), set.states().end(),
                      [&](const StateVector& psi) { return schmidt_rank(psi, bp, tol) > 1; }));
}

} // namespace qstable
