#pragma once

#include <vector>

#include "rank.hpp"
#include "shape.hpp"
#include "states.hpp"

namespace qstable {

struct SchmidtEntry {
    Bipartition bipartition;
    Eigen::Index rank = 0;
    std::vector<double> singular_values;  // descending
};

// Schmidt ranks of one state across every canonical bipartition. Mirrored
// splits are omitted: the coefficient matrix transposes, so the rank agrees.
struct SchmidtProfile {
    std::vector<SchmidtEntry> entries;
    bool genuinely_entangled = false;  // rank > 1 everywhere
};

// Rank of the coefficient matrix of psi across bp; 1 means product.
Eigen::Index schmidt_rank(const StateVector& psi, const Bipartition& bp,
                          const TolerancePolicy& tol = {});

SchmidtProfile schmidt_profile(const StateVector& psi, const TolerancePolicy& tol = {});

bool is_genuinely_entangled(const StateVector& psi, const TolerancePolicy& tol = {});

// Two-qubit helper: how many states are entangled across the unique split.
std::size_t count_entangled(const StateSet& set, const TolerancePolicy& tol = {});

} // namespace qstable
