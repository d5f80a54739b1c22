#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "exec.hpp"
#include "rank.hpp"
#include "shape.hpp"
#include "stability.hpp"
#include "states.hpp"

namespace qstable {

struct SearchConfig {
    int trials = 20;
    std::uint64_t seed = 0;
    // Smallest subset size to aim for; 0 means "down to the cardinality
    // bound". Requests below the bound are clamped up to it — nothing
    // stable can exist down there.
    std::size_t target_size = 0;
    // single_party or all_bipartitions; the stability notion being preserved.
    StabilityMode mode = StabilityMode::single_party;
    double time_budget_seconds = 0.0;  // 0 = unlimited
    // Sweep the whole subset lattice instead of greedy removal (|S| <= 12).
    bool exhaustive_enumeration = false;
};

struct SearchLogEntry {
    std::string note;                  // what was tried
    std::vector<std::size_t> indices;  // 0-based into the input set; empty for fresh draws
    bool stable = false;
};

struct SearchOutcome {
    std::optional<StateSet> best_found;
    std::size_t best_size = 0;
    std::vector<SearchLogEntry> log;
    bool exhausted = false;  // conclusively done, not merely out of trials/budget
};

// Shrinks a stable set by randomized greedy removal with restarts (or a full
// lattice sweep when cfg.exhaustive_enumeration). The returned witness has
// been re-verified with the exhaustive checker. Deterministic given the seed.
SearchOutcome minimize_subset(const StateSet& set, const SearchConfig& cfg,
                              const TolerancePolicy& tol = {}, const ExecPolicy& exec = {});

// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
// fixed from R's diagonal.
Matrix haar_unitary(Eigen::Index dim, std::mt19937_64& rng);

// The first `size` columns of a Haar unitary on the full space.
StateSet random_orthogonal_set(const SystemShape& shape, std::size_t size, std::uint64_t seed);

// Hunts for a stable set of the bound-saturating size (or cfg.target_size if
// larger) by alternating fresh Haar draws with perturbations of the
// best-scoring candidate so far. A success is re-verified exhaustively.
SearchOutcome probe_bound(const SystemShape& shape, const SearchConfig& cfg,
                          const TolerancePolicy& tol = {}, const ExecPolicy& exec = {});

} // namespace qstable
