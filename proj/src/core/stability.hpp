#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exec.hpp"
#include "rank.hpp"
#include "shape.hpp"
#include "states.hpp"

namespace qstable {

// The orthogonality-constraint matrix of a set for one bipartition: one row
// per ordered pair (k, l), k != l, in lexicographic order. Row (k, l) is the
// row-major vec of T_kl = sum_a |psi_{k,a}><psi_{l,a}| on the measured side,
// where a runs over the non-measured side's basis. A local operator M on the
// measured side preserves all orthogonalities iff vec(M) is orthogonal to
// every row. Rows are generated on demand so tall instances never have to
// materialize.
class DMatrix {
public:
    DMatrix(const StateSet& set, Bipartition bp, Side measuring);

    const Bipartition& bipartition() const noexcept { return bp_; }
    Side measuring_side() const noexcept { return measuring_; }
    Eigen::Index dim_measured() const noexcept { return dim_q_; }

    Eigen::Index row_count() const noexcept { return static_cast<Eigen::Index>(row_index_.size()); }
    Eigen::Index col_count() const noexcept { return dim_q_ * dim_q_; }
    const std::vector<std::pair<std::size_t, std::size_t>>& row_index() const noexcept {
        return row_index_;
    }

    // T_kl itself (dim_measured x dim_measured).
    Matrix pair_operator(std::size_t k, std::size_t l) const;
    // One row, i.e. vec(T_kl) for row_index()[r] = (k, l).
    Vector row(std::size_t r) const;
    // Rows r0 .. r0+count-1 as a dense block.
    Matrix row_block(std::size_t r0, std::size_t count) const;
    // The whole matrix.
    Matrix dense() const;

private:
    Bipartition bp_;
    Side measuring_;
    Eigen::Index dim_q_;
    std::vector<Matrix> components_;  // per state: (other side basis) x (measured side basis)
    std::vector<std::pair<std::size_t, std::size_t>> row_index_;
};

DMatrix build_dmatrix(const StateSet& set, const Bipartition& bp, Side measuring);

// Rank verdict for one D-matrix against its stability target d_Q^2 - 1.
struct RankResult {
    Eigen::Index rank = 0;
    Eigen::Index target = 0;
    std::vector<double> singular_values;  // descending
    double tolerance_used = 0.0;          // absolute cutoff tau
    double sigma_rank = 0.0;              // smallest retained singular value
    double sigma_next = 0.0;              // largest discarded singular value
    bool marginal = false;

    bool at_target() const noexcept { return rank == target; }
};

RankResult rank_of(const DMatrix& d, const TolerancePolicy& tol = {});

enum class StabilityMode { single_party, one_vs_rest, all_bipartitions };

std::string to_string(StabilityMode mode);

struct StabilityEntry {
    Bipartition bipartition;
    Side measuring;
    RankResult rank;
    bool stable = false;  // rank hit the target
};

struct StabilityReport {
    StabilityMode mode = StabilityMode::single_party;
    std::vector<StabilityEntry> entries;
    bool stable = false;    // conjunction of the entries
    bool marginal = false;  // any entry near the rank cutoff

    // "locally-stable", "stable-under-every-bipartition" or "not-stable".
    std::string overall() const;
};

// Measures each single party against target d_i^2 - 1.
StabilityReport check_locally_stable(const StateSet& set, const TolerancePolicy& tol = {},
                                     const ExecPolicy& exec = {});

enum class BipartitionSweep {
    one_vs_rest,  // N checks measuring each party's complement; equivalent
                  // verdict, since a one-party operator extends to any
                  // containing side by tensoring identity
    exhaustive    // both sides of all 2^(N-1) - 1 bipartitions
};

StabilityReport check_every_bipartition(const StateSet& set,
                                        BipartitionSweep sweep = BipartitionSweep::one_vs_rest,
                                        const TolerancePolicy& tol = {},
                                        const ExecPolicy& exec = {});

// A two-outcome local POVM witnessing that a rank-deficient side admits a
// nontrivial orthogonality-preserving measurement.
struct PovmCertificate {
    Bipartition bipartition;
    Side measuring;
    Matrix m_b;  // Hermitian, traceless, orthogonal to every pair operator, max |eig| = 1/4
    Matrix m_1;  // I/2 + m_b
    Matrix m_2;  // I - m_1 entrywise, so the completion is bit-exact
    bool hermitian = false;
    bool psd = false;
    bool completes_to_identity = false;
    bool orthogonality_preserving = false;
    bool nontrivial = false;

    bool all_checks() const noexcept {
        return hermitian && psd && completes_to_identity && orthogonality_preserving && nontrivial;
    }
};

PovmCertificate extract_certificate(const StateSet& set, const Bipartition& bp, Side measuring,
                                    const TolerancePolicy& tol = {});

struct OpmVerdict {
    bool preserving = false;
    bool nontrivial = false;
};

// Checks whether M on the measured side keeps all pairs orthogonal, and
// whether M is more than a multiple of the identity.
OpmVerdict verify_opm(const StateSet& set, const Bipartition& bp, Side measuring, const Matrix& m,
                      const TolerancePolicy& tol = {});

struct CardinalityBounds {
    std::size_t lower_single = 0;                 // any locally stable set is at least this big
    std::optional<std::size_t> lower_every;       // same, for every-bipartition stability (N >= 2)
};

CardinalityBounds cardinality_bounds(const SystemShape& shape);

// Two-qubit decision without rank computations: stable iff the set has at
// least 3 states of which at least 2 are entangled.
bool classify_two_qubit(const StateSet& set, const TolerancePolicy& tol = {});

} // namespace qstable
