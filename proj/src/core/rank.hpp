#pragma once

#include <Eigen/Dense>
#include <vector>

#include "states.hpp"

namespace qstable {

// Numerical-rank knobs shared by every rank decision in the library.
struct TolerancePolicy {
    // Relative singular-value cutoff: sigma is "zero" below
    // sigma_max * max(rows, cols) * rank_eps.
    double rank_eps = 0x1p-40;
    // Relative overlap accepted as orthogonal (set validation, OPM checks).
    double orth_eps = 1e-10;
    // Switch to Gram accumulation once rows > gram_row_factor * cols.
    int gram_row_factor = 4;
    // Singular values within this factor of the cutoff flag the result.
    double marginal_band = 8.0;
};

void validate(const TolerancePolicy& tol);

// Outcome of a numerical rank decision over one spectrum.
struct SpectrumRank {
    Eigen::Index rank = 0;
    double threshold = 0.0;   // absolute cutoff tau
    double sigma_max = 0.0;
    double sigma_rank = 0.0;  // smallest retained singular value (0 if rank 0)
    double sigma_next = 0.0;  // largest discarded singular value (0 if none)
    bool marginal = false;    // some sigma within marginal_band of tau
    std::vector<double> singular_values;  // descending
};

// Decides rank from a singular-value list (any order; sorted internally).
// rows/cols are the dimensions of the matrix the spectrum came from.
SpectrumRank decide_rank(std::vector<double> singular_values, Eigen::Index rows,
                         Eigen::Index cols, const TolerancePolicy& tol = {});

// Same decision against a caller-supplied absolute cutoff.
SpectrumRank decide_with_cutoff(std::vector<double> singular_values, double tau,
                                const TolerancePolicy& tol = {});

// Rank via a full SVD of the matrix.
SpectrumRank numerical_rank(const Matrix& m, const TolerancePolicy& tol = {});

// Rank of a tall matrix fed in row chunks, via the cols x cols Gram matrix
// A^H A. Never stores the rows; the spectrum comes out of a Hermitian
// eigensolve (lambda = sigma^2), and the rank cutoff is applied on the
// eigenvalue scale, where the squared conditioning actually lives.
class GramAccumulator {
public:
    explicit GramAccumulator(Eigen::Index cols);

    void add_rows(const Eigen::Ref<const Matrix>& chunk);
    Eigen::Index rows_seen() const noexcept { return rows_; }
    Eigen::Index cols() const noexcept { return gram_.rows(); }

    SpectrumRank finish(const TolerancePolicy& tol = {}) const;

private:
    Matrix gram_;
    Eigen::Index rows_ = 0;
};

} // namespace qstable
