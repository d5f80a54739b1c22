#include "rank.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace qstable {

void validate(const TolerancePolicy& tol) {
    if (!(tol.rank_eps > 0) || !std::isfinite(tol.rank_eps))
        fail(errc::invalid_argument, "rank_eps must be positive and finite");
    if (!(tol.orth_eps > 0) || !std::isfinite(tol.orth_eps))
        fail(errc::invalid_argument, "orth_eps must be positive and finite");
    if (tol.gram_row_factor < 1)
        fail(errc::invalid_argument, "gram_row_factor must be at least 1");
    if (!(tol.marginal_band >= 1))
        fail(errc::invalid_argument, "marginal_band must be at least 1");
}

SpectrumRank decide_with_cutoff(std::vector<double> singular_values, double tau,
                                const TolerancePolicy& tol) {
    validate(tol);
    std::sort(singular_values.begin(), singular_values.end(), std::greater<>());
    SpectrumRank out;
    out.singular_values = std::move(singular_values);
    if (out.singular_values.empty() || out.singular_values.front() <= 0.0)
        return out;  // zero matrix: rank 0, decisively
    out.sigma_max = out.singular_values.front();
    out.threshold = tau;
    for (double s : out.singular_values) {
        if (s > out.threshold) {
            ++out.rank;
            out.sigma_rank = s;
        } else {
            out.sigma_next = std::max(out.sigma_next, s);
        }
        if (s >= out.threshold / tol.marginal_band && s <= out.threshold * tol.marginal_band)
            out.marginal = true;
    }
    return out;
}

SpectrumRank decide_rank(std::vector<double> singular_values, Eigen::Index rows,
                         Eigen::Index cols, const TolerancePolicy& tol) {
    validate(tol);
    const double sigma_max =
        singular_values.empty() ? 0.0
                                : *std::max_element(singular_values.begin(), singular_values.end());
    const double tau = sigma_max * static_cast<double>(std::max(rows, cols)) * tol.rank_eps;
    return decide_with_cutoff(std::move(singular_values), tau, tol);
}

SpectrumRank numerical_rank(const Matrix& m, const TolerancePolicy& tol) {
    validate(tol);
    if (m.rows() == 0 || m.cols() == 0)
        return {};
    if (m.rows() > static_cast<Eigen::Index>(tol.gram_row_factor) * m.cols()) {
        GramAccumulator acc(m.cols());
        acc.add_rows(m);
        return acc.finish(tol);
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    std::vector<double> sv(svd.singularValues().data(),
                           svd.singularValues().data() + svd.singularValues().size());
    return decide_rank(std::move(sv), m.rows(), m.cols(), tol);
}

GramAccumulator::GramAccumulator(Eigen::Index cols) {
    if (cols <= 0)
        fail(errc::invalid_argument, "Gram accumulator needs a positive column count");
    gram_ = Matrix::Zero(cols, cols);
}

void GramAccumulator::add_rows(const Eigen::Ref<const Matrix>& chunk) {
    if (chunk.cols() != gram_.cols())
        fail(errc::invalid_argument, "row chunk width does not match the accumulator");
    gram_.noalias() += chunk.adjoint() * chunk;
    rows_ += chunk.rows();
}

SpectrumRank GramAccumulator::finish(const TolerancePolicy& tol) const {
    validate(tol);
    if (rows_ == 0)
        return {};
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram_, Eigen::EigenvaluesOnly);
    std::vector<double> sv;
    double lambda_max = 0.0;
    sv.reserve(static_cast<std::size_t>(eig.eigenvalues().size()));
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double lambda = std::max(0.0, eig.eigenvalues()[i]);
        lambda_max = std::max(lambda_max, lambda);
        sv.push_back(std::sqrt(lambda));
    }
    // The cutoff lives on the eigenvalue scale: forming A^H A squares the
    // condition number, so zero eigenvalues surface as lambda_max * machine
    // noise — far above the square of a direct singular-value cutoff. Cutting
    // at lambda_max * max(rows, cols) * rank_eps keeps the decision
    // noise-proof; on sigma terms that is sigma_max * sqrt(max * rank_eps).
    const double cutoff_lambda =
        lambda_max * static_cast<double>(std::max(rows_, gram_.cols())) * tol.rank_eps;
    return decide_with_cutoff(std::move(sv), std::sqrt(cutoff_lambda), tol);
}

} // namespace qstable
