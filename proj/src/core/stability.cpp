#include "stability.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace qstable {
namespace {

constexpr double kMgsZeroEps = 1e-12;   // candidate negligible next to the largest one
constexpr double kMgsDropEps = 1e-8;    // residual treated as linearly dependent
constexpr double kComplementEps = 1e-6; // canonical direction accepted as outside the span
constexpr double kCheckEps = 1e-12;     // hermiticity / PSD slack for the certificate flags

// Real coordinates of a Hermitian d x d matrix: the diagonal, then sqrt(2)
// times the real and imaginary parts of each upper entry. Isometric for the
// Frobenius norm, so Gram-Schmidt can run over plain real vectors.
Eigen::VectorXd hermitian_coords(const Matrix& m) {
    const Eigen::Index d = m.rows();
    Eigen::VectorXd v(d * d);
    Eigen::Index at = 0;
    for (Eigen::Index j = 0; j < d; ++j)
        v[at++] = m(j, j).real();
    const double r2 = std::sqrt(2.0);
    for (Eigen::Index b = 0; b < d; ++b)
        for (Eigen::Index c = b + 1; c < d; ++c) {
            v[at++] = r2 * m(b, c).real();
            v[at++] = r2 * m(b, c).imag();
        }
    return v;
}

Matrix hermitian_from_coords(const Eigen::VectorXd& v, Eigen::Index d) {
    Matrix m(d, d);
    Eigen::Index at = 0;
    for (Eigen::Index j = 0; j < d; ++j)
        m(j, j) = Complex(v[at++], 0.0);
    const double inv_r2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index b = 0; b < d; ++b)
        for (Eigen::Index c = b + 1; c < d; ++c) {
            const double re = v[at++] * inv_r2;
            const double im = v[at++] * inv_r2;
            m(b, c) = Complex(re, im);
            m(c, b) = Complex(re, -im);
        }
    return m;
}

void project_out(const std::vector<Eigen::VectorXd>& q, Eigen::VectorXd& v) {
    for (const auto& u : q)
        v -= u.dot(v) * u;
}

StabilityReport assemble(StabilityMode mode,
                         std::vector<std::pair<Bipartition, Side>> tasks,
                         const StateSet& set, const TolerancePolicy& tol,
                         const ExecPolicy& exec) {
    StabilityReport report;
    report.mode = mode;
    report.entries.resize(tasks.size());
    parallel_for(tasks.size(), exec, [&](std::size_t i) {
        const auto& [bp, measuring] = tasks[i];
        StabilityEntry e{bp, measuring, rank_of(build_dmatrix(set, bp, measuring), tol), false};
        e.stable = e.rank.at_target();
        report.entries[i] = std::move(e);
    });
    report.stable = std::all_of(report.entries.begin(), report.entries.end(),
                                [](const StabilityEntry& e) { return e.stable; });
    report.marginal = std::any_of(report.entries.begin(), report.entries.end(),
                                  [](const StabilityEntry& e) { return e.rank.marginal; });
    return report;
}

void require_checkable(const StateSet& set) {
    if (set.shape().party_count() < 2)
        fail(errc::invalid_argument, "stability needs at least two parties");
    if (set.cardinality() < 2)
        fail(errc::degenerate_set, "a set with fewer than 2 states imposes no orthogonality constraints");
}

} // namespace

DMatrix::DMatrix(const StateSet& set, Bipartition bp, Side measuring)
    : bp_(std::move(bp)), measuring_(measuring) {
    if (bp_.party_count() != set.shape().party_count())
        fail(errc::invalid_argument, "bipartition does not match the set's shape");
    if (set.cardinality() < 2)
        fail(errc::degenerate_set, "a set with fewer than 2 states imposes no orthogonality constraints");
    dim_q_ = static_cast<Eigen::Index>(subsystem_dim(set.shape(), bp_.parties(measuring_)));
    const auto& other = bp_.parties(other_side(measuring_));
    components_.reserve(set.cardinality());
    for (const auto& psi : set.states())
        components_.push_back(components_over(psi, other));
    const std::size_t s = set.cardinality();
    row_index_.reserve(s * (s - 1));
    for (std::size_t k = 0; k < s; ++k)
        for (std::size_t l = 0; l < s; ++l)
            if (k != l)
                row_index_.emplace_back(k, l);
}

Matrix DMatrix::pair_operator(std::size_t k, std::size_t l) const {
    return components_.at(k).transpose() * components_.at(l).conjugate();
}

Vector DMatrix::row(std::size_t r) const {
    const auto [k, l] = row_index_.at(r);
    const Matrix t = pair_operator(k, l);
    Vector v(col_count());
    for (Eigen::Index b = 0; b < dim_q_; ++b)
        for (Eigen::Index c = 0; c < dim_q_; ++c)
            v[b * dim_q_ + c] = t(b, c);
    return v;
}

Matrix DMatrix::row_block(std::size_t r0, std::size_t count) const {
    Matrix block(static_cast<Eigen::Index>(count), col_count());
    for (std::size_t r = 0; r < count; ++r)
        block.row(static_cast<Eigen::Index>(r)) = row(r0 + r).transpose();
    return block;
}

Matrix DMatrix::dense() const {
    return row_block(0, static_cast<std::size_t>(row_count()));
}

DMatrix build_dmatrix(const StateSet& set, const Bipartition& bp, Side measuring) {
    return DMatrix(set, bp, measuring);
}

RankResult rank_of(const DMatrix& d, const TolerancePolicy& tol) {
    validate(tol);
    SpectrumRank sr;
    if (d.row_count() > static_cast<Eigen::Index>(tol.gram_row_factor) * d.col_count()) {
        GramAccumulator acc(d.col_count());
        const std::size_t rows = static_cast<std::size_t>(d.row_count());
        const std::size_t chunk = std::clamp<std::size_t>(
            262144 / static_cast<std::size_t>(d.col_count()), 16, rows);
        for (std::size_t r0 = 0; r0 < rows; r0 += chunk)
            acc.add_rows(d.row_block(r0, std::min(chunk, rows - r0)));
        sr = acc.finish(tol);
    } else {
        sr = numerical_rank(d.dense(), tol);
    }
    RankResult out;
    out.rank = sr.rank;
    out.target = d.col_count() - 1;
    out.singular_values = std::move(sr.singular_values);
    out.tolerance_used = sr.threshold;
    out.sigma_rank = sr.sigma_rank;
    out.sigma_next = sr.sigma_next;
    out.marginal = sr.marginal;
    return out;
}

std::string to_string(StabilityMode mode) {
    switch (mode) {
    case StabilityMode::single_party: return "single-party";
    case StabilityMode::one_vs_rest: return "one-vs-rest";
    case StabilityMode::all_bipartitions: return "all-bipartitions";
    }
    fail(errc::internal, "unknown stability mode");
}

std::string StabilityReport::overall() const {
    if (!stable)
        return "not-stable";
    return mode == StabilityMode::single_party ? "locally-stable" : "stable-under-every-bipartition";
}

StabilityReport check_locally_stable(const StateSet& set, const TolerancePolicy& tol,
                                     const ExecPolicy& exec) {
    require_checkable(set);
    const int n = set.shape().party_count();
    std::vector<std::pair<Bipartition, Side>> tasks;
    tasks.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Bipartition bp = Bipartition::one_vs_rest(i, n);
        const Side measuring = bp.side_of(i);
        tasks.emplace_back(std::move(bp), measuring);
    }
    return assemble(StabilityMode::single_party, std::move(tasks), set, tol, exec);
}

StabilityReport check_every_bipartition(const StateSet& set, BipartitionSweep sweep,
                                        const TolerancePolicy& tol, const ExecPolicy& exec) {
    require_checkable(set);
    const int n = set.shape().party_count();
    std::vector<std::pair<Bipartition, Side>> tasks;
    if (sweep == BipartitionSweep::one_vs_rest) {
        for (int i = 0; i < n; ++i) {
            Bipartition bp = Bipartition::one_vs_rest(i, n);
            const Side measuring = other_side(bp.side_of(i));
            tasks.emplace_back(std::move(bp), measuring);
        }
        return assemble(StabilityMode::one_vs_rest, std::move(tasks), set, tol, exec);
    }
    for (const Bipartition& bp : enumerate_bipartitions(n)) {
        tasks.emplace_back(bp, Side::left);
        tasks.emplace_back(bp, Side::right);
    }
    return assemble(StabilityMode::all_bipartitions, std::move(tasks), set, tol, exec);
}

PovmCertificate extract_certificate(const StateSet& set, const Bipartition& bp, Side measuring,
                                    const TolerancePolicy& tol) {
    validate(tol);
    const DMatrix d(set, bp, measuring);
    const RankResult rr = rank_of(d, tol);
    if (rr.rank >= rr.target)
        fail(errc::no_certificate,
             "no nontrivial orthogonality-preserving measurement exists: side " +
                 bp.to_string() + " has full rank " + std::to_string(rr.rank));

    const Eigen::Index dq = d.dim_measured();
    const Eigen::Index dim = dq * dq;
    const std::size_t s = set.cardinality();

    // Candidates spanning {identity} + the real span of the Hermitian pair
    // generators T_kl + T_kl^H and i(T_kl - T_kl^H).
    std::vector<Eigen::VectorXd> candidates;
    candidates.reserve(1 + s * (s - 1));
    candidates.push_back(hermitian_coords(Matrix::Identity(dq, dq)));
    const Complex im(0.0, 1.0);
    for (std::size_t k = 0; k < s; ++k)
        for (std::size_t l = k + 1; l < s; ++l) {
            const Matrix t = d.pair_operator(k, l);
            candidates.push_back(hermitian_coords(t + t.adjoint()));
            candidates.push_back(hermitian_coords(im * (t - t.adjoint())));
        }
    double largest = 0.0;
    for (const auto& c : candidates)
        largest = std::max(largest, c.norm());

    // Modified Gram-Schmidt with one reorthogonalization pass.
    std::vector<Eigen::VectorXd> q;
    for (auto& c : candidates) {
        const double orig = c.norm();
        if (orig <= kMgsZeroEps * largest)
            continue;
        project_out(q, c);
        project_out(q, c);
        if (c.norm() > kMgsDropEps * orig)
            q.push_back(c / c.norm());
    }
    if (static_cast<Eigen::Index>(q.size()) >= dim)
        fail(errc::internal, "generator span unexpectedly fills the operator space on side " +
                                 bp.to_string());

    // First canonical Hermitian direction with a component outside the span.
    Eigen::VectorXd direction;
    for (Eigen::Index i = 0; i < dim; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Unit(dim, i);
        project_out(q, e);
        project_out(q, e);
        if (e.norm() > kComplementEps) {
            direction = e / e.norm();
            break;
        }
    }
    if (direction.size() == 0)
        fail(errc::internal, "no usable complement direction on side " + bp.to_string());

    PovmCertificate cert;
    cert.bipartition = bp;
    cert.measuring = measuring;
    Matrix m0 = hermitian_from_coords(direction, dq);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m0);
    const double amax = eig.eigenvalues().cwiseAbs().maxCoeff();
    cert.m_b = m0 * (0.25 / amax);
    cert.m_1 = 0.5 * Matrix::Identity(dq, dq) + cert.m_b;
    cert.m_2 = Matrix::Identity(dq, dq) - cert.m_1;

    cert.hermitian = (cert.m_b - cert.m_b.adjoint()).norm() <= kCheckEps * std::max(1.0, cert.m_b.norm());
    Eigen::SelfAdjointEigenSolver<Matrix> e1(cert.m_1), e2(cert.m_2);
    cert.psd = e1.eigenvalues().minCoeff() >= -kCheckEps && e2.eigenvalues().minCoeff() >= -kCheckEps;
    cert.completes_to_identity =
        ((cert.m_1 + cert.m_2) - Matrix::Identity(dq, dq)).cwiseAbs().maxCoeff() == 0.0;
    const OpmVerdict v = verify_opm(set, bp, measuring, cert.m_1, tol);
    cert.orthogonality_preserving = v.preserving;
    cert.nontrivial = v.nontrivial;
    return cert;
}

OpmVerdict verify_opm(const StateSet& set, const Bipartition& bp, Side measuring, const Matrix& m,
                      const TolerancePolicy& tol) {
    validate(tol);
    if (bp.party_count() != set.shape().party_count())
        fail(errc::invalid_argument, "bipartition does not match the set's shape");
    const Eigen::Index dq =
        static_cast<Eigen::Index>(subsystem_dim(set.shape(), bp.parties(measuring)));
    if (m.rows() != dq || m.cols() != dq)
        fail(errc::invalid_argument, "operator dimension " + std::to_string(m.rows()) +
                                         " does not match the measured side dimension " +
                                         std::to_string(dq));
    const auto& other = bp.parties(other_side(measuring));
    const std::size_t s = set.cardinality();
    std::vector<Matrix> comps;
    comps.reserve(s);
    std::vector<double> norms;
    for (const auto& psi : set.states()) {
        comps.push_back(components_over(psi, other));
        norms.push_back(psi.norm());
    }
    const double m_norm = m.norm();
    OpmVerdict out;
    out.preserving = true;
    for (std::size_t k = 0; k < s && out.preserving; ++k)
        for (std::size_t l = 0; l < s; ++l) {
            if (k == l)
                continue;
            // <psi_k| (I (x) M) |psi_l> = sum_a <psi_{k,a}| M |psi_{l,a}>
            const Complex val = ((comps[k].conjugate() * m).cwiseProduct(comps[l])).sum();
            if (std::abs(val) > tol.orth_eps * norms[k] * norms[l] * m_norm) {
                out.preserving = false;
                break;
            }
        }
    const Complex mean = m.trace() / static_cast<double>(dq);
    out.nontrivial = (m - mean * Matrix::Identity(dq, dq)).norm() > tol.orth_eps * m_norm;
    return out;
}

CardinalityBounds cardinality_bounds(const SystemShape& shape) {
    CardinalityBounds out;
    std::size_t dmax = 0;
    for (int i = 0; i < shape.party_count(); ++i)
        dmax = std::max(dmax, static_cast<std::size_t>(shape.dim(i)));
    out.lower_single = dmax + 1;
    if (shape.party_count() >= 2) {
        std::size_t cmax = 0;
        for (int i = 0; i < shape.party_count(); ++i)
            cmax = std::max(cmax, shape.complement_dim(i));
        out.lower_every = cmax + 1;
    }
    return out;
}

bool classify_two_qubit(const StateSet& set, const TolerancePolicy& tol) {
    validate(tol);
    if (set.shape() != SystemShape({2, 2}))
        fail(errc::invalid_argument, "this classification applies to two-qubit sets only");
    if (set.cardinality() < 3)
        return false;
    std::size_t entangled = 0;
    for (const auto& psi : set.states())
        if (numerical_rank(components_over(psi, {0}), tol).rank == 2)
            ++entangled;
    return entangled >= 2;
}

} // namespace qstable
