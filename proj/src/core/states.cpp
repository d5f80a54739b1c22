#include "states.hpp"

#include <algorithm>
#include <cmath>

namespace qstable {
namespace {

// Strides of each party in the flat index (party 0 most significant).
std::vector<std::size_t> strides_of(const SystemShape& shape) {
    std::vector<std::size_t> s(static_cast<std::size_t>(shape.party_count()), 1);
    for (int p = shape.party_count() - 2; p >= 0; --p)
        s[static_cast<std::size_t>(p)] = s[static_cast<std::size_t>(p) + 1] *
                                         static_cast<std::size_t>(shape.dim(p + 1));
    return s;
}

std::vector<int> complement_of(const std::vector<int>& parties, int party_count) {
    std::vector<int> rest;
    for (int p = 0; p < party_count; ++p)
        if (!std::binary_search(parties.begin(), parties.end(), p))
            rest.push_back(p);
    return rest;
}

void check_parties(const std::vector<int>& parties, const SystemShape& shape) {
    if (parties.empty())
        fail(errc::invalid_argument, "party subset must be nonempty");
    if (!std::is_sorted(parties.begin(), parties.end()))
        fail(errc::invalid_argument, "party subset must be sorted");
    for (int p : parties)
        if (p < 0 || p >= shape.party_count())
            fail(errc::invalid_argument, "party index out of range");
}

// flat full index -> (flat index over P, flat index over Q) for a fixed split.
struct SplitIndexer {
    SplitIndexer(const SystemShape& shape, const std::vector<int>& parties)
        : shape_(&shape), strides_(strides_of(shape)) {
        p_parties_ = parties;
        q_parties_ = complement_of(parties, shape.party_count());
    }

    std::size_t dim_p() const { return subsystem_dim(*shape_, p_parties_); }
    std::size_t dim_q() const { return subsystem_dim(*shape_, q_parties_); }

    std::pair<std::size_t, std::size_t> split(std::size_t flat) const {
        std::size_t a = 0, b = 0;
        for (int p : p_parties_)
            a = a * static_cast<std::size_t>(shape_->dim(p)) + digit(flat, p);
        for (int q : q_parties_)
            b = b * static_cast<std::size_t>(shape_->dim(q)) + digit(flat, q);
        return {a, b};
    }

    std::size_t digit(std::size_t flat, int party) const {
        return (flat / strides_[static_cast<std::size_t>(party)]) %
               static_cast<std::size_t>(shape_->dim(party));
    }

    const SystemShape* shape_;
    std::vector<std::size_t> strides_;
    std::vector<int> p_parties_;
    std::vector<int> q_parties_;
};

} // namespace

StateVector::StateVector(SystemShape shape, Vector amplitudes)
    : shape_(std::move(shape)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != shape_.total_dim())
        fail(errc::invalid_argument, "amplitude array length must equal the total dimension");
    if (!amps_.allFinite())
        fail(errc::invalid_argument, "amplitudes must be finite");
    if (amps_.isZero(0.0))
        fail(errc::invalid_argument, "the zero vector is not a state");
}

StateVector StateVector::basis_state(const SystemShape& shape, const MultiIndex& m) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
    v[static_cast<Eigen::Index>(flat_index(m, shape))] = Complex(1, 0);
    return StateVector(shape, std::move(v));
}

Complex inner(const StateVector& a, const StateVector& b) {
    if (a.shape() != b.shape())
        fail(errc::invalid_argument, "inner product requires matching shapes");
    return a.amps().dot(b.amps());
}

Matrix components_over(const StateVector& psi, const std::vector<int>& parties) {
    check_parties(parties, psi.shape());
    if (static_cast<int>(parties.size()) == psi.shape().party_count())
        fail(errc::invalid_argument, "decomposition needs a proper party subset");
    SplitIndexer ix(psi.shape(), parties);
    Matrix c = Matrix::Zero(static_cast<Eigen::Index>(ix.dim_p()), static_cast<Eigen::Index>(ix.dim_q()));
    for (std::size_t t = 0; t < psi.shape().total_dim(); ++t) {
        const auto [a, b] = ix.split(t);
        c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = psi.amps()[static_cast<Eigen::Index>(t)];
    }
    return c;
}

std::vector<std::pair<MultiIndex, Vector>> decompose(const StateVector& psi, const Bipartition& bp) {
    if (bp.party_count() != psi.shape().party_count())
        fail(errc::invalid_argument, "bipartition does not match the state's shape");
    const Matrix c = components_over(psi, bp.left());
    std::vector<int> left_dims;
    for (int p : bp.left())
        left_dims.push_back(psi.shape().dim(p));
    const SystemShape left_shape(left_dims);
    std::vector<std::pair<MultiIndex, Vector>> out;
    out.reserve(static_cast<std::size_t>(c.rows()));
    for (Eigen::Index a = 0; a < c.rows(); ++a)
        out.emplace_back(unflatten(static_cast<std::size_t>(a), left_shape), c.row(a).transpose());
    return out;
}

StateVector compose(const SystemShape& shape, const std::vector<int>& parties, const Matrix& components) {
    check_parties(parties, shape);
    SplitIndexer ix(shape, parties);
    if (static_cast<std::size_t>(components.rows()) != ix.dim_p() ||
        static_cast<std::size_t>(components.cols()) != ix.dim_q())
        fail(errc::invalid_argument, "component matrix has the wrong dimensions");
    Vector v(static_cast<Eigen::Index>(shape.total_dim()));
    for (std::size_t t = 0; t < shape.total_dim(); ++t) {
        const auto [a, b] = ix.split(t);
        v[static_cast<Eigen::Index>(t)] = components(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
    return StateVector(shape, std::move(v));
}

StateVector apply_local_unitary(const StateVector& psi, int party, const Matrix& u) {
    const SystemShape& shape = psi.shape();
    if (party < 0 || party >= shape.party_count())
        fail(errc::invalid_argument, "party index out of range");
    const int d = shape.dim(party);
    if (u.rows() != d || u.cols() != d)
        fail(errc::invalid_argument, "operator dimension does not match the party");
    const auto strides = strides_of(shape);
    const std::size_t stride = strides[static_cast<std::size_t>(party)];
    Vector out(psi.amps().size());
    Vector fiber(d);
    for (std::size_t t = 0; t < shape.total_dim(); ++t) {
        if ((t / stride) % static_cast<std::size_t>(d) != 0)
            continue; // visit each fiber once, at digit 0
        for (int x = 0; x < d; ++x)
            fiber[x] = psi.amps()[static_cast<Eigen::Index>(t + static_cast<std::size_t>(x) * stride)];
        Vector mapped = u * fiber;
        for (int x = 0; x < d; ++x)
            out[static_cast<Eigen::Index>(t + static_cast<std::size_t>(x) * stride)] = mapped[x];
    }
    return StateVector(shape, std::move(out));
}

StateSet::StateSet(SystemShape shape, std::vector<StateVector> states, std::string label, double orth_eps)
    : shape_(std::move(shape)), states_(std::move(states)), label_(std::move(label)) {
    for (const auto& s : states_)
        if (s.shape() != shape_)
            fail(errc::invalid_argument, "all states in a set must share the same shape");
    if (states_.size() < 2)
        return;
    // One Gram product instead of s^2 dot calls; off-diagonals are the overlaps.
    Matrix a(static_cast<Eigen::Index>(shape_.total_dim()), static_cast<Eigen::Index>(states_.size()));
    for (std::size_t k = 0; k < states_.size(); ++k)
        a.col(static_cast<Eigen::Index>(k)) = states_[k].amps();
    const Matrix gram = a.adjoint() * a;
    for (std::size_t k = 0; k < states_.size(); ++k)
        for (std::size_t l = k + 1; l < states_.size(); ++l) {
            const double scale = std::sqrt(gram(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real() *
                                           gram(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l)).real());
            const double overlap = std::abs(gram(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)));
            if (overlap > orth_eps * scale)
                fail(errc::orthogonality_violation,
                     "states " + std::to_string(k + 1) + " and " + std::to_string(l + 1) +
                         " are not orthogonal (relative overlap " + std::to_string(overlap / scale) + ")");
        }
}

StateSet StateSet::subset(std::span<const std::size_t> indices, std::string label) const {
    std::vector<StateVector> picked;
    picked.reserve(indices.size());
    for (std::size_t i : indices)
        picked.push_back(state(i));
    return StateSet(shape_, std::move(picked), label.empty() ? label_ : std::move(label));
}

StateSet StateSet::locally_rotated(const std::vector<Matrix>& unitaries) const {
    if (static_cast<int>(unitaries.size()) != shape_.party_count())
        fail(errc::invalid_argument, "need one unitary per party");
    std::vector<StateVector> rotated;
    rotated.reserve(states_.size());
    for (const auto& s : states_) {
        StateVector r = s;
        for (int p = 0; p < shape_.party_count(); ++p)
            r = apply_local_unitary(r, p, unitaries[static_cast<std::size_t>(p)]);
        rotated.push_back(std::move(r));
    }
    return StateSet(shape_, std::move(rotated), label_);
}

} // namespace qstable
