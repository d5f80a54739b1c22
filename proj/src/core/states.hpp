#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shape.hpp"

namespace qstable {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// An unnormalized pure state over the computational product basis, amplitudes
// in flat-index order. Never the zero vector.
class StateVector {
public:
    StateVector(SystemShape shape, Vector amplitudes);

    const SystemShape& shape() const noexcept { return shape_; }
    const Vector& amps() const noexcept { return amps_; }
    double norm() const { return amps_.norm(); }

    static StateVector basis_state(const SystemShape& shape, const MultiIndex& m);

private:
    SystemShape shape_;
    Vector amps_;
};

// <a|b>, conjugate-linear in the first argument.
Complex inner(const StateVector& a, const StateVector& b);

// Component matrix of psi for the split (parties | complement): entry (a, b)
// is the amplitude of |a>_P |b>_Q after regrouping the P parties in front.
// Row a is the unnormalized component |psi_a> of dimension d_Q.
Matrix components_over(const StateVector& psi, const std::vector<int>& parties);

// Spec'd decomposition across a bipartition: one (left basis index, right
// component) entry per left basis state, zero components included.
std::vector<std::pair<MultiIndex, Vector>> decompose(const StateVector& psi, const Bipartition& bp);

// Inverse of components_over: rebuilds the full state from the component
// matrix of the given party subset.
StateVector compose(const SystemShape& shape, const std::vector<int>& parties, const Matrix& components);

// (U acting on one party) |psi>, all other parties untouched.
StateVector apply_local_unitary(const StateVector& psi, int party, const Matrix& u);

// A pairwise-orthogonal collection of states over one shape.
class StateSet {
public:
    StateSet(SystemShape shape, std::vector<StateVector> states, std::string label = "",
             double orth_eps = 1e-10);

    const SystemShape& shape() const noexcept { return shape_; }
    std::size_t cardinality() const noexcept { return states_.size(); }
    const StateVector& state(std::size_t k) const { return states_.at(k); }
    const std::vector<StateVector>& states() const noexcept { return states_; }
    const std::string& label() const noexcept { return label_; }

    StateSet subset(std::span<const std::size_t> indices, std::string label = "") const;

    // Same set with U_p applied on every party p.
    StateSet locally_rotated(const std::vector<Matrix>& unitaries) const;

private:
    SystemShape shape_;
    std::vector<StateVector> states_;
    std::string label_;
};

} // namespace qstable
