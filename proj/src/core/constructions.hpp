#pragma once

#include <vector>

#include "shape.hpp"
#include "states.hpp"

namespace qstable {

// Parameters of the weight-class Fourier construction: the basis is split
// into weight classes C_0, ..., C_N; classes 0..N-1 each contribute a
// discrete-Fourier family over their span. bijections[k], when nonempty,
// permutes the exponents of class k (bijections[k][pos] is the Fourier index
// assigned to the pos-th string of the class in lexicographic order); an
// empty entry means the identity assignment.
struct WeightFourierSpec {
    SystemShape shape;
    std::vector<std::vector<int>> bijections;  // empty, or one entry per class 0..N-1
};

// The union of the N Fourier families. Cardinality = prod d_i - prod (d_i-1).
// Amplitudes are unit-modulus roots of unity; states are unnormalized.
StateSet weight_fourier_set(const WeightFourierSpec& spec);

// Same with the weight-0 family {|0...0>} replaced by |0...0> +- |1...1>,
// making every member genuinely entangled. Cardinality grows by one.
StateSet weight_fourier_genuine_set(const WeightFourierSpec& spec);

enum class Pauli { I, X, Y, Z };

Matrix pauli_matrix(Pauli p);

// A tensor product of single-qubit Pauli letters, one per party.
struct PauliWord {
    std::vector<Pauli> letters;

    Matrix dense() const;  // the full 2^n matrix
    StateVector apply(const StateVector& psi) const;
};

// U = sum_l Z_1 ... Z_{l-1} X_l: maps each basis state to a superposition of
// its single-bit flips with parity signs. Satisfies U U^H = n I.
Matrix w_state_operator(int n, int cap = 12);

// |W_n> = |10...0> + |010...0> + ... + |0...01>, integer amplitudes.
StateVector w_state(int n);

// The 2^n images U|i>, ordered by flat index i. Pairwise orthogonal, every
// member locally unitary equivalent to |W_n>.
StateSet w_state_basis(int n, int cap = 12);

// The local circuit (X layer, then Z layer) that maps U|i> back to |W_n>
// exactly, together with the state it produces.
struct CanonicalCircuit {
    std::vector<PauliWord> layers;  // applied front to back
    StateVector result;
};

CanonicalCircuit w_canonicalize(const MultiIndex& i, int n);

// {|00> + |11>, |00> - |11>, |01> + |10>} on two qubits.
StateSet bell_set();

} // namespace qstable
