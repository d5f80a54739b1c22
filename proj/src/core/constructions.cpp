#include "constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace qstable {
namespace {

// exp(2*pi*i*m/c) for m = 0..c-1, with the quarter-turn values kept exact so
// small constructions come out with integer / purely imaginary entries.
std::vector<Complex> roots_of_unity(int c) {
    std::vector<Complex> roots(static_cast<std::size_t>(c));
    for (int m = 0; m < c; ++m) {
        if (m == 0)
            roots[m] = {1.0, 0.0};
        else if (4 * m == c)
            roots[m] = {0.0, 1.0};
        else if (2 * m == c)
            roots[m] = {-1.0, 0.0};
        else if (4 * m == 3 * c)
            roots[m] = {0.0, -1.0};
        else {
            const double angle = 2.0 * std::numbers::pi * m / c;
            roots[m] = {std::cos(angle), std::sin(angle)};
        }
    }
    return roots;
}

std::string dims_label(const SystemShape& shape) {
    std::ostringstream os;
    for (std::size_t i = 0; i < shape.dims().size(); ++i)
        os << (i ? "," : "") << shape.dims()[i];
    return os.str();
}

std::vector<int> exponent_map(const WeightFourierSpec& spec, int k, int class_size) {
    std::vector<int> f(static_cast<std::size_t>(class_size));
    std::iota(f.begin(), f.end(), 0);
    if (spec.bijections.empty())
        return f;
    if (static_cast<int>(spec.bijections.size()) != spec.shape.party_count())
        fail(errc::invalid_argument, "need one exponent bijection per weight class");
    const auto& given = spec.bijections[static_cast<std::size_t>(k)];
    if (given.empty())
        return f;
    if (static_cast<int>(given.size()) != class_size)
        fail(errc::invalid_argument, "exponent bijection for class " + std::to_string(k) +
                                         " must have " + std::to_string(class_size) + " entries");
    std::vector<bool> seen(static_cast<std::size_t>(class_size), false);
    for (int v : given) {
        if (v < 0 || v >= class_size || seen[static_cast<std::size_t>(v)])
            fail(errc::invalid_argument,
                 "exponent map for class " + std::to_string(k) + " is not a bijection");
        seen[static_cast<std::size_t>(v)] = true;
    }
    return given;
}

// The Fourier family over weight class k: state i has amplitude
// omega_c^(i * f(pos)) on the pos-th class member.
void append_fourier_family(const WeightFourierSpec& spec, int k, std::vector<StateVector>& out) {
    const SystemShape& shape = spec.shape;
    const auto cls = weight_class(shape, k);
    const int c = static_cast<int>(cls.size());
    const auto f = exponent_map(spec, k, c);
    const auto roots = roots_of_unity(c);
    std::vector<std::size_t> slots(cls.size());
    for (std::size_t pos = 0; pos < cls.size(); ++pos)
        slots[pos] = flat_index(cls[pos], shape);
    for (int i = 0; i < c; ++i) {
        Vector amps = Vector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
        for (std::size_t pos = 0; pos < cls.size(); ++pos) {
            const int m = static_cast<int>((static_cast<long long>(i) * f[pos]) % c);
            amps[static_cast<Eigen::Index>(slots[pos])] = roots[static_cast<std::size_t>(m)];
        }
        out.emplace_back(shape, std::move(amps));
    }
}

void require_multiparty(const WeightFourierSpec& spec) {
    if (spec.shape.party_count() < 2)
        fail(errc::invalid_argument, "the weight-class construction needs at least two parties");
}

} // namespace

StateSet weight_fourier_set(const WeightFourierSpec& spec) {
    require_multiparty(spec);
    std::vector<StateVector> states;
    for (int k = 0; k < spec.shape.party_count(); ++k)
        append_fourier_family(spec, k, states);
    return StateSet(spec.shape, std::move(states), "weight-fourier(" + dims_label(spec.shape) + ")");
}

StateSet weight_fourier_genuine_set(const WeightFourierSpec& spec) {
    require_multiparty(spec);
    const SystemShape& shape = spec.shape;
    std::vector<StateVector> states;
    for (int k = 1; k < shape.party_count(); ++k)
        append_fourier_family(spec, k, states);
    const std::size_t zero = 0;
    const std::size_t ones =
        flat_index(MultiIndex(static_cast<std::size_t>(shape.party_count()), 1), shape);
    for (double sign : {1.0, -1.0}) {
        Vector amps = Vector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
        amps[static_cast<Eigen::Index>(zero)] = Complex(1.0, 0.0);
        amps[static_cast<Eigen::Index>(ones)] = Complex(sign, 0.0);
        states.emplace_back(shape, std::move(amps));
    }
    return StateSet(shape, std::move(states),
                    "weight-fourier-genuine(" + dims_label(shape) + ")");
}

Matrix pauli_matrix(Pauli p) {
    Matrix m(2, 2);
    switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << Complex(0, 0), Complex(0, 1), Complex(0, -1), Complex(0, 0); break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

Matrix PauliWord::dense() const {
    if (letters.empty())
        fail(errc::invalid_argument, "empty Pauli word");
    Matrix out = Matrix::Ones(1, 1);
    for (Pauli p : letters) {
        const Matrix letter = pauli_matrix(p);
        Matrix next(out.rows() * 2, out.cols() * 2);
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j)
                next.block(2 * i, 2 * j, 2, 2) = out(i, j) * letter;
        out = std::move(next);
    }
    return out;
}

StateVector PauliWord::apply(const StateVector& psi) const {
    const SystemShape& shape = psi.shape();
    if (static_cast<int>(letters.size()) != shape.party_count())
        fail(errc::invalid_argument, "Pauli word length does not match the party count");
    for (int p = 0; p < shape.party_count(); ++p)
        if (shape.dim(p) != 2)
            fail(errc::invalid_argument, "Pauli words act on qubits only");
    StateVector out = psi;
    for (int p = 0; p < shape.party_count(); ++p) {
        const Pauli letter = letters[static_cast<std::size_t>(p)];
        if (letter == Pauli::I)
            continue;
        out = apply_local_unitary(out, p, pauli_matrix(letter));
    }
    return out;
}

Matrix w_state_operator(int n, int cap) {
    if (n < 2)
        fail(errc::invalid_argument, "the operator needs at least two qubits");
    if (cap < 2 || cap > 30)
        fail(errc::invalid_argument, "unreasonable dense-storage cap");
    if (n > cap)
        fail(errc::limit_exceeded, "n = " + std::to_string(n) +
                                       " exceeds the dense-storage cap of " + std::to_string(cap));
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix u = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        int parity = 0;  // sum of the digits before the flipped one
        for (int p = 0; p < n; ++p) {
            const Eigen::Index bit = Eigen::Index{1} << (n - 1 - p);
            u(i ^ bit, i) += parity % 2 ? -1.0 : 1.0;
            parity += (i & bit) ? 1 : 0;
        }
    }
    return u;
}

StateVector w_state(int n) {
    if (n < 2)
        fail(errc::invalid_argument, "need at least two qubits");
    const SystemShape shape(std::vector<int>(static_cast<std::size_t>(n), 2));
    Vector amps = Vector::Zero(static_cast<Eigen::Index>(shape.total_dim()));
    for (int p = 0; p < n; ++p)
        amps[Eigen::Index{1} << (n - 1 - p)] = Complex(1.0, 0.0);
    return StateVector(shape, std::move(amps));
}

StateSet w_state_basis(int n, int cap) {
    if (n < 3)
        fail(errc::invalid_argument, "the basis is defined for n >= 3");
    const Matrix u = w_state_operator(n, cap);
    const SystemShape shape(std::vector<int>(static_cast<std::size_t>(n), 2));
    std::vector<StateVector> states;
    states.reserve(static_cast<std::size_t>(u.cols()));
    for (Eigen::Index i = 0; i < u.cols(); ++i)
        states.emplace_back(shape, u.col(i));
    return StateSet(shape, std::move(states), "w-basis(" + std::to_string(n) + ")");
}

CanonicalCircuit w_canonicalize(const MultiIndex& i, int n) {
    if (n < 3)
        fail(errc::invalid_argument, "canonicalization is defined for n >= 3");
    if (static_cast<int>(i.size()) != n)
        fail(errc::invalid_argument, "index has wrong number of digits");
    for (int digit : i)
        if (digit != 0 && digit != 1)
            fail(errc::invalid_argument, "index digits must be bits");

    PauliWord xs, zs;
    int parity = 0;
    for (int p = 0; p < n; ++p) {
        xs.letters.push_back(i[static_cast<std::size_t>(p)] ? Pauli::X : Pauli::I);
        zs.letters.push_back(parity % 2 ? Pauli::Z : Pauli::I);
        parity += i[static_cast<std::size_t>(p)];
    }

    const SystemShape shape(std::vector<int>(static_cast<std::size_t>(n), 2));
    const Matrix u = w_state_operator(n);
    StateVector image(shape, u.col(static_cast<Eigen::Index>(flat_index(i, shape))));
    CanonicalCircuit out{{xs, zs}, zs.apply(xs.apply(image))};
    return out;
}

StateSet bell_set() {
    const SystemShape shape({2, 2});
    auto make = [&shape](Complex a00, Complex a01, Complex a10, Complex a11) {
        Vector v(4);
        v << a00, a01, a10, a11;
        return StateVector(shape, std::move(v));
    };
    std::vector<StateVector> states;
    states.push_back(make(1, 0, 0, 1));
    states.push_back(make(1, 0, 0, -1));
    states.push_back(make(0, 1, 1, 0));
    return StateSet(shape, std::move(states), "bell");
}

} // namespace qstable
