#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "core/constructions.hpp"

using namespace qstable;

namespace {

// prod d_i - prod (d_i - 1)
std::size_t expected_cardinality(const std::vector<int>& dims) {
    std::size_t all = 1, interior = 1;
    for (int d : dims) {
        all *= static_cast<std::size_t>(d);
        interior *= static_cast<std::size_t>(d - 1);
    }
    return all - interior;
}

} // namespace

TEST_CASE("weight-class fourier set cardinalities") {
    for (const auto& dims :
         {std::vector<int>{2, 2}, {2, 2, 2}, {2, 2, 3}, {3, 3}, {2, 3, 4}, {2, 2, 2, 2}}) {
        const StateSet set = weight_fourier_set({SystemShape(dims), {}});
        CHECK(set.cardinality() == expected_cardinality(dims));
        CHECK(set.shape() == SystemShape(dims));
    }
    CHECK_THROWS_AS(weight_fourier_set({SystemShape({4}), {}}), error);
}

TEST_CASE("fourier families use unit-modulus weights over each class") {
    const StateSet set = weight_fourier_set({SystemShape({2, 2, 2}), {}});
    REQUIRE(set.cardinality() == 7);

    // family over class 0 = {|000>}
    CHECK(set.state(0).amps()[0] == Complex(1, 0));
    CHECK(set.state(0).amps().tail(7).norm() == 0.0);

    // family over class 1 = {|001>, |010>, |100>} at flats 1, 2, 4
    const Complex w3 = std::exp(Complex(0, 2.0 * std::numbers::pi / 3.0));
    for (int m = 0; m < 3; ++m) {
        const Vector& v = set.state(static_cast<std::size_t>(1 + m)).amps();
        const Eigen::Index slots[3] = {1, 2, 4};
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(v[slots[j]] - std::pow(w3, m * j)) < 1e-14);
        CHECK(v[0] == Complex(0, 0));
        CHECK(v[3] == Complex(0, 0));
        CHECK(v[7] == Complex(0, 0));
    }

    // family over class 2 = {|011>, |101>, |110>} at flats 3, 5, 6
    for (int m = 0; m < 3; ++m) {
        const Vector& v = set.state(static_cast<std::size_t>(4 + m)).amps();
        const Eigen::Index slots[3] = {3, 5, 6};
        for (int j = 0; j < 3; ++j)
            CHECK(std::abs(v[slots[j]] - std::pow(w3, m * j)) < 1e-14);
    }

    // every support amplitude has modulus exactly 1
    for (const auto& psi : set.states())
        for (Eigen::Index i = 0; i < psi.amps().size(); ++i) {
            const double mag = std::abs(psi.amps()[i]);
            CHECK((mag == 0.0 || std::abs(mag - 1.0) < 1e-14));
        }
}

TEST_CASE("quarter-turn roots come out exact") {
    // classes of size 4 on (2,2,3): member m=1 hits i, -1, -i exactly
    const StateSet set = weight_fourier_set({SystemShape({2, 2, 3}), {}});
    const auto cls = weight_class(SystemShape({2, 2, 3}), 1);
    REQUIRE(cls.size() == 4);
    const Vector& v = set.state(2).amps();  // class-1 family, m = 1
    const SystemShape s({2, 2, 3});
    CHECK(v[static_cast<Eigen::Index>(flat_index(cls[0], s))] == Complex(1, 0));
    CHECK(v[static_cast<Eigen::Index>(flat_index(cls[1], s))] == Complex(0, 1));
    CHECK(v[static_cast<Eigen::Index>(flat_index(cls[2], s))] == Complex(-1, 0));
    CHECK(v[static_cast<Eigen::Index>(flat_index(cls[3], s))] == Complex(0, -1));
}

TEST_CASE("exponent bijections permute phases but keep orthogonality") {
    WeightFourierSpec spec{SystemShape({2, 2, 2}), {{}, {2, 0, 1}, {}}};
    const StateSet set = weight_fourier_set(spec);
    CHECK(set.cardinality() == 7);
    // m=1 member of class 1 now carries exponents 2,0,1 at flats 1,2,4
    const Complex w3 = std::exp(Complex(0, 2.0 * std::numbers::pi / 3.0));
    const Vector& v = set.state(2).amps();
    CHECK(std::abs(v[1] - std::pow(w3, 2)) < 1e-14);
    CHECK(std::abs(v[2] - Complex(1, 0)) < 1e-14);
    CHECK(std::abs(v[4] - std::pow(w3, 1)) < 1e-14);

    WeightFourierSpec bad{SystemShape({2, 2, 2}), {{}, {0, 0, 1}, {}}};
    CHECK_THROWS_AS(weight_fourier_set(bad), error);
    WeightFourierSpec short_map{SystemShape({2, 2, 2}), {{}, {0, 1}, {}}};
    CHECK_THROWS_AS(weight_fourier_set(short_map), error);
    WeightFourierSpec wrong_count{SystemShape({2, 2, 2}), {{}, {}}};
    CHECK_THROWS_AS(weight_fourier_set(wrong_count), error);
}

TEST_CASE("genuine variant swaps the corner states in") {
    const StateSet set = weight_fourier_genuine_set({SystemShape({2, 2, 2}), {}});
    REQUIRE(set.cardinality() == 8);
    // last two members are |000> + |111> and |000> - |111>
    const Vector& plus = set.state(6).amps();
    const Vector& minus = set.state(7).amps();
    CHECK(plus[0] == Complex(1, 0));
    CHECK(plus[7] == Complex(1, 0));
    CHECK(minus[0] == Complex(1, 0));
    CHECK(minus[7] == Complex(-1, 0));
    for (Eigen::Index i = 1; i < 7; ++i) {
        CHECK(plus[i] == Complex(0, 0));
        CHECK(minus[i] == Complex(0, 0));
    }
    CHECK(weight_fourier_genuine_set({SystemShape({2, 2, 3}), {}}).cardinality() == 11);
}

TEST_CASE("pauli matrices and words") {
    CHECK(pauli_matrix(Pauli::I) == Matrix::Identity(2, 2));
    const Matrix x = pauli_matrix(Pauli::X);
    const Matrix y = pauli_matrix(Pauli::Y);
    const Matrix z = pauli_matrix(Pauli::Z);
    CHECK((x * x - Matrix::Identity(2, 2)).norm() == 0.0);
    CHECK((y * y - Matrix::Identity(2, 2)).norm() == 0.0);
    CHECK((x * z + z * x).norm() == 0.0);  // anticommute
    CHECK((Complex(0, 1) * x * y - z).norm() == 0.0);

    const PauliWord word{{Pauli::Z, Pauli::X}};
    const Matrix dense = word.dense();
    REQUIRE(dense.rows() == 4);
    // Z (x) X acting on |10> = -|11>
    const SystemShape s({2, 2});
    const StateVector out = word.apply(StateVector::basis_state(s, {1, 0}));
    CHECK(out.amps()[3] == Complex(-1, 0));
    CHECK((dense * StateVector::basis_state(s, {1, 0}).amps() - out.amps()).norm() == 0.0);

    CHECK_THROWS_AS(PauliWord{{}}.dense(), error);
    CHECK_THROWS_AS(word.apply(StateVector::basis_state(SystemShape({2}), {0})), error);
    CHECK_THROWS_AS(PauliWord{{Pauli::X}}.apply(StateVector::basis_state(SystemShape({3}), {0})),
                    error);
}

TEST_CASE("flip operator satisfies U U^H = n I with integer entries") {
    for (int n = 2; n <= 8; ++n) {
        const Matrix u = w_state_operator(n);
        const Eigen::Index dim = Eigen::Index{1} << n;
        REQUIRE(u.rows() == dim);
        const Matrix gram = u * u.adjoint();
        CHECK((gram - static_cast<double>(n) * Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <
              1e-12);
        for (Eigen::Index j = 0; j < dim; ++j)
            for (Eigen::Index i = 0; i < dim; ++i) {
                const double re = u(i, j).real();
                CHECK(u(i, j).imag() == 0.0);
                CHECK((re == 0.0 || re == 1.0 || re == -1.0));
            }
    }
    CHECK_THROWS_AS(w_state_operator(1), error);
    CHECK_THROWS_AS(w_state_operator(13), error);  // default dense cap
    CHECK_THROWS_AS(w_state_operator(5, 4), error);
    CHECK_THROWS_AS(w_state_operator(5, 31), error);  // cap itself is bounded
    try {
        w_state_operator(13);
        FAIL("expected a throw");
    } catch (const error& e) {
        CHECK(e.code() == errc::limit_exceeded);
    }
}

TEST_CASE("the n=3 image basis, frozen sign for sign") {
    // columns of U on 3 qubits, amplitudes in flat order 000..111
    const double expect[8][8] = {
        {0, 1, 1, 0, 1, 0, 0, 0},   // U|000>
        {1, 0, 0, 1, 0, 1, 0, 0},   // U|001>
        {1, 0, 0, -1, 0, 0, 1, 0},  // U|010>
        {0, 1, -1, 0, 0, 0, 0, 1},  // U|011>
        {1, 0, 0, 0, 0, -1, -1, 0}, // U|100>
        {0, 1, 0, 0, -1, 0, 0, -1}, // U|101>
        {0, 0, 1, 0, -1, 0, 0, 1},  // U|110>
        {0, 0, 0, 1, 0, -1, 1, 0},  // U|111>
    };
    const StateSet basis = w_state_basis(3);
    REQUIRE(basis.cardinality() == 8);
    for (std::size_t k = 0; k < 8; ++k)
        for (Eigen::Index i = 0; i < 8; ++i)
            CHECK(basis.state(k).amps()[i] ==
                  Complex(expect[k][static_cast<std::size_t>(i)], 0.0));
}

TEST_CASE("image basis columns match the operator and stay orthogonal") {
    for (int n : {3, 4, 5}) {
        const StateSet basis = w_state_basis(n);
        const Matrix u = w_state_operator(n);
        REQUIRE(basis.cardinality() == (std::size_t{1} << n));
        for (std::size_t k = 0; k < basis.cardinality(); ++k)
            CHECK((basis.state(k).amps() - u.col(static_cast<Eigen::Index>(k))).norm() == 0.0);
    }
    CHECK_THROWS_AS(w_state_basis(2), error);
}

TEST_CASE("w_state has unit weight-1 amplitudes") {
    const StateVector w = w_state(3);
    CHECK(w.amps()[1] == Complex(1, 0));
    CHECK(w.amps()[2] == Complex(1, 0));
    CHECK(w.amps()[4] == Complex(1, 0));
    CHECK(w.norm() == doctest::Approx(std::sqrt(3.0)));
    CHECK(w_state(5).norm() == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("canonicalization maps every image back to the hub state exactly") {
    for (int n = 3; n <= 6; ++n) {
        const SystemShape shape(std::vector<int>(static_cast<std::size_t>(n), 2));
        const StateSet basis = w_state_basis(n);
        const Vector hub = w_state(n).amps();
        for (std::size_t t = 0; t < basis.cardinality(); ++t) {
            const MultiIndex idx = unflatten(t, shape);
            const CanonicalCircuit c = w_canonicalize(idx, n);
            REQUIRE(c.layers.size() == 2);
            // first layer: bit flips where the index is 1; second: phases only
            for (int p = 0; p < n; ++p) {
                const Pauli x = c.layers[0].letters[static_cast<std::size_t>(p)];
                CHECK((x == Pauli::I || x == Pauli::X));
                CHECK((x == Pauli::X) == (idx[static_cast<std::size_t>(p)] == 1));
                const Pauli z = c.layers[1].letters[static_cast<std::size_t>(p)];
                CHECK((z == Pauli::I || z == Pauli::Z));
            }
            // the reported result is bit-exact
            CHECK((c.result.amps() - hub).norm() == 0.0);
            // and honestly reproducible by applying the layers ourselves
            StateVector replay = basis.state(t);
            for (const PauliWord& layer : c.layers)
                replay = layer.apply(replay);
            CHECK((replay.amps() - hub).norm() == 0.0);
        }
    }
    CHECK_THROWS_AS(w_canonicalize({0, 1}, 2), error);
    CHECK_THROWS_AS(w_canonicalize({0, 1}, 3), error);
    CHECK_THROWS_AS(w_canonicalize({0, 2, 0}, 3), error);
}

TEST_CASE("bell triple is the frozen one") {
    const StateSet bell = bell_set();
    REQUIRE(bell.cardinality() == 3);
    CHECK(bell.shape() == SystemShape({2, 2}));
    const double expect[3][4] = {{1, 0, 0, 1}, {1, 0, 0, -1}, {0, 1, 1, 0}};
    for (std::size_t k = 0; k < 3; ++k)
        for (Eigen::Index i = 0; i < 4; ++i)
            CHECK(bell.state(k).amps()[i] == Complex(expect[k][static_cast<std::size_t>(i)], 0.0));
}
