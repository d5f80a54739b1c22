#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/constructions.hpp"
#include "core/entanglement.hpp"

using namespace qstable;

namespace {

StateVector ket22(double a, double b, double c, double d) {
    Vector v(4);
    v << a, b, c, d;
    return StateVector(SystemShape({2, 2}), v);
}

StateVector ket222(std::initializer_list<double> amps) {
    Vector v(8);
    Eigen::Index i = 0;
    for (double a : amps)
        v[i++] = a;
    return StateVector(SystemShape({2, 2, 2}), v);
}

} // namespace

TEST_CASE("schmidt rank across one split") {
    const Bipartition bp({0}, {1}, 2);
    CHECK(schmidt_rank(ket22(1, 0, 0, 0), bp) == 1);
    CHECK(schmidt_rank(ket22(1, 1, 1, 1), bp) == 1);  // (|0>+|1>)(|0>+|1>)
    CHECK(schmidt_rank(ket22(1, 0, 0, 1), bp) == 2);
    CHECK(schmidt_rank(ket22(0, 1, -1, 0), bp) == 2);
    CHECK_THROWS_AS(schmidt_rank(ket22(1, 0, 0, 0), Bipartition({0}, {1, 2}, 3)), error);
}

TEST_CASE("profiles cover each bipartition once") {
    const StateVector ghz = ket222({1, 0, 0, 0, 0, 0, 0, 1});
    const SchmidtProfile p = schmidt_profile(ghz);
    REQUIRE(p.entries.size() == 3);
    for (const auto& e : p.entries) {
        CHECK(e.rank == 2);
        REQUIRE(e.singular_values.size() >= 2);
        CHECK(e.singular_values[0] == doctest::Approx(1.0));
        CHECK(e.singular_values[1] == doctest::Approx(1.0));
        CHECK(std::is_sorted(e.singular_values.rbegin(), e.singular_values.rend()));
    }
    CHECK(p.genuinely_entangled);
    CHECK(is_genuinely_entangled(ghz));
}

TEST_CASE("w state is genuinely entangled") {
    const SchmidtProfile p = schmidt_profile(w_state(3));
    for (const auto& e : p.entries)
        CHECK(e.rank == 2);
    CHECK(p.genuinely_entangled);
    CHECK(is_genuinely_entangled(w_state(4)));
}

TEST_CASE("a product factor kills genuine entanglement") {
    // |0> (x) (|01>+|10>) on parties (1,2): product across {1}|{2,3}
    const StateVector psi = ket222({0, 1, 1, 0, 0, 0, 0, 0});
    const SchmidtProfile p = schmidt_profile(psi);
    CHECK_FALSE(p.genuinely_entangled);
    bool saw_product = false, saw_entangled = false;
    for (const auto& e : p.entries) {
        if (e.bipartition == Bipartition({0}, {1, 2}, 3)) {
            CHECK(e.rank == 1);
            saw_product = true;
        } else {
            CHECK(e.rank == 2);
            saw_entangled = true;
        }
    }
    CHECK(saw_product);
    CHECK(saw_entangled);
    CHECK_FALSE(is_genuinely_entangled(psi));

    // fully product
    CHECK_FALSE(is_genuinely_entangled(ket222({1, 0, 0, 0, 0, 0, 0, 0})));
}

TEST_CASE("singular values carry the state's weight") {
    const StateVector bell = ket22(1, 0, 0, 1);  // unnormalized, norm sqrt(2)
    const SchmidtProfile p = schmidt_profile(bell);
    REQUIRE(p.entries.size() == 1);
    double sum = 0;
    for (double s : p.entries[0].singular_values)
        sum += s * s;
    CHECK(sum == doctest::Approx(2.0));
}

TEST_CASE("two-qubit entangled counting") {
    CHECK(count_entangled(bell_set()) == 3);
    const SystemShape s({2, 2});
    const StateSet prod(s, {ket22(1, 0, 0, 0), ket22(0, 1, 0, 0), ket22(0, 0, 1, 0)});
    CHECK(count_entangled(prod) == 0);
    const StateSet mixed(s, {ket22(1, 0, 0, 0), ket22(0, 0, 0, 1), ket22(0, 1, 1, 0)});
    CHECK(count_entangled(mixed) == 1);
}

TEST_CASE("every member of the genuine construction is genuinely entangled") {
    const StateSet sg = weight_fourier_genuine_set({SystemShape({2, 2, 2}), {}});
    REQUIRE(sg.cardinality() == 8);
    for (const auto& psi : sg.states()) {
        const SchmidtProfile p = schmidt_profile(psi);
        CHECK(p.genuinely_entangled);
        for (const auto& e : p.entries)
            CHECK(e.rank == 2);
    }
    // the plain variant keeps |00...0>, which is product
    const StateSet plain = weight_fourier_set({SystemShape({2, 2, 2}), {}});
    CHECK_FALSE(is_genuinely_entangled(plain.state(0)));
}

TEST_CASE("rank decisions survive local unitaries") {
    Matrix u(2, 2);
    const double c = std::cos(0.7), s = std::sin(0.7);
    u << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
    const StateVector rotated = apply_local_unitary(w_state(3), 1, u);
    CHECK(is_genuinely_entangled(rotated));
    const SchmidtProfile before = schmidt_profile(w_state(3));
    const SchmidtProfile after = schmidt_profile(rotated);
    for (std::size_t i = 0; i < before.entries.size(); ++i)
        CHECK(before.entries[i].rank == after.entries[i].rank);
}
