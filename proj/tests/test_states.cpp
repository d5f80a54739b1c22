#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "core/states.hpp"

using namespace qstable;

namespace {

Vector random_amps(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vector v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] = Complex(g(rng), g(rng));
    return v;
}

// Digit of `flat` at `party`, by repeated division from the least significant
// party. Written from scratch so the split tests don't lean on shape.hpp.
int digit_at(std::size_t flat, int party, const std::vector<int>& dims) {
    for (int p = static_cast<int>(dims.size()) - 1; p > party; --p)
        flat /= static_cast<std::size_t>(dims[static_cast<std::size_t>(p)]);
    return static_cast<int>(flat % static_cast<std::size_t>(dims[static_cast<std::size_t>(party)]));
}

// Row/column of the component matrix a flat index should land in.
std::pair<std::size_t, std::size_t> naive_split(std::size_t flat, const std::vector<int>& dims,
                                                const std::vector<int>& p_parties) {
    std::size_t a = 0, b = 0;
    for (int p : p_parties)
        a = a * static_cast<std::size_t>(dims[static_cast<std::size_t>(p)]) +
            static_cast<std::size_t>(digit_at(flat, p, dims));
    for (int q = 0; q < static_cast<int>(dims.size()); ++q) {
        bool in_p = false;
        for (int p : p_parties)
            in_p = in_p || p == q;
        if (!in_p)
            b = b * static_cast<std::size_t>(dims[static_cast<std::size_t>(q)]) +
                static_cast<std::size_t>(digit_at(flat, q, dims));
    }
    return {a, b};
}

} // namespace

TEST_CASE("state vector construction and validation") {
    const SystemShape s({2, 2});
    Vector v(4);
    v << 1, 0, 0, 1;
    const StateVector psi(s, v);
    CHECK(psi.norm() == doctest::Approx(std::sqrt(2.0)));
    CHECK(psi.shape() == s);

    CHECK_THROWS_AS(StateVector(s, Vector::Zero(4)), error);
    CHECK_THROWS_AS(StateVector(s, Vector::Ones(3)), error);
    Vector bad(4);
    bad << 1, 0, 0, std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(StateVector(s, bad), error);
}

TEST_CASE("basis_state puts a single 1 at the flat index") {
    const SystemShape s({2, 3});
    const StateVector e = StateVector::basis_state(s, {1, 2});
    for (Eigen::Index i = 0; i < 6; ++i)
        CHECK(e.amps()[i] == (i == 5 ? Complex(1, 0) : Complex(0, 0)));
}

TEST_CASE("inner is conjugate-linear in the first slot") {
    const SystemShape s({2});
    Vector a(2), b(2);
    a << Complex(0, 1), 0;
    b << 1, 0;
    CHECK(inner(StateVector(s, a), StateVector(s, b)) == Complex(0, -1));
    CHECK(inner(StateVector(s, b), StateVector(s, a)) == Complex(0, 1));
    CHECK_THROWS_AS(inner(StateVector(s, b), StateVector(SystemShape({3}), Vector::Ones(3))), error);
}

TEST_CASE("components_over matches a from-scratch digit split") {
    const std::vector<int> dims{2, 3, 2};
    const SystemShape s(dims);
    std::mt19937_64 rng(7);
    const StateVector psi(s, random_amps(s.total_dim(), rng));

    for (const auto& parties : {std::vector<int>{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1}}) {
        const Matrix c = components_over(psi, parties);
        std::size_t dp = 1;
        for (int p : parties)
            dp *= static_cast<std::size_t>(dims[static_cast<std::size_t>(p)]);
        CHECK(static_cast<std::size_t>(c.rows()) == dp);
        CHECK(static_cast<std::size_t>(c.cols()) == s.total_dim() / dp);
        for (std::size_t t = 0; t < s.total_dim(); ++t) {
            const auto [a, b] = naive_split(t, dims, parties);
            CHECK(c(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) ==
                  psi.amps()[static_cast<Eigen::Index>(t)]);
        }
    }

    CHECK_THROWS_AS(components_over(psi, {}), error);
    CHECK_THROWS_AS(components_over(psi, {0, 1, 2}), error);  // needs a proper subset
    CHECK_THROWS_AS(components_over(psi, {2, 0}), error);     // must be sorted
    CHECK_THROWS_AS(components_over(psi, {3}), error);
}

TEST_CASE("compose inverts components_over") {
    const SystemShape s({2, 2, 3});
    std::mt19937_64 rng(11);
    for (int round = 0; round < 5; ++round) {
        const StateVector psi(s, random_amps(s.total_dim(), rng));
        for (const auto& parties : {std::vector<int>{0}, {1, 2}, {0, 2}}) {
            const StateVector back = compose(s, parties, components_over(psi, parties));
            CHECK((back.amps() - psi.amps()).norm() == 0.0);
        }
    }
    CHECK_THROWS_AS(compose(s, {0}, Matrix::Ones(3, 4)), error);
}

TEST_CASE("decompose lists every left basis slot, zeros included") {
    const SystemShape s({2, 2});
    Vector v(4);
    v << 1, 0, 0, 1;  // |00> + |11>
    const StateVector psi(s, v);
    const auto parts = decompose(psi, Bipartition({0}, {1}, 2));
    REQUIRE(parts.size() == 2);
    CHECK(parts[0].first == MultiIndex{0});
    CHECK(parts[1].first == MultiIndex{1});
    CHECK(parts[0].second[0] == Complex(1, 0));
    CHECK(parts[0].second[1] == Complex(0, 0));
    CHECK(parts[1].second[0] == Complex(0, 0));
    CHECK(parts[1].second[1] == Complex(1, 0));
    CHECK_THROWS_AS(decompose(psi, Bipartition({0}, {1, 2}, 3)), error);
}

TEST_CASE("apply_local_unitary agrees with the dense kronecker action") {
    const SystemShape s({2, 2});
    std::mt19937_64 rng(3);
    const StateVector psi(s, random_amps(4, rng));
    Matrix u(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    u << Complex(r, 0), Complex(0, r), Complex(0, r), Complex(r, 0);

    // party 1 is least significant: I (x) U
    Matrix full = Matrix::Zero(4, 4);
    full.block(0, 0, 2, 2) = u;
    full.block(2, 2, 2, 2) = u;
    const Vector expect = full * psi.amps();
    const StateVector got = apply_local_unitary(psi, 1, u);
    CHECK((got.amps() - expect).norm() < 1e-15);

    // party 0 is most significant: U (x) I
    Matrix full0 = Matrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            full0.block(2 * i, 2 * j, 2, 2) = u(i, j) * Matrix::Identity(2, 2);
    const StateVector got0 = apply_local_unitary(psi, 0, u);
    CHECK((got0.amps() - full0 * psi.amps()).norm() < 1e-15);

    CHECK(got.norm() == doctest::Approx(psi.norm()));
    CHECK_THROWS_AS(apply_local_unitary(psi, 2, u), error);
    CHECK_THROWS_AS(apply_local_unitary(psi, 0, Matrix::Identity(3, 3)), error);
}

TEST_CASE("state sets demand pairwise orthogonality") {
    const SystemShape s({2, 2});
    auto ket = [&s](double a, double b, double c, double d) {
        Vector v(4);
        v << a, b, c, d;
        return StateVector(s, v);
    };
    CHECK_NOTHROW(StateSet(s, {ket(1, 0, 0, 1), ket(1, 0, 0, -1)}));
    CHECK_THROWS_AS(StateSet(s, {ket(1, 0, 0, 1), ket(1, 0, 0, 0)}), error);
    try {
        StateSet(s, {ket(1, 0, 0, 1), ket(1, 0, 0, 0)});
        FAIL("expected a throw");
    } catch (const error& e) {
        CHECK(e.code() == errc::orthogonality_violation);
    }

    // the tolerance is relative: a tiny overlap on huge vectors passes
    CHECK_NOTHROW(StateSet(s, {ket(1e8, 0, 0, 1e8), ket(1e8, 1e-4, 0, -1e8)}));
    // and a loose eps admits what the default rejects
    CHECK_THROWS_AS(StateSet(s, {ket(1, 0, 0, 0), ket(1e-6, 1, 0, 0)}), error);
    CHECK_NOTHROW(StateSet(s, {ket(1, 0, 0, 0), ket(1e-6, 1, 0, 0)}, "", 1e-4));
}

TEST_CASE("subset picks by index and keeps the label unless renamed") {
    const SystemShape s({2, 2});
    auto ket = [&s](double a, double b, double c, double d) {
        Vector v(4);
        v << a, b, c, d;
        return StateVector(s, v);
    };
    const StateSet set(s, {ket(1, 0, 0, 0), ket(0, 1, 0, 0), ket(0, 0, 1, 0)}, "basis");
    const std::vector<std::size_t> pick{2, 0};
    const StateSet sub = set.subset(pick);
    REQUIRE(sub.cardinality() == 2);
    CHECK(sub.label() == "basis");
    CHECK(sub.state(0).amps()[2] == Complex(1, 0));
    CHECK(sub.state(1).amps()[0] == Complex(1, 0));
    CHECK(set.subset(pick, "slice").label() == "slice");
    const std::vector<std::size_t> oob{3};
    CHECK_THROWS(set.subset(oob));
}

TEST_CASE("locally_rotated applies one unitary per party") {
    const SystemShape s({2, 2});
    auto ket = [&s](double a, double b, double c, double d) {
        Vector v(4);
        v << a, b, c, d;
        return StateVector(s, v);
    };
    const StateSet set(s, {ket(1, 0, 0, 1), ket(1, 0, 0, -1), ket(0, 1, 1, 0)});
    Matrix h(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    h << r, r, r, -r;
    const StateSet rot = set.locally_rotated({h, Matrix::Identity(2, 2)});
    CHECK(rot.cardinality() == 3);
    // orthogonality survives a local rotation (the ctor re-checks it)
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(rot.state(k).norm() == doctest::Approx(set.state(k).norm()));
    CHECK_THROWS_AS(set.locally_rotated({h}), error);
    CHECK_THROWS_AS(set.locally_rotated({h, Matrix::Identity(3, 3)}), error);
}
