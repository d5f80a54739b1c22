#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "core/shape.hpp"

using namespace qstable;

TEST_CASE("shape basics") {
    const SystemShape s({2, 3, 4});
    CHECK(s.party_count() == 3);
    CHECK(s.dim(0) == 2);
    CHECK(s.dim(2) == 4);
    CHECK(s.total_dim() == 24);
    CHECK(s.complement_dim(0) == 12);
    CHECK(s.complement_dim(1) == 8);
    CHECK(s.complement_dim(2) == 6);
    CHECK(s == SystemShape({2, 3, 4}));
    CHECK_FALSE(s == SystemShape({2, 3, 5}));
}

TEST_CASE("shape rejects junk") {
    CHECK_THROWS_AS(SystemShape({}), error);
    CHECK_THROWS_AS(SystemShape({2, 1}), error);
    CHECK_THROWS_AS(SystemShape({0}), error);
    CHECK_THROWS_AS(SystemShape({-3, 2}), error);
    // 2^70 overflows a 64-bit index
    CHECK_THROWS_AS(SystemShape(std::vector<int>(70, 2)), error);
    try {
        SystemShape({2, 1});
        FAIL("expected a throw");
    } catch (const error& e) {
        CHECK(e.code() == errc::invalid_argument);
    }
}

TEST_CASE("flat index is mixed radix, party 0 most significant") {
    const SystemShape s({2, 3});
    CHECK(flat_index({0, 0}, s) == 0);
    CHECK(flat_index({0, 2}, s) == 2);
    CHECK(flat_index({1, 0}, s) == 3);
    CHECK(flat_index({1, 2}, s) == 5);
    CHECK_THROWS_AS(flat_index({2, 0}, s), error);
    CHECK_THROWS_AS(flat_index({0, 3}, s), error);
    CHECK_THROWS_AS(flat_index({0}, s), error);
}

TEST_CASE("unflatten inverts flat_index everywhere") {
    const SystemShape s({2, 3, 4});
    for (std::size_t t = 0; t < s.total_dim(); ++t) {
        const MultiIndex m = unflatten(t, s);
        for (int p = 0; p < 3; ++p) {
            CHECK(m[static_cast<std::size_t>(p)] >= 0);
            CHECK(m[static_cast<std::size_t>(p)] < s.dim(p));
        }
        CHECK(flat_index(m, s) == t);
    }
    CHECK_THROWS_AS(unflatten(24, s), error);
}

TEST_CASE("weight counts nonzero digits") {
    CHECK(weight({0, 0, 0}) == 0);
    CHECK(weight({0, 2, 0}) == 1);
    CHECK(weight({1, 2, 3}) == 3);
}

TEST_CASE("weight classes partition the basis in flat order") {
    const SystemShape s({2, 2, 3});
    std::size_t covered = 0;
    for (int k = 0; k <= 3; ++k) {
        const auto cls = weight_class(s, k);
        covered += cls.size();
        std::size_t prev = 0;
        for (std::size_t i = 0; i < cls.size(); ++i) {
            CHECK(weight(cls[i]) == k);
            const std::size_t flat = flat_index(cls[i], s);
            if (i > 0)
                CHECK(flat > prev);
            prev = flat;
        }
    }
    CHECK(covered == s.total_dim());
    // qubit-qubit-qutrit: class sizes 1, 4, 5, 2
    CHECK(weight_class(s, 0).size() == 1);
    CHECK(weight_class(s, 1).size() == 4);
    CHECK(weight_class(s, 2).size() == 5);
    CHECK(weight_class(s, 3).size() == 2);
    CHECK_THROWS_AS(weight_class(s, 4), error);
    CHECK_THROWS_AS(weight_class(s, -1), error);
}

TEST_CASE("bipartition canonical form keeps party 0 on the left") {
    const Bipartition bp({2}, {0, 1}, 3);
    CHECK(bp.left() == std::vector<int>{0, 1});
    CHECK(bp.right() == std::vector<int>{2});
    CHECK(bp.side_of(0) == Side::left);
    CHECK(bp.side_of(2) == Side::right);
    CHECK(bp.parties(Side::right) == std::vector<int>{2});
    CHECK(bp.to_string() == "{1,2}|{3}");
    CHECK(bp == Bipartition({0, 1}, {2}, 3));
    CHECK_THROWS_AS(bp.side_of(3), error);
}

TEST_CASE("bipartition validation") {
    CHECK_THROWS_AS(Bipartition({}, {0, 1}, 2), error);
    CHECK_THROWS_AS(Bipartition({0}, {0, 1}, 2), error);  // overlap
    CHECK_THROWS_AS(Bipartition({0}, {2}, 3), error);     // missing party 1
    CHECK_THROWS_AS(Bipartition({0}, {1}, 3), error);     // party count mismatch
}

TEST_CASE("one_vs_rest splits") {
    const Bipartition bp = Bipartition::one_vs_rest(1, 4);
    CHECK(bp.left() == std::vector<int>{0, 2, 3});
    CHECK(bp.right() == std::vector<int>{1});
    const Bipartition first = Bipartition::one_vs_rest(0, 3);
    CHECK(first.left() == std::vector<int>{0});
    CHECK(first.right() == std::vector<int>{1, 2});
    CHECK_THROWS_AS(Bipartition::one_vs_rest(0, 1), error);
    CHECK_THROWS_AS(Bipartition::one_vs_rest(3, 3), error);
}

TEST_CASE("enumerate_bipartitions covers the lattice once") {
    CHECK(enumerate_bipartitions(2).size() == 1);
    CHECK(enumerate_bipartitions(3).size() == 3);
    CHECK(enumerate_bipartitions(4).size() == 7);
    CHECK(enumerate_bipartitions(5).size() == 15);
    for (const auto& bp : enumerate_bipartitions(4)) {
        CHECK(bp.left().front() == 0);
        CHECK(std::is_sorted(bp.left().begin(), bp.left().end()));
        CHECK(std::is_sorted(bp.right().begin(), bp.right().end()));
        CHECK(bp.left().size() + bp.right().size() == 4);
    }
    // no duplicates
    auto all = enumerate_bipartitions(4);
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j)
            CHECK_FALSE(all[i] == all[j]);
    CHECK_THROWS_AS(enumerate_bipartitions(1), error);
}

TEST_CASE("subsystem_dim multiplies the chosen dims") {
    const SystemShape s({2, 3, 4});
    CHECK(subsystem_dim(s, {0}) == 2);
    CHECK(subsystem_dim(s, {1, 2}) == 12);
    CHECK(subsystem_dim(s, {0, 1, 2}) == 24);
}
