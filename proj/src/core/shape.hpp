#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "errors.hpp"

namespace qstable {

// Local dimensions (d_1, ..., d_N) of a multipartite system. Immutable.
class SystemShape {
public:
    explicit SystemShape(std::vector<int> dims);

    int party_count() const noexcept { return static_cast<int>(dims_.size()); }
    int dim(int party) const { return dims_.at(static_cast<std::size_t>(party)); }
    const std::vector<int>& dims() const noexcept { return dims_; }

    // Product of all local dimensions; overflow rejected at construction.
    std::size_t total_dim() const noexcept { return total_; }
    // Product of all local dimensions except `party`.
    std::size_t complement_dim(int party) const { return total_ / static_cast<std::size_t>(dim(party)); }

    bool operator==(const SystemShape&) const = default;

private:
    std::vector<int> dims_;
    std::size_t total_ = 1;
};

// One digit per party, 0 <= digit[i] < d_i.
using MultiIndex = std::vector<int>;

// Mixed-radix encoding, party 0 most significant. Inverse of unflatten.
std::size_t flat_index(const MultiIndex& m, const SystemShape& shape);
MultiIndex unflatten(std::size_t flat, const SystemShape& shape);

// Number of nonzero digits.
int weight(const MultiIndex& m) noexcept;

// All strings of weight exactly k, in lexicographic (= flat index) order.
std::vector<MultiIndex> weight_class(const SystemShape& shape, int k);

enum class Side { left, right };
inline Side other_side(Side s) noexcept { return s == Side::left ? Side::right : Side::left; }

// A split of the parties into two nonempty complementary groups. Stored in
// canonical form: party 0 always lives on the left, both sides sorted.
class Bipartition {
public:
    // Empty placeholder; every usable instance comes from the validating
    // constructor below.
    Bipartition() = default;
    Bipartition(std::vector<int> left, std::vector<int> right, int party_count);

    // The canonical bipartition separating `party` from the rest.
    static Bipartition one_vs_rest(int party, int party_count);

    const std::vector<int>& left() const noexcept { return left_; }
    const std::vector<int>& right() const noexcept { return right_; }
    const std::vector<int>& parties(Side s) const noexcept { return s == Side::left ? left_ : right_; }
    int party_count() const noexcept { return party_count_; }

    Side side_of(int party) const;
    std::string to_string() const; // e.g. "{1,3}|{2}" (1-based)

    bool operator==(const Bipartition&) const = default;

private:
    std::vector<int> left_;
    std::vector<int> right_;
    int party_count_ = 0;
};

// All 2^(N-1) - 1 canonical bipartitions, ordered by the left-side bitmask.
std::vector<Bipartition> enumerate_bipartitions(int party_count);

// Dimension of the joint space of a party subset.
std::size_t subsystem_dim(const SystemShape& shape, const std::vector<int>& parties);

} // namespace qstable
