#include "shape.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>

namespace qstable {

SystemShape::SystemShape(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty())
        fail(errc::invalid_argument, "system shape needs at least one party");
    for (int d : dims_) {
        if (d < 2)
            fail(errc::invalid_argument, "local dimension must be at least 2, got " + std::to_string(d));
        if (total_ > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(d))
            fail(errc::invalid_argument, "total dimension overflows the index range");
        total_ *= static_cast<std::size_t>(d);
    }
}

std::size_t flat_index(const MultiIndex& m, const SystemShape& shape) {
    if (static_cast<int>(m.size()) != shape.party_count())
        fail(errc::invalid_argument, "multi-index has wrong number of digits");
    std::size_t flat = 0;
    for (int p = 0; p < shape.party_count(); ++p) {
        const int digit = m[static_cast<std::size_t>(p)];
        if (digit < 0 || digit >= shape.dim(p))
            fail(errc::invalid_argument, "digit " + std::to_string(digit) + " out of range at party " +
                                             std::to_string(p + 1));
        flat = flat * static_cast<std::size_t>(shape.dim(p)) + static_cast<std::size_t>(digit);
    }
    return flat;
}

MultiIndex unflatten(std::size_t flat, const SystemShape& shape) {
    if (flat >= shape.total_dim())
        fail(errc::invalid_argument, "flat index out of range");
    MultiIndex m(static_cast<std::size_t>(shape.party_count()));
    for (int p = shape.party_count() - 1; p >= 0; --p) {
        const auto d = static_cast<std::size_t>(shape.dim(p));
        m[static_cast<std::size_t>(p)] = static_cast<int>(flat % d);
        flat /= d;
    }
    return m;
}

int weight(const MultiIndex& m) noexcept {
    return static_cast<int>(std::count_if(m.begin(), m.end(), [](int d) { return d != 0; }));
}

std::vector<MultiIndex> weight_class(const SystemShape& shape, int k) {
    if (k < 0 || k > shape.party_count())
        fail(errc::invalid_argument, "weight must lie in [0, party count]");
    std::vector<MultiIndex> out;
    for (std::size_t t = 0; t < shape.total_dim(); ++t) {
        MultiIndex m = unflatten(t, shape);
        if (weight(m) == k)
            out.push_back(std::move(m));
    }
    return out;
}

Bipartition::Bipartition(std::vector<int> left, std::vector<int> right, int party_count)
    : left_(std::move(left)), right_(std::move(right)), party_count_(party_count) {
    if (left_.empty() || right_.empty())
        fail(errc::invalid_argument, "both sides of a bipartition must be nonempty");
    std::sort(left_.begin(), left_.end());
    std::sort(right_.begin(), right_.end());
    std::vector<int> all;
    all.reserve(left_.size() + right_.size());
    std::merge(left_.begin(), left_.end(), right_.begin(), right_.end(), std::back_inserter(all));
    if (static_cast<int>(all.size()) != party_count)
        fail(errc::invalid_argument, "bipartition does not cover every party exactly once");
    for (int p = 0; p < party_count; ++p)
        if (all[static_cast<std::size_t>(p)] != p)
            fail(errc::invalid_argument, "bipartition does not cover every party exactly once");
    if (left_.front() != 0)
        std::swap(left_, right_); // canonical: the lowest party index sits on the left
}

Bipartition Bipartition::one_vs_rest(int party, int party_count) {
    if (party_count < 2)
        fail(errc::invalid_argument, "one-vs-rest split needs at least two parties");
    if (party < 0 || party >= party_count)
        fail(errc::invalid_argument, "party index out of range");
    std::vector<int> one{party};
    std::vector<int> rest;
    for (int p = 0; p < party_count; ++p)
        if (p != party)
            rest.push_back(p);
    return Bipartition(std::move(one), std::move(rest), party_count);
}

Side Bipartition::side_of(int party) const {
    if (std::binary_search(left_.begin(), left_.end(), party))
        return Side::left;
    if (std::binary_search(right_.begin(), right_.end(), party))
        return Side::right;
    fail(errc::invalid_argument, "party index out of range");
}

std::string Bipartition::to_string() const {
    std::ostringstream os;
    auto dump = [&os](const std::vector<int>& ps) {
        os << '{';
        for (std::size_t i = 0; i < ps.size(); ++i)
            os << (i ? "," : "") << ps[i] + 1;
        os << '}';
    };
    dump(left_);
    os << '|';
    dump(right_);
    return os.str();
}

std::vector<Bipartition> enumerate_bipartitions(int party_count) {
    if (party_count < 2)
        fail(errc::invalid_argument, "bipartitions need at least two parties");
    if (party_count > 62)
        fail(errc::limit_exceeded, "too many parties to enumerate bipartitions");
    std::vector<Bipartition> out;
    const std::uint64_t full = (std::uint64_t{1} << party_count) - 1;
    // Masks with bit 0 set are exactly the canonical left sides.
    for (std::uint64_t mask = 1; mask < full; mask += 2) {
        std::vector<int> left, right;
        for (int p = 0; p < party_count; ++p)
            ((mask >> p) & 1 ? left : right).push_back(p);
        out.emplace_back(std::move(left), std::move(right), party_count);
    }
    return out;
}

std::size_t subsystem_dim(const SystemShape& shape, const std::vector<int>& parties) {
    std::size_t d = 1;
    for (int p : parties)
        d *= static_cast<std::size_t>(shape.dim(p));
    return d;
}

} // namespace qstable
