#include "search.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace qstable {
namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
    Clock::time_point at = Clock::time_point::max();
    bool expired() const { return Clock::now() > at; }
};

Deadline make_deadline(double seconds) {
    Deadline d;
    if (seconds > 0)
        d.at = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                  std::chrono::duration<double>(seconds));
    return d;
}

void validate_config(const SearchConfig& cfg) {
    if (cfg.trials < 1)
        fail(errc::invalid_argument, "trials must be at least 1");
    if (cfg.target_size == 1)
        fail(errc::invalid_argument, "target size must be at least 2");
    if (cfg.mode == StabilityMode::one_vs_rest)
        fail(errc::invalid_argument, "search works in single-party or all-bipartitions mode");
}

std::size_t bound_for(const SystemShape& shape, StabilityMode mode) {
    const CardinalityBounds b = cardinality_bounds(shape);
    return mode == StabilityMode::single_party ? b.lower_single : b.lower_every.value();
}

bool passes(const StateSet& set, StabilityMode mode, const TolerancePolicy& tol,
            const ExecPolicy& exec, BipartitionSweep sweep = BipartitionSweep::one_vs_rest) {
    const StabilityReport report = mode == StabilityMode::single_party
                                       ? check_locally_stable(set, tol, exec)
                                       : check_every_bipartition(set, sweep, tol, exec);
    return report.stable;
}

std::string subset_note(const char* what, std::size_t size) {
    std::ostringstream os;
    os << what << " size " << size;
    return os.str();
}

// Lexicographically next k-combination over 0..n-1; false when done.
bool next_combination(std::vector<std::size_t>& combo, std::size_t n) {
    const std::size_t k = combo.size();
    for (std::size_t i = k; i-- > 0;) {
        if (combo[i] < n - (k - i)) {
            ++combo[i];
            for (std::size_t j = i + 1; j < k; ++j)
                combo[j] = combo[j - 1] + 1;
            return true;
        }
    }
    return false;
}

} // namespace

SearchOutcome minimize_subset(const StateSet& set, const SearchConfig& cfg,
                              const TolerancePolicy& tol, const ExecPolicy& exec) {
    validate_config(cfg);
    validate(tol);
    if (!passes(set, cfg.mode, tol, exec))
        fail(errc::invalid_argument,
             "nothing to minimize: the input set is not stable in the requested mode");

    const std::size_t s = set.cardinality();
    const std::size_t bound = bound_for(set.shape(), cfg.mode);
    const std::size_t floor = std::max(bound, cfg.target_size);
    const Deadline deadline = make_deadline(cfg.time_budget_seconds);

    SearchOutcome out;
    std::vector<std::size_t> best(s);
    std::iota(best.begin(), best.end(), 0);
    bool timed_out = false;

    if (cfg.exhaustive_enumeration) {
        if (s > 12)
            fail(errc::limit_exceeded, "exhaustive subset enumeration is capped at 12 states");
        // Ascending sweep: stability is monotone under adding states, so the
        // first level with a hit is the true minimum.
        for (std::size_t k = floor; k < s && best.size() == s && !timed_out; ++k) {
            std::vector<std::size_t> combo(k);
            std::iota(combo.begin(), combo.end(), 0);
            do {
                if (deadline.expired()) {
                    timed_out = true;
                    break;
                }
                const bool ok = passes(set.subset(combo), cfg.mode, tol, exec);
                out.log.push_back({subset_note("sweep", k), combo, ok});
                if (ok) {
                    best = combo;
                    break;
                }
            } while (next_combination(combo, s));
        }
        out.exhausted = !timed_out;
    } else {
        for (int t = 0; t < cfg.trials && !timed_out; ++t) {
            std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(t));
            std::vector<std::size_t> current(s);
            std::iota(current.begin(), current.end(), 0);
            while (current.size() > floor) {
                if (deadline.expired()) {
                    timed_out = true;
                    break;
                }
                std::vector<std::size_t> order = current;
                std::shuffle(order.begin(), order.end(), rng);
                bool removed = false;
                for (std::size_t victim : order) {
                    if (deadline.expired()) {
                        timed_out = true;
                        break;
                    }
                    std::vector<std::size_t> candidate;
                    candidate.reserve(current.size() - 1);
                    for (std::size_t i : current)
                        if (i != victim)
                            candidate.push_back(i);
                    const bool ok = passes(set.subset(candidate), cfg.mode, tol, exec);
                    out.log.push_back(
                        {subset_note("greedy", candidate.size()), candidate, ok});
                    if (ok) {
                        current = std::move(candidate);
                        removed = true;
                        break;
                    }
                }
                if (!removed)
                    break;
            }
            if (current.size() < best.size())
                best = std::move(current);
            if (best.size() == floor && floor == bound)
                break;  // nothing below the bound can exist
        }
        out.exhausted = best.size() == bound;
    }

    StateSet witness = set.subset(best);
    const StabilityReport final_report =
        cfg.mode == StabilityMode::single_party
            ? check_locally_stable(witness, tol, exec)
            : check_every_bipartition(witness, BipartitionSweep::exhaustive, tol, exec);
    if (!final_report.stable)
        fail(errc::internal, "minimized subset failed exhaustive re-verification");
    out.best_size = best.size();
    out.best_found = std::move(witness);
    if (timed_out)
        out.exhausted = out.best_size == bound;
    return out;
}

Matrix haar_unitary(Eigen::Index dim, std::mt19937_64& rng) {
    if (dim < 1)
        fail(errc::invalid_argument, "dimension must be positive");
    std::normal_distribution<double> gauss;
    Matrix g(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j)
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double re = gauss(rng);
            const double im = gauss(rng);
            g(i, j) = Complex(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(dim, dim);
    const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < dim; ++j) {
        const Complex rjj = r(j, j);
        if (std::abs(rjj) > 0)
            q.col(j) *= rjj / std::abs(rjj);
    }
    return q;
}

StateSet random_orthogonal_set(const SystemShape& shape, std::size_t size, std::uint64_t seed) {
    if (size < 1)
        fail(errc::invalid_argument, "set size must be positive");
    if (size > shape.total_dim())
        fail(errc::invalid_argument, "requested " + std::to_string(size) +
                                         " orthogonal states in dimension " +
                                         std::to_string(shape.total_dim()));
    std::mt19937_64 rng(seed);
    const Matrix u = haar_unitary(static_cast<Eigen::Index>(shape.total_dim()), rng);
    std::vector<StateVector> states;
    states.reserve(size);
    for (std::size_t i = 0; i < size; ++i)
        states.emplace_back(shape, u.col(static_cast<Eigen::Index>(i)));
    std::ostringstream label;
    label << "haar(";
    for (std::size_t i = 0; i < shape.dims().size(); ++i)
        label << (i ? "," : "") << shape.dims()[i];
    label << ";seed=" << seed << ")";
    return StateSet(shape, std::move(states), label.str());
}

SearchOutcome probe_bound(const SystemShape& shape, const SearchConfig& cfg,
                          const TolerancePolicy& tol, const ExecPolicy& exec) {
    validate_config(cfg);
    validate(tol);
    if (shape.party_count() < 2)
        fail(errc::invalid_argument, "bound probing needs at least two parties");
    const std::size_t bound = bound_for(shape, cfg.mode);
    const std::size_t target = std::max(bound, cfg.target_size);
    if (target > shape.total_dim())
        fail(errc::invalid_argument, "target size exceeds the total dimension");
    const Deadline deadline = make_deadline(cfg.time_budget_seconds);

    SearchOutcome out;
    std::optional<Matrix> best_amps;  // total_dim x target, orthonormal columns
    long long best_score = -1;

    auto as_set = [&](const Matrix& amps, std::uint64_t trial) {
        std::vector<StateVector> states;
        states.reserve(target);
        for (std::size_t i = 0; i < target; ++i)
            states.emplace_back(shape, amps.col(static_cast<Eigen::Index>(i)));
        std::ostringstream label;
        label << "probe(size=" << target << ";trial=" << trial << ")";
        return StateSet(shape, std::move(states), label.str());
    };

    for (int t = 0; t < cfg.trials; ++t) {
        if (deadline.expired())
            break;
        std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(t));
        Matrix amps;
        const char* how;
        if (t % 2 == 1 && best_amps) {
            // Nudge the best candidate and re-orthonormalize.
            std::normal_distribution<double> gauss;
            Matrix g = *best_amps;
            for (Eigen::Index j = 0; j < g.cols(); ++j)
                for (Eigen::Index i = 0; i < g.rows(); ++i) {
                    const double re = gauss(rng);
                    const double im = gauss(rng);
                    g(i, j) += 0.05 * Complex(re, im);
                }
            Eigen::HouseholderQR<Matrix> qr(g);
            amps = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
            const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
            for (Eigen::Index j = 0; j < amps.cols(); ++j)
                if (std::abs(r(j, j)) > 0)
                    amps.col(j) *= r(j, j) / std::abs(r(j, j));
            how = "perturbed";
        } else {
            const Matrix u = haar_unitary(static_cast<Eigen::Index>(shape.total_dim()), rng);
            amps = u.leftCols(static_cast<Eigen::Index>(target));
            how = "fresh";
        }

        const StateSet candidate = as_set(amps, static_cast<std::uint64_t>(t));
        const StabilityReport report = cfg.mode == StabilityMode::single_party
                                           ? check_locally_stable(candidate, tol, exec)
                                           : check_every_bipartition(
                                                 candidate, BipartitionSweep::one_vs_rest, tol, exec);
        std::ostringstream note;
        note << how << " trial " << t;
        out.log.push_back({note.str(), {}, report.stable});

        if (report.stable) {
            const bool confirmed =
                cfg.mode == StabilityMode::single_party
                    ? check_locally_stable(candidate, tol, exec).stable
                    : check_every_bipartition(candidate, BipartitionSweep::exhaustive, tol, exec)
                          .stable;
            if (confirmed) {
                out.best_found = candidate;
                out.best_size = target;
                out.exhausted = true;
                return out;
            }
            out.log.back().note += " (failed exhaustive re-verification)";
            out.log.back().stable = false;
        }
        long long score = 0;
        for (const auto& e : report.entries)
            score += e.rank.rank;
        if (score > best_score) {
            best_score = score;
            best_amps = std::move(amps);
        }
    }
    return out;
}

} // namespace qstable
