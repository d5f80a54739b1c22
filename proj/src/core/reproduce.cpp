#include "reproduce.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "constructions.hpp"
#include "entanglement.hpp"
#include "stability.hpp"

namespace qstable {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct CheckResult {
    bool pass = false;
    std::string detail;
};

void run_check(ReproduceReport& report, const std::string& name,
               const std::function<CheckResult()>& body) {
    ReproduceCheck c;
    c.name = name;
    const auto t0 = Clock::now();
    try {
        CheckResult r = body();
        c.pass = r.pass;
        c.detail = std::move(r.detail);
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail = std::string("exception: ") + e.what();
    }
    c.ms = ms_since(t0);
    report.all_pass = report.all_pass && c.pass;
    report.total_ms += c.ms;
    report.checks.push_back(std::move(c));
}

std::string fmt_gap(double g) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(1) << g;
    return os.str();
}

// Worked bipartite example: three states |00>+|11>, |00>-|11>, |01>+|10>.
// The 6x4 constraint matrix when measuring the second party is known in
// closed form; freeze it and require bit-exact agreement plus rank 3 on
// both sides.
CheckResult check_bell(const TolerancePolicy& tol, const ExecPolicy& exec) {
    const StateSet set = bell_set();
    const Bipartition bp = Bipartition::one_vs_rest(0, 2);

    static const double kExpected[6][4] = {
        {1, 0, 0, -1},  // pair (1,2)
        {0, 1, 1, 0},   // pair (1,3)
        {1, 0, 0, -1},  // pair (2,1)
        {0, 1, -1, 0},  // pair (2,3)
        {0, 1, 1, 0},   // pair (3,1)
        {0, -1, 1, 0},  // pair (3,2)
    };

    const DMatrix d = build_dmatrix(set, bp, Side::right);
    const Matrix got = d.dense();
    if (got.rows() != 6 || got.cols() != 4) return {false, "unexpected matrix size"};
    for (Eigen::Index r = 0; r < 6; ++r)
        for (Eigen::Index c = 0; c < 4; ++c)
            if (got(r, c) != Complex(kExpected[r][c], 0.0))
                return {false, "matrix entry mismatch at row " + std::to_string(r + 1)};

    const RankResult right = rank_of(d, tol);
    const RankResult left = rank_of(build_dmatrix(set, bp, Side::left), tol);
    const StabilityReport rep = check_locally_stable(set, tol, exec);
    const bool ok = right.rank == 3 && right.at_target() && left.rank == 3 && left.at_target() &&
                    rep.stable && !rep.marginal && rep.overall() == "locally-stable";
    std::string detail = "matrix exact, ranks " + std::to_string(left.rank) + "|" +
                         std::to_string(right.rank) + ", " + rep.overall();
    return {ok, detail};
}

CheckResult stability_summary(const StabilityReport& rep, std::size_t cardinality,
                              std::size_t expected_card, bool require_gap) {
    if (cardinality != expected_card)
        return {false, "cardinality " + std::to_string(cardinality) + ", expected " +
                           std::to_string(expected_card)};
    double min_gap = std::numeric_limits<double>::infinity();
    for (const StabilityEntry& e : rep.entries)
        if (e.rank.tolerance_used > 0.0)
            min_gap = std::min(min_gap, e.rank.sigma_rank / e.rank.tolerance_used);
    bool ok = rep.stable && !rep.marginal;
    std::string detail = std::to_string(rep.entries.size()) + " rank checks, " + rep.overall();
    if (require_gap) {
        ok = ok && min_gap >= 1e3;
        detail += ", min sigma/cutoff " + fmt_gap(min_gap);
    }
    return {ok, detail};
}

CheckResult check_weight_fourier(std::vector<int> dims, std::size_t expected_card,
                                 const TolerancePolicy& tol, const ExecPolicy& exec) {
    const StateSet set = weight_fourier_set({SystemShape(std::move(dims)), {}});
    const StabilityReport rep =
        check_every_bipartition(set, BipartitionSweep::exhaustive, tol, exec);
    return stability_summary(rep, set.cardinality(), expected_card, true);
}

CheckResult check_genuine(const TolerancePolicy& tol, const ExecPolicy& exec) {
    const StateSet set = weight_fourier_genuine_set({SystemShape({2, 2, 2}), {}});
    if (set.cardinality() != 8) return {false, "cardinality != 8"};
    for (std::size_t k = 0; k < set.cardinality(); ++k)
        if (!is_genuinely_entangled(set.state(k), tol))
            return {false, "state " + std::to_string(k + 1) + " not genuinely entangled"};
    const StabilityReport rep =
        check_every_bipartition(set, BipartitionSweep::exhaustive, tol, exec);
    CheckResult r = stability_summary(rep, set.cardinality(), 8, false);
    r.detail = "8 genuinely entangled states, " + r.detail;
    return r;
}

// The n = 3 image table, frozen by hand from U|i>: rows are flat-index
// amplitude patterns, all entries 0 or +-1, party 0 most significant bit.
CheckResult check_w3(const TolerancePolicy& tol, const ExecPolicy& exec) {
    static const int kTable[8][8] = {
        {0, 1, 1, 0, 1, 0, 0, 0},    // |100>+|010>+|001>
        {1, 0, 0, 1, 0, 1, 0, 0},    // |101>+|011>+|000>
        {1, 0, 0, -1, 0, 0, 1, 0},   // |110>+|000>-|011>
        {0, 1, -1, 0, 0, 0, 0, 1},   // |111>+|001>-|010>
        {1, 0, 0, 0, 0, -1, -1, 0},  // |000>-|110>-|101>
        {0, 1, 0, 0, -1, 0, 0, -1},  // |001>-|111>-|100>
        {0, 0, 1, 0, -1, 0, 0, 1},   // |010>-|100>+|111>
        {0, 0, 0, 1, 0, -1, 1, 0},   // |011>-|101>+|110>
    };

    const StateSet set = w_state_basis(3);
    if (set.cardinality() != 8) return {false, "cardinality != 8"};
    for (std::size_t i = 0; i < 8; ++i) {
        const Vector& a = set.state(i).amps();
        for (Eigen::Index f = 0; f < 8; ++f)
            if (a(f) != Complex(kTable[i][f], 0.0))
                return {false, "image table mismatch at state " + std::to_string(i + 1)};
    }

    const StabilityReport rep =
        check_every_bipartition(set, BipartitionSweep::one_vs_rest, tol, exec);
    bool ok = rep.stable && !rep.marginal && rep.entries.size() == 3;
    std::string ranks;
    for (const StabilityEntry& e : rep.entries) {
        ok = ok && e.rank.rank == 15 && e.rank.target == 15;
        ranks += (ranks.empty() ? "" : ",") + std::to_string(e.rank.rank);
    }
    return {ok, "image table exact, one-vs-rest ranks " + ranks};
}

CheckResult check_w_exhaustive(int n, const TolerancePolicy& tol, const ExecPolicy& exec) {
    const StateSet set = w_state_basis(n);
    const StabilityReport rep =
        check_every_bipartition(set, BipartitionSweep::exhaustive, tol, exec);
    return stability_summary(rep, set.cardinality(), std::size_t{1} << n, false);
}

// Random subsets of the n-qubit image basis, size 2^n - 2^(n-2), each
// required to stay stable under every bipartition.
CheckResult check_w_subsets(int n, std::size_t keep, unsigned long long seed_base,
                            const TolerancePolicy& tol, const ExecPolicy& exec) {
    const StateSet basis = w_state_basis(n);
    const std::size_t total = basis.cardinality();
    int passed = 0;
    constexpr int kTrials = 20;
    for (int t = 0; t < kTrials; ++t) {
        std::mt19937_64 rng(seed_base + static_cast<unsigned long long>(t));
        std::vector<std::size_t> order(total);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        order.resize(keep);
        std::sort(order.begin(), order.end());
        const StateSet sub = basis.subset(order);
        const StabilityReport rep =
            check_every_bipartition(sub, BipartitionSweep::exhaustive, tol, exec);
        if (rep.stable && !rep.marginal) ++passed;
    }
    return {passed == kTrials, std::to_string(passed) + "/" + std::to_string(kTrials) +
                                   " subsets of size " + std::to_string(keep) + " stable"};
}

// n = 6 sweep: 4032 x 1024 per party, done through the Gram route (the
// default row/col switch is tuned for thinner matrices, so force it here).
CheckResult check_w6(const TolerancePolicy& tol, const ExecPolicy& exec) {
    TolerancePolicy t = tol;
    t.gram_row_factor = 1;
    const StateSet set = w_state_basis(6);
    const StabilityReport rep = check_every_bipartition(set, BipartitionSweep::one_vs_rest, t, exec);
    bool ok = rep.stable && !rep.marginal && rep.entries.size() == 6;
    for (const StabilityEntry& e : rep.entries) ok = ok && e.rank.rank == 1023;
    return {ok, "6 one-vs-rest checks, ranks 1023, " + rep.overall()};
}

} // namespace

ReproduceReport run_reproduce(bool include_n6, const TolerancePolicy& tol, const ExecPolicy& exec) {
    ReproduceReport report;
    run_check(report, "bell-matrix", [&] { return check_bell(tol, exec); });
    run_check(report, "weight-fourier-2x2x2",
              [&] { return check_weight_fourier({2, 2, 2}, 7, tol, exec); });
    run_check(report, "weight-fourier-2x2x3",
              [&] { return check_weight_fourier({2, 2, 3}, 10, tol, exec); });
    run_check(report, "weight-fourier-3x3",
              [&] { return check_weight_fourier({3, 3}, 5, tol, exec); });
    run_check(report, "genuine-2x2x2", [&] { return check_genuine(tol, exec); });
    run_check(report, "w-basis-n3", [&] { return check_w3(tol, exec); });
    run_check(report, "w-basis-n4", [&] { return check_w_exhaustive(4, tol, exec); });
    run_check(report, "w-basis-n5", [&] { return check_w_exhaustive(5, tol, exec); });
    run_check(report, "w-subsets-n3", [&] { return check_w_subsets(3, 6, 101, tol, exec); });
    run_check(report, "w-subsets-n4", [&] { return check_w_subsets(4, 12, 202, tol, exec); });
    if (include_n6) run_check(report, "w-basis-n6", [&] { return check_w6(tol, exec); });
    return report;
}

std::string render_table(const ReproduceReport& report) {
    std::size_t width = 5;
    for (const ReproduceCheck& c : report.checks) width = std::max(width, c.name.size());

    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(width) + 2) << "check" << std::setw(8)
       << "result" << std::right << std::setw(10) << "time(ms)" << "  detail\n";
    for (const ReproduceCheck& c : report.checks) {
        os << std::left << std::setw(static_cast<int>(width) + 2) << c.name << std::setw(8)
           << (c.pass ? "PASS" : "FAIL") << std::right << std::setw(10) << std::fixed
           << std::setprecision(1) << c.ms << "  " << c.detail << "\n";
    }
    os << (report.all_pass ? "overall: PASS" : "overall: FAIL") << " (" << report.checks.size()
       << " checks, " << std::fixed << std::setprecision(1) << report.total_ms << " ms)\n";
    return os.str();
}

std::string to_json(const ReproduceReport& report, int indent) {
    nlohmann::ordered_json j;
    j["checks"] = nlohmann::ordered_json::array();
    for (const ReproduceCheck& c : report.checks) {
        nlohmann::ordered_json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["ms"] = c.ms;
        e["detail"] = c.detail;
        j["checks"].push_back(std::move(e));
    }
    j["all_pass"] = report.all_pass;
    j["total_ms"] = report.total_ms;
    return j.dump(indent);
}

} // namespace qstable
