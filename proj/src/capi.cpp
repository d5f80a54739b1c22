#include "qstable.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "core/constructions.hpp"
#include "core/entanglement.hpp"
#include "core/errors.hpp"
#include "core/json_io.hpp"
#include "core/rank.hpp"
#include "core/reproduce.hpp"
#include "core/search.hpp"
#include "core/stability.hpp"

using namespace qstable;

struct qstable_set {
    StateSet set;
};

namespace {

thread_local std::string t_last_error;

qstable_status to_status(errc code) {
    switch (code) {
        case errc::invalid_argument: return QSTABLE_ERR_INVALID_ARGUMENT;
        case errc::parse_error: return QSTABLE_ERR_PARSE;
        case errc::orthogonality_violation: return QSTABLE_ERR_ORTHOGONALITY;
        case errc::degenerate_set: return QSTABLE_ERR_DEGENERATE_SET;
        case errc::no_certificate: return QSTABLE_ERR_NO_CERTIFICATE;
        case errc::limit_exceeded: return QSTABLE_ERR_LIMIT_EXCEEDED;
        case errc::internal: return QSTABLE_ERR_INTERNAL;
    }
    return QSTABLE_ERR_INTERNAL;
}

// Runs body, translating exceptions into status codes + thread-local message.
template <typename Body>
qstable_status guarded(Body&& body) {
    t_last_error.clear();
    try {
        return body();
    } catch (const error& e) {
        t_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        t_last_error = "out of memory";
        return QSTABLE_ERR_INTERNAL;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return QSTABLE_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown error";
        return QSTABLE_ERR_INTERNAL;
    }
}

qstable_status set_string(char** out, const std::string& text) {
    if (!out) return QSTABLE_OK;
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) {
        t_last_error = "out of memory";
        return QSTABLE_ERR_INTERNAL;
    }
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
    return QSTABLE_OK;
}

void require(bool cond, const char* what) {
    if (!cond) fail(errc::invalid_argument, what);
}

int env_thread_cap() {
    const char* env = std::getenv("QSTABLE_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) return 0;  // malformed: ignore
    return static_cast<int>(std::min<long>(v, 256));
}

// threads <= 0 means auto; QSTABLE_THREADS is a hard cap either way.
int resolve_threads(int requested) {
    int t = requested;
    if (t <= 0) {
        t = static_cast<int>(std::thread::hardware_concurrency());
        if (t <= 0) t = 1;
        t = std::min(t, 16);
    }
    if (const int cap = env_thread_cap(); cap > 0) t = std::min(t, cap);
    return std::max(t, 1);
}

struct Resolved {
    TolerancePolicy tol;
    ExecPolicy exec;
    SearchConfig search;
};

Resolved resolve(const qstable_options* opts) {
    Resolved r;
    if (opts) {
        if (opts->rank_eps != 0.0) r.tol.rank_eps = opts->rank_eps;
        if (opts->orth_eps != 0.0) r.tol.orth_eps = opts->orth_eps;
        if (opts->gram_row_factor != 0) r.tol.gram_row_factor = opts->gram_row_factor;
        if (opts->trials != 0) {
            require(opts->trials > 0, "trials must be positive");
            r.search.trials = opts->trials;
        }
        r.search.seed = opts->seed;
        r.search.target_size = opts->target_size;
        require(opts->time_budget_seconds >= 0, "time budget must be nonnegative");
        r.search.time_budget_seconds = opts->time_budget_seconds;
        r.exec.threads = resolve_threads(opts->threads);
    } else {
        r.exec.threads = resolve_threads(0);
    }
    validate(r.tol);
    return r;
}

SystemShape shape_from(const int* dims, int n_parties) {
    require(dims != nullptr, "dims must not be null");
    require(n_parties >= 1, "need at least one party");
    return SystemShape(std::vector<int>(dims, dims + n_parties));
}

StabilityMode mode_from(const char* mode) {
    require(mode != nullptr, "mode must not be null");
    const std::string m = mode;
    if (m == "single-party") return StabilityMode::single_party;
    if (m == "all-bipartitions") return StabilityMode::all_bipartitions;
    fail(errc::invalid_argument, "mode must be 'single-party' or 'all-bipartitions', got '" + m + "'");
}

const StateSet& deref(const qstable_set* set) {
    require(set != nullptr, "set must not be null");
    return set->set;
}

qstable_status emit_set(StateSet&& s, qstable_set** out) {
    require(out != nullptr, "output pointer must not be null");
    *out = new qstable_set{std::move(s)};
    return QSTABLE_OK;
}

} // namespace

extern "C" {

void qstable_options_init(qstable_options* opts) {
    if (!opts) return;
    std::memset(opts, 0, sizeof(*opts));
}

const char* qstable_version(void) { return "0.1.0"; }

const char* qstable_status_name(qstable_status status) {
    switch (status) {
        case QSTABLE_OK: return "ok";
        case QSTABLE_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case QSTABLE_ERR_PARSE: return "parse-error";
        case QSTABLE_ERR_ORTHOGONALITY: return "orthogonality-violation";
        case QSTABLE_ERR_DEGENERATE_SET: return "degenerate-set";
        case QSTABLE_ERR_NO_CERTIFICATE: return "no-certificate";
        case QSTABLE_ERR_LIMIT_EXCEEDED: return "limit-exceeded";
        case QSTABLE_ERR_INTERNAL: return "internal-error";
    }
    return "unknown";
}

const char* qstable_last_error(void) { return t_last_error.c_str(); }

void qstable_string_free(char* s) { std::free(s); }

void qstable_set_free(qstable_set* set) { delete set; }

qstable_status qstable_set_from_json(const char* json_text, double orth_eps, qstable_set** out) {
    return guarded([&]() -> qstable_status {
        require(json_text != nullptr, "json text must not be null");
        const double eps = orth_eps > 0 ? orth_eps : 1e-10;
        return emit_set(state_set_from_json(json_text, eps), out);
    });
}

qstable_status qstable_set_to_json(const qstable_set* set, char** json_out) {
    return guarded([&]() -> qstable_status {
        require(json_out != nullptr, "output pointer must not be null");
        return set_string(json_out, to_json(deref(set)));
    });
}

qstable_status qstable_set_cardinality(const qstable_set* set, size_t* out) {
    return guarded([&]() -> qstable_status {
        require(out != nullptr, "output pointer must not be null");
        *out = deref(set).cardinality();
        return QSTABLE_OK;
    });
}

qstable_status qstable_construct_weight_fourier(const int* dims, int n_parties, int genuine,
                                                qstable_set** out) {
    return guarded([&]() -> qstable_status {
        WeightFourierSpec spec{shape_from(dims, n_parties), {}};
        return emit_set(genuine ? weight_fourier_genuine_set(spec) : weight_fourier_set(spec), out);
    });
}

qstable_status qstable_construct_w_basis(int n, qstable_set** out) {
    return guarded([&]() -> qstable_status { return emit_set(w_state_basis(n), out); });
}

qstable_status qstable_construct_bell(qstable_set** out) {
    return guarded([&]() -> qstable_status { return emit_set(bell_set(), out); });
}

qstable_status qstable_random_orthogonal_set(const int* dims, int n_parties, size_t size,
                                             unsigned long long seed, qstable_set** out) {
    return guarded([&]() -> qstable_status {
        return emit_set(random_orthogonal_set(shape_from(dims, n_parties), size, seed), out);
    });
}

qstable_status qstable_verify(const qstable_set* set, const char* mode, int exhaustive,
                              const qstable_options* opts, int* verdict_out,
                              char** report_json_out) {
    return guarded([&]() -> qstable_status {
        const StateSet& s = deref(set);
        const Resolved r = resolve(opts);
        const StabilityMode m = mode_from(mode);
        const StabilityReport report =
            m == StabilityMode::single_party
                ? check_locally_stable(s, r.tol, r.exec)
                : check_every_bipartition(s,
                                          exhaustive ? BipartitionSweep::exhaustive
                                                     : BipartitionSweep::one_vs_rest,
                                          r.tol, r.exec);
        if (verdict_out) *verdict_out = report.marginal ? 2 : (report.stable ? 0 : 1);
        if (report_json_out) return set_string(report_json_out, to_json(report));
        return QSTABLE_OK;
    });
}

qstable_status qstable_certify(const qstable_set* set, const int* left_parties, int left_count,
                               const char* measuring, const qstable_options* opts,
                               char** certificate_json_out) {
    return guarded([&]() -> qstable_status {
        const StateSet& s = deref(set);
        const Resolved r = resolve(opts);
        require(left_parties != nullptr && left_count >= 1, "left side must be nonempty");
        require(measuring != nullptr, "measuring side must not be null");

        const int n = s.shape().party_count();
        std::vector<bool> on_left(static_cast<std::size_t>(n), false);
        std::vector<int> left;
        for (int i = 0; i < left_count; ++i) {
            const int p = left_parties[i];  // 1-based
            require(p >= 1 && p <= n, "party index out of range");
            require(!on_left[static_cast<std::size_t>(p - 1)], "duplicate party on the left side");
            on_left[static_cast<std::size_t>(p - 1)] = true;
            left.push_back(p - 1);
        }
        std::vector<int> right;
        for (int p = 0; p < n; ++p)
            if (!on_left[static_cast<std::size_t>(p)]) right.push_back(p);
        const Bipartition bp(left, right, n);

        // The caller's "left" may land on either canonical side.
        const Side caller_left = bp.side_of(left.front());
        const std::string meas = measuring;
        Side side;
        if (meas == "left") side = caller_left;
        else if (meas == "right") side = other_side(caller_left);
        else fail(errc::invalid_argument, "measuring must be 'left' or 'right', got '" + meas + "'");

        const PovmCertificate cert = extract_certificate(s, bp, side, r.tol);
        return set_string(certificate_json_out, to_json(cert));
    });
}

qstable_status qstable_bounds(const int* dims, int n_parties, char** json_out) {
    return guarded([&]() -> qstable_status {
        return set_string(json_out, bounds_json(shape_from(dims, n_parties)));
    });
}

qstable_status qstable_entanglement(const qstable_set* set, const qstable_options* opts,
                                    char** json_out) {
    return guarded([&]() -> qstable_status {
        const Resolved r = resolve(opts);
        return set_string(json_out, entanglement_json(deref(set), r.tol));
    });
}

qstable_status qstable_search_minimize(const qstable_set* set, const char* mode,
                                       int exhaustive_enumeration, const qstable_options* opts,
                                       char** outcome_json_out) {
    return guarded([&]() -> qstable_status {
        const StateSet& s = deref(set);
        Resolved r = resolve(opts);
        r.search.mode = mode_from(mode);
        r.search.exhaustive_enumeration = exhaustive_enumeration != 0;
        const SearchOutcome outcome = minimize_subset(s, r.search, r.tol, r.exec);
        return set_string(outcome_json_out, to_json(outcome, r.search));
    });
}

qstable_status qstable_search_probe(const int* dims, int n_parties, const char* mode,
                                    const qstable_options* opts, char** outcome_json_out) {
    return guarded([&]() -> qstable_status {
        const SystemShape shape = shape_from(dims, n_parties);
        Resolved r = resolve(opts);
        r.search.mode = mode_from(mode);
        const SearchOutcome outcome = probe_bound(shape, r.search, r.tol, r.exec);
        return set_string(outcome_json_out, to_json(outcome, r.search));
    });
}

qstable_status qstable_reproduce(int include_n6, const qstable_options* opts, char** table_out,
                                 char** report_json_out, int* failures_out) {
    return guarded([&]() -> qstable_status {
        const Resolved r = resolve(opts);
        const ReproduceReport report = run_reproduce(include_n6 != 0, r.tol, r.exec);
        if (failures_out) {
            int failures = 0;
            for (const ReproduceCheck& c : report.checks)
                if (!c.pass) ++failures;
            *failures_out = failures;
        }
        if (table_out) {
            const qstable_status st = set_string(table_out, render_table(report));
            if (st != QSTABLE_OK) return st;
        }
        if (report_json_out) return set_string(report_json_out, to_json(report));
        return QSTABLE_OK;
    });
}

} // extern "C"
