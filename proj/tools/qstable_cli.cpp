// qstable: construct, verify, certify, bound, profile and search orthogonal
// state sets through the shared library's C interface.
//
// Exit codes: 0 success (verify: stable), 1 not stable / no witness /
// failing checks, 2 marginal rank decision, 3 input error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <qstable.h>

namespace {

using Json = nlohmann::json;

struct OwnedString {
    char* p = nullptr;
    ~OwnedString() { qstable_string_free(p); }
    std::string str() const { return p ? std::string(p) : std::string(); }
};

struct OwnedSet {
    qstable_set* p = nullptr;
    ~OwnedSet() { qstable_set_free(p); }
};

int input_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 3;
}

int api_error(qstable_status st) {
    std::cerr << "error (" << qstable_status_name(st) << "): " << qstable_last_error() << "\n";
    return 3;
}

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << text;
    return bool(out);
}

// Shared numeric/search options; zero means "library default".
struct RunConfig {
    double tol_rank = 0.0;
    double tol_orth = 0.0;
    unsigned long long seed = 0;
    int trials = 0;
    std::size_t target_size = 0;
    double time_budget = 0.0;
    std::string out_path;
};

void add_tolerance_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--tol-rank", cfg.tol_rank,
                    "singular-value cutoff scale, in (0, 1e-2)");
    cmd->add_option("--tol-orth", cfg.tol_orth,
                    "relative overlap accepted as orthogonal, in (0, 1e-2)");
}

void add_out_flag(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--out", cfg.out_path, "write the JSON document to this path");
}

// Overrides must sit inside (0, 1e-2); anything else is an input error.
std::optional<std::string> bad_tolerance(const RunConfig& cfg) {
    for (const auto& [name, v] : {std::pair<const char*, double>{"--tol-rank", cfg.tol_rank},
                                  {"--tol-orth", cfg.tol_orth}}) {
        if (v == 0.0) continue;
        if (!(v > 0.0) || !(v < 1e-2))
            return std::string(name) + " must lie strictly between 0 and 1e-2";
    }
    return std::nullopt;
}

qstable_options make_options(const RunConfig& cfg) {
    qstable_options opts;
    qstable_options_init(&opts);
    opts.rank_eps = cfg.tol_rank;
    opts.orth_eps = cfg.tol_orth;
    opts.seed = cfg.seed;
    opts.trials = cfg.trials;
    opts.target_size = cfg.target_size;
    opts.time_budget_seconds = cfg.time_budget;
    return opts;
}

int emit_json(const RunConfig& cfg, const std::string& json_text) {
    if (cfg.out_path.empty()) return 0;
    if (!write_file(cfg.out_path, json_text))
        return input_error("cannot write " + cfg.out_path);
    return 0;
}

std::string bipartition_str(const Json& bp) {
    auto side = [](const Json& parties) {
        std::string s = "{";
        for (std::size_t i = 0; i < parties.size(); ++i)
            s += (i ? "," : "") + std::to_string(parties[i].get<int>());
        return s + "}";
    };
    return side(bp.at("left")) + "|" + side(bp.at("right"));
}

// Loads a set file through the C API; on failure prints a diagnostic and
// leaves out.p null.
int load_set(const std::string& path, double orth_eps, OwnedSet& out) {
    const auto text = read_file(path);
    if (!text) return input_error("cannot read " + path);
    const qstable_status st = qstable_set_from_json(text->c_str(), orth_eps, &out.p);
    if (st != QSTABLE_OK) return api_error(st);
    return 0;
}

// The all-bipartitions sweep is exponential in the party count; refuse big
// instances unless the user insists.
constexpr int kLargePartyCap = 6;

std::optional<int> party_count_of_file(const std::string& path) {
    const auto text = read_file(path);
    if (!text) return std::nullopt;
    const Json doc = Json::parse(*text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("dims") ||
        !doc.at("dims").is_array())
        return std::nullopt;
    return static_cast<int>(doc.at("dims").size());
}

// ---- construct ---------------------------------------------------------

int run_construct(const std::string& kind, const std::vector<int>& dims, int n,
                  const RunConfig& cfg) {
    OwnedSet set;
    qstable_status st = QSTABLE_OK;
    if (kind == "theorem5" || kind == "sg") {
        if (dims.empty()) return input_error(kind + " needs --dims");
        st = qstable_construct_weight_fourier(dims.data(), static_cast<int>(dims.size()),
                                              kind == "sg" ? 1 : 0, &set.p);
    } else if (kind == "wbasis") {
        if (n == 0) return input_error("wbasis needs --n");
        st = qstable_construct_w_basis(n, &set.p);
    } else {
        st = qstable_construct_bell(&set.p);
    }
    if (st != QSTABLE_OK) return api_error(st);

    OwnedString json;
    if ((st = qstable_set_to_json(set.p, &json.p)) != QSTABLE_OK) return api_error(st);
    if (cfg.out_path.empty()) {
        std::cout << json.str() << "\n";
        return 0;
    }
    if (!write_file(cfg.out_path, json.str())) return input_error("cannot write " + cfg.out_path);
    std::size_t card = 0;
    qstable_set_cardinality(set.p, &card);
    std::cout << "wrote " << card << " states to " << cfg.out_path << "\n";
    return 0;
}

// ---- verify ------------------------------------------------------------

int run_verify(const std::string& path, const std::string& mode, bool exhaustive,
               bool allow_large, const RunConfig& cfg) {
    if (mode == "all-bipartitions" && !allow_large) {
        if (const auto n = party_count_of_file(path); n && *n > kLargePartyCap)
            return input_error("all-bipartitions on " + std::to_string(*n) +
                               " parties is a long run; pass --allow-large to proceed");
    }
    OwnedSet set;
    if (const int rc = load_set(path, cfg.tol_orth, set); rc != 0) return rc;

    const qstable_options opts = make_options(cfg);
    int verdict = 0;
    OwnedString report_json;
    const qstable_status st =
        qstable_verify(set.p, mode.c_str(), exhaustive ? 1 : 0, &opts, &verdict, &report_json.p);
    if (st != QSTABLE_OK) return api_error(st);

    const Json report = Json::parse(report_json.str());
    std::cout << "mode: " << report.at("mode").get<std::string>() << "\n";
    std::cout << std::left << std::setw(18) << "bipartition" << std::setw(11) << "measuring"
              << std::right << std::setw(6) << "rank" << std::setw(8) << "target"
              << "  verdict\n";
    for (const Json& e : report.at("entries")) {
        std::string verdict_str = e.at("verdict").get<std::string>();
        if (e.at("marginal").get<bool>()) verdict_str += " (marginal)";
        std::cout << std::left << std::setw(18) << bipartition_str(e.at("bipartition"))
                  << std::setw(11) << e.at("measuring").get<std::string>() << std::right
                  << std::setw(6) << e.at("rank").get<long>() << std::setw(8)
                  << e.at("target").get<long>() << "  " << verdict_str << "\n";
    }
    std::cout << "overall: " << report.at("overall").get<std::string>() << "\n";

    if (const int rc = emit_json(cfg, report_json.str()); rc != 0) return rc;
    return verdict;
}

// ---- certify -----------------------------------------------------------

int run_certify(const std::string& path, const std::vector<int>& left,
                const std::string& measuring, const RunConfig& cfg) {
    OwnedSet set;
    if (const int rc = load_set(path, cfg.tol_orth, set); rc != 0) return rc;

    const qstable_options opts = make_options(cfg);
    OwnedString cert_json;
    const qstable_status st = qstable_certify(set.p, left.data(), static_cast<int>(left.size()),
                                              measuring.c_str(), &opts, &cert_json.p);
    if (st == QSTABLE_ERR_NO_CERTIFICATE) {
        std::cout << "no certificate: " << qstable_last_error() << "\n";
        return 1;
    }
    if (st != QSTABLE_OK) return api_error(st);

    const Json cert = Json::parse(cert_json.str());
    std::cout << "bipartition: " << bipartition_str(cert.at("bipartition"))
              << "  measuring: " << cert.at("measuring").get<std::string>() << "\n";
    std::cout << "checks:";
    for (const auto& [name, ok] : cert.at("checks").items())
        std::cout << " " << name << "=" << (ok.get<bool>() ? "yes" : "no");
    std::cout << "\n";
    std::cout << "outcome operators: " << cert.at("m_1").size() << "x" << cert.at("m_1").size()
              << " (write --out for the matrices)\n";
    return emit_json(cfg, cert_json.str());
}

// ---- bounds ------------------------------------------------------------

int run_bounds(const std::vector<int>& dims, const RunConfig& cfg) {
    OwnedString json;
    const qstable_status st =
        qstable_bounds(dims.data(), static_cast<int>(dims.size()), &json.p);
    if (st != QSTABLE_OK) return api_error(st);
    const Json b = Json::parse(json.str());
    std::cout << "lower_s: " << b.at("lower_s").get<long>();
    if (b.contains("lower_S")) std::cout << "  lower_S: " << b.at("lower_S").get<long>();
    std::cout << "\n";
    return emit_json(cfg, json.str());
}

// ---- entanglement ------------------------------------------------------

int run_entanglement(const std::string& path, const RunConfig& cfg) {
    OwnedSet set;
    if (const int rc = load_set(path, cfg.tol_orth, set); rc != 0) return rc;

    const qstable_options opts = make_options(cfg);
    OwnedString json;
    const qstable_status st = qstable_entanglement(set.p, &opts, &json.p);
    if (st != QSTABLE_OK) return api_error(st);

    const Json prof = Json::parse(json.str());
    for (const Json& s : prof.at("states")) {
        std::cout << "state " << s.at("index").get<int>() << ":";
        for (const Json& b : s.at("bipartitions"))
            std::cout << " " << bipartition_str(b.at("bipartition")) << ":"
                      << b.at("schmidt_rank").get<long>();
        std::cout << (s.at("genuinely_entangled").get<bool>() ? "  genuine" : "") << "\n";
    }
    std::cout << "all genuinely entangled: "
              << (prof.at("all_genuinely_entangled").get<bool>() ? "yes" : "no") << "\n";
    if (prof.contains("entangled_count"))
        std::cout << "entangled states: " << prof.at("entangled_count").get<long>() << "\n";
    return emit_json(cfg, json.str());
}

// ---- search ------------------------------------------------------------

int print_search_outcome(const std::string& outcome_json, const RunConfig& cfg) {
    const Json o = Json::parse(outcome_json);
    const bool found = !o.at("best_found").is_null();
    std::cout << "mode: " << o.at("mode").get<std::string>() << "  trials: "
              << o.at("trials").get<int>() << "  seed: " << o.at("seed").get<long long>() << "\n";
    if (found)
        std::cout << "best stable set: " << o.at("best_size").get<long>() << " states\n";
    else
        std::cout << "no stable witness found\n";
    std::cout << "conclusive: " << (o.at("exhausted").get<bool>() ? "yes" : "no")
              << "  log entries: " << o.at("log").size() << "\n";
    if (const int rc = emit_json(cfg, outcome_json); rc != 0) return rc;
    return found ? 0 : 1;
}

int run_search(const std::string& path, bool probe, const std::vector<int>& dims,
               const std::string& mode, bool exhaustive, const RunConfig& cfg) {
    const qstable_options opts = make_options(cfg);
    OwnedString json;
    if (probe) {
        if (dims.empty()) return input_error("--probe needs --dims");
        if (!path.empty()) return input_error("--probe draws its own sets; drop the file argument");
        const qstable_status st = qstable_search_probe(
            dims.data(), static_cast<int>(dims.size()), mode.c_str(), &opts, &json.p);
        if (st != QSTABLE_OK) return api_error(st);
        return print_search_outcome(json.str(), cfg);
    }
    if (path.empty()) return input_error("search needs a set file (or --probe --dims ...)");
    OwnedSet set;
    if (const int rc = load_set(path, cfg.tol_orth, set); rc != 0) return rc;
    const qstable_status st =
        qstable_search_minimize(set.p, mode.c_str(), exhaustive ? 1 : 0, &opts, &json.p);
    if (st != QSTABLE_OK) return api_error(st);
    const int rc = print_search_outcome(json.str(), cfg);
    return rc == 1 ? 0 : rc;  // minimize always keeps the input set as fallback
}

// ---- reproduce ---------------------------------------------------------

int run_reproduce_cmd(bool n6, const RunConfig& cfg) {
    const qstable_options opts = make_options(cfg);
    OwnedString table, json;
    int failures = 0;
    const qstable_status st = qstable_reproduce(n6 ? 1 : 0, &opts, &table.p, &json.p, &failures);
    if (st != QSTABLE_OK) return api_error(st);
    std::cout << table.str();
    if (const int rc = emit_json(cfg, json.str()); rc != 0) return rc;
    return failures > 0 ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("qstable ") + qstable_version() +
                 " — local stability of orthogonal state sets"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<int> dims;
    int n = 0;
    std::string kind, set_path, mode = "single-party", measuring = "right";
    std::vector<int> left;
    bool exhaustive = false, allow_large = false, probe = false, n6 = false;

    CLI::App* construct = app.add_subcommand("construct", "emit a built-in state set as JSON");
    construct->add_option("kind", kind, "one of: theorem5, sg, wbasis, bell")
        ->required()
        ->check(CLI::IsMember({"theorem5", "sg", "wbasis", "bell"}));
    construct->add_option("--dims", dims, "local dimensions, e.g. --dims 2,2,3")->delimiter(',');
    construct->add_option("--n", n, "qubit count for wbasis (3..12)");
    add_out_flag(construct, cfg);

    CLI::App* verify = app.add_subcommand("verify", "decide stability of a set file");
    verify->add_option("file", set_path, "StateSet JSON")->required();
    verify->add_option("--mode", mode, "single-party (default) or all-bipartitions")
        ->check(CLI::IsMember({"single-party", "all-bipartitions"}));
    verify->add_flag("--exhaustive", exhaustive,
                     "sweep both sides of every bipartition instead of one-vs-rest");
    verify->add_flag("--allow-large", allow_large, "lift the 6-party cap on all-bipartitions");
    add_tolerance_flags(verify, cfg);
    add_out_flag(verify, cfg);

    CLI::App* certify = app.add_subcommand(
        "certify", "extract a nontrivial orthogonality-preserving POVM on one side");
    certify->add_option("file", set_path, "StateSet JSON")->required();
    certify->add_option("--left", left, "1-based parties of the left side, e.g. --left 1,3")
        ->required()
        ->delimiter(',');
    certify->add_option("--measuring", measuring, "which side carries the POVM (left|right)")
        ->check(CLI::IsMember({"left", "right"}));
    add_tolerance_flags(certify, cfg);
    add_out_flag(certify, cfg);

    CLI::App* bounds = app.add_subcommand("bounds", "cardinality floors for stable sets");
    bounds->add_option("--dims", dims, "local dimensions")->required()->delimiter(',');
    add_out_flag(bounds, cfg);

    CLI::App* entanglement =
        app.add_subcommand("entanglement", "Schmidt ranks and genuine entanglement per state");
    entanglement->add_option("file", set_path, "StateSet JSON")->required();
    add_tolerance_flags(entanglement, cfg);
    add_out_flag(entanglement, cfg);

    CLI::App* search = app.add_subcommand("search", "shrink a stable set, or probe the bound");
    search->add_option("file", set_path, "StateSet JSON (omit with --probe)");
    search->add_flag("--probe", probe, "hunt for a bound-saturating stable set from random draws");
    search->add_option("--dims", dims, "local dimensions for --probe")->delimiter(',');
    search->add_option("--mode", mode, "stability notion to preserve (single-party default)")
        ->check(CLI::IsMember({"single-party", "all-bipartitions"}));
    search->add_flag("--exhaustive", exhaustive,
                     "sweep the whole subset lattice (cardinality <= 12)");
    search->add_option("--seed", cfg.seed, "RNG seed");
    search->add_option("--trials", cfg.trials, "restarts / draws");
    search->add_option("--target-size", cfg.target_size,
                       "stop at this size (clamped up to the cardinality bound)");
    search->add_option("--time-budget", cfg.time_budget, "seconds before giving up");
    add_tolerance_flags(search, cfg);
    add_out_flag(search, cfg);

    CLI::App* reproduce = app.add_subcommand("reproduce", "run the desk-scale check battery");
    reproduce->add_flag("--n6", n6, "include the six-qubit sweep (minutes)");
    add_tolerance_flags(reproduce, cfg);
    add_out_flag(reproduce, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    if (const auto msg = bad_tolerance(cfg)) return input_error(*msg);

    try {
        if (construct->parsed()) return run_construct(kind, dims, n, cfg);
        if (verify->parsed()) return run_verify(set_path, mode, exhaustive, allow_large, cfg);
        if (certify->parsed()) return run_certify(set_path, left, measuring, cfg);
        if (bounds->parsed()) return run_bounds(dims, cfg);
        if (entanglement->parsed()) return run_entanglement(set_path, cfg);
        if (search->parsed()) return run_search(set_path, probe, dims, mode, exhaustive, cfg);
        if (reproduce->parsed()) return run_reproduce_cmd(n6, cfg);
    } catch (const std::exception& e) {
        return input_error(e.what());
    }
    return input_error("no subcommand");
}
