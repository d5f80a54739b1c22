#include "json_io.hpp"

#include <json.hpp>

#include "errors.hpp"

namespace qstable {
namespace {

using Json = nlohmann::ordered_json;

Json complex_json(const Complex& z) {
    return Json::array({z.real(), z.imag()});
}

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            row.push_back(complex_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Json parties_json(const std::vector<int>& parties) {
    Json out = Json::array();
    for (int p : parties)
        out.push_back(p + 1);
    return out;
}

Json bipartition_json(const Bipartition& bp) {
    return Json{{"left", parties_json(bp.left())}, {"right", parties_json(bp.right())}};
}

const char* side_name(Side s) {
    return s == Side::left ? "left" : "right";
}

Json set_json(const StateSet& set) {
    Json out;
    out["dims"] = set.shape().dims();
    out["label"] = set.label();
    Json states = Json::array();
    for (const auto& psi : set.states()) {
        Json amps = Json::array();
        for (Eigen::Index i = 0; i < psi.amps().size(); ++i)
            amps.push_back(complex_json(psi.amps()[i]));
        states.push_back(Json{{"amps", std::move(amps)}});
    }
    out["states"] = std::move(states);
    return out;
}

Json entry_json(const StabilityEntry& e) {
    Json out;
    out["bipartition"] = bipartition_json(e.bipartition);
    out["measuring"] = side_name(e.measuring);
    out["rank"] = e.rank.rank;
    out["target"] = e.rank.target;
    out["marginal"] = e.rank.marginal;
    out["verdict"] = e.stable ? "stable" : "not-stable";
    out["cutoff"] = e.rank.tolerance_used;
    out["sigma_rank"] = e.rank.sigma_rank;
    out["sigma_next"] = e.rank.sigma_next;
    return out;
}

[[noreturn]] void bad(const std::string& what) {
    fail(errc::parse_error, what);
}

double number_at(const Json& j, const char* what) {
    if (!j.is_number())
        bad(std::string(what) + " must be a number");
    return j.get<double>();
}

} // namespace

std::string to_json(const StateSet& set, int indent) {
    return set_json(set).dump(indent);
}

StateSet state_set_from_json(const std::string& text, double orth_eps) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        bad("top level must be an object");
    if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].empty())
        bad("\"dims\" must be a nonempty array");
    std::vector<int> dims;
    for (const auto& d : doc["dims"]) {
        if (!d.is_number_integer())
            bad("\"dims\" entries must be integers");
        dims.push_back(d.get<int>());
    }
    const SystemShape shape(dims);
    std::string label;
    if (doc.contains("label")) {
        if (!doc["label"].is_string())
            bad("\"label\" must be a string");
        label = doc["label"].get<std::string>();
    }
    if (!doc.contains("states") || !doc["states"].is_array())
        bad("\"states\" must be an array");
    std::vector<StateVector> states;
    std::size_t index = 0;
    for (const auto& s : doc["states"]) {
        ++index;
        const std::string where = "state " + std::to_string(index);
        if (!s.is_object() || !s.contains("amps") || !s["amps"].is_array())
            bad(where + " must be an object with an \"amps\" array");
        const auto& amps = s["amps"];
        if (amps.size() != shape.total_dim())
            bad(where + " has " + std::to_string(amps.size()) + " amplitudes, expected " +
                std::to_string(shape.total_dim()));
        Vector v(static_cast<Eigen::Index>(shape.total_dim()));
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const auto& a = amps[i];
            if (!a.is_array() || a.size() != 2)
                bad(where + " amplitudes must be [re, im] pairs");
            v[static_cast<Eigen::Index>(i)] = Complex(number_at(a[0], "amplitude real part"),
                                                      number_at(a[1], "amplitude imaginary part"));
        }
        states.emplace_back(shape, std::move(v));
    }
    return StateSet(shape, std::move(states), std::move(label), orth_eps);
}

std::string to_json(const StabilityReport& report, int indent) {
    Json out;
    out["mode"] = to_string(report.mode);
    Json entries = Json::array();
    for (const auto& e : report.entries)
        entries.push_back(entry_json(e));
    out["entries"] = std::move(entries);
    out["marginal"] = report.marginal;
    out["overall"] = report.overall();
    return out.dump(indent);
}

std::string to_json(const PovmCertificate& cert, int indent) {
    Json out;
    out["bipartition"] = bipartition_json(cert.bipartition);
    out["measuring"] = side_name(cert.measuring);
    out["m_b"] = matrix_json(cert.m_b);
    out["m_1"] = matrix_json(cert.m_1);
    out["m_2"] = matrix_json(cert.m_2);
    out["checks"] = Json{{"hermitian", cert.hermitian},
                         {"psd", cert.psd},
                         {"completes_to_identity", cert.completes_to_identity},
                         {"orthogonality_preserving", cert.orthogonality_preserving},
                         {"nontrivial", cert.nontrivial}};
    return out.dump(indent);
}

std::string bounds_json(const SystemShape& shape, int indent) {
    const CardinalityBounds b = cardinality_bounds(shape);
    Json out;
    out["dims"] = shape.dims();
    out["lower_s"] = b.lower_single;
    if (b.lower_every)
        out["lower_S"] = *b.lower_every;
    return out.dump(indent);
}

std::string entanglement_json(const StateSet& set, const TolerancePolicy& tol, int indent) {
    Json out;
    out["dims"] = set.shape().dims();
    out["label"] = set.label();
    Json states = Json::array();
    bool all_genuine = true;
    for (std::size_t k = 0; k < set.cardinality(); ++k) {
        const SchmidtProfile profile = schmidt_profile(set.state(k), tol);
        Json bps = Json::array();
        for (const auto& e : profile.entries) {
            Json b;
            b["bipartition"] = bipartition_json(e.bipartition);
            b["schmidt_rank"] = e.rank;
            b["singular_values"] = e.singular_values;
            bps.push_back(std::move(b));
        }
        all_genuine = all_genuine && profile.genuinely_entangled;
        states.push_back(Json{{"index", k + 1},
                              {"genuinely_entangled", profile.genuinely_entangled},
                              {"bipartitions", std::move(bps)}});
    }
    out["states"] = std::move(states);
    out["all_genuinely_entangled"] = all_genuine;
    if (set.shape() == SystemShape({2, 2}))
        out["entangled_count"] = count_entangled(set, tol);
    return out.dump(indent);
}

std::string to_json(const SearchOutcome& outcome, const SearchConfig& cfg, int indent) {
    Json out;
    out["mode"] = to_string(cfg.mode);
    out["trials"] = cfg.trials;
    out["seed"] = cfg.seed;
    out["target_size"] = cfg.target_size;
    out["exhaustive_enumeration"] = cfg.exhaustive_enumeration;
    out["best_size"] = outcome.best_size;
    out["best_found"] = outcome.best_found ? set_json(*outcome.best_found) : Json(nullptr);
    out["exhausted"] = outcome.exhausted;
    Json log = Json::array();
    for (const auto& e : outcome.log) {
        Json item;
        item["note"] = e.note;
        Json indices = Json::array();
        for (std::size_t i : e.indices)
            indices.push_back(i + 1);
        item["indices"] = std::move(indices);
        item["stable"] = e.stable;
        log.push_back(std::move(item));
    }
    out["log"] = std::move(log);
    return out.dump(indent);
}

} // namespace qstable
