#pragma once

#include <string>

#include "entanglement.hpp"
#include "search.hpp"
#include "stability.hpp"
#include "states.hpp"

namespace qstable {

// State sets travel as
//   { "dims": [2,2], "label": "...", "states": [ { "amps": [[re,im], ...] }, ... ] }
// with amplitudes in flat-index order. Party and state indices in every other
// document are 1-based.
std::string to_json(const StateSet& set, int indent = 2);
StateSet state_set_from_json(const std::string& text, double orth_eps = 1e-10);

std::string to_json(const StabilityReport& report, int indent = 2);

// Hermitian matrices as row-major nested [re, im] arrays.
std::string to_json(const PovmCertificate& cert, int indent = 2);

std::string bounds_json(const SystemShape& shape, int indent = 2);

// Per-state Schmidt profiles for the whole set.
std::string entanglement_json(const StateSet& set, const TolerancePolicy& tol = {}, int indent = 2);

std::string to_json(const SearchOutcome& outcome, const SearchConfig& cfg, int indent = 2);

} // namespace qstable
