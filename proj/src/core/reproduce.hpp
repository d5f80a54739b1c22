#pragma once

#include <string>
#include <vector>

#include "exec.hpp"
#include "rank.hpp"

namespace qstable {

struct ReproduceCheck {
    std::string name;
    bool pass = false;
    double ms = 0.0;
    std::string detail;
};

struct ReproduceReport {
    std::vector<ReproduceCheck> checks;
    bool all_pass = true;
    double total_ms = 0.0;
};

// Runs the headline verifications at desk scale: the bipartite triple-state
// example with its constraint matrix written out, the weight-class Fourier
// sets for dims (2,2,2), (2,2,3), (3,3), the genuine-entanglement variant on
// three qubits, the W-operator bases for n = 3..5 with subset draws, and
// (opt-in) the n = 6 one-vs-rest sweep, which takes minutes rather than
// milliseconds.
ReproduceReport run_reproduce(bool include_n6 = false, const TolerancePolicy& tol = {},
                              const ExecPolicy& exec = {});

std::string render_table(const ReproduceReport& report);
std::string to_json(const ReproduceReport& report, int indent = 2);

} // namespace qstable
