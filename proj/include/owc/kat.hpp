#pragma once

// Known-answer checks: an 8-subcarrier 16-QAM frame traced step by step
// through both mixed-waveform transmit/receive chains, with every
// intermediate sequence compared against embedded reference tables.

#include "owc/spectral.hpp"

#include <string>
#include <vector>

namespace owc {

struct KatTableResult {
    std::string table;
    bool pass = true;
    double max_err = 0.0;
    int first_bad = -1; // index of the first differing element
    cpx got{};
    cpx want{};
};

struct KatReport {
    std::vector<KatTableResult> tables;
    bool all_pass = true;
};

/// Run both traces. Reference entries are compared component-wise at
/// `tol` (absolute). `perturb_table`, when non-empty, offsets the first
/// reference entry of the named table by +0.1 -- a hook for testing the
/// harness itself.
KatReport run_known_answer_checks(double tol = 0.005, const std::string& perturb_table = "");

} // namespace owc
