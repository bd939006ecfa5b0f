#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cyrisk/export.hpp"
#include "cyrisk/risk.hpp"

namespace cyrisk {

struct CriterionResult {
    std::string id;
    std::string name;
    bool pass = false;
    bool skipped = false; // not enough samples for a meaningful check
    std::string detail;

    std::string line() const; // "PASS criterion-3 ..." one-liner
};

struct ReproduceReport {
    std::vector<CriterionResult> rows;
    ResultBundle bundle;
    bool all_pass = true;
    // Emitted alongside failing magnitude criteria so bands can be audited
    // against the modeling choices instead of silently passing.
    std::vector<std::string> interpretation_notes;
};

struct ReproduceOptions {
    int iterations = 10000;          // M
    int attacker_iterations = 10000; // V
    std::uint64_t seed = 0;          // 0 -> scenario default
    double level = 0.95;
    int workers = 0;
    int ranking_seeds = 5; // distinct seeds for the ranking criteria
};

// Full case-study pipeline: feasibility, costs, exhaustive ranking across
// seeds, baseline and optimal risk profiles, and the rho sensitivity scan.
// Each acceptance row gets a pass/fail line with its pinned tolerance.
ReproduceReport run_reproduction(const Scenario& scenario, const ReproduceOptions& opt);

} // namespace cyrisk
