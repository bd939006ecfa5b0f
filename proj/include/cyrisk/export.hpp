#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cyrisk/risk.hpp"

namespace cyrisk {

struct RunMetadata {
    std::string scenario_id;
    std::string scenario_version;
    std::string engine_version;
    std::uint64_t seed = 0;
    int iterations = 0;          // M
    int attacker_iterations = 0; // V
    double rho = 0.0;
    double level = 0.0;
    int workers = 0;
};

// Everything a run produces, in exportable form. The metadata is sufficient
// to reproduce the bundle bit-identically.
struct ResultBundle {
    struct LossCurve {
        std::string portfolio;
        std::vector<double> sorted_losses;                // empirical curve
        std::vector<std::pair<double, double>> fitted_cdf; // (loss, F(loss))
    };

    RunMetadata meta;
    std::map<std::string, RiskReport> reports; // portfolio key -> report
    std::vector<PortfolioEvaluation> ranking;  // best first
    std::vector<LossCurve> curves;
    // attacker id -> portfolio key -> estimate
    std::map<std::string, std::map<std::string, TargetingEstimate>> targeting;
};

enum class ExportFormat { Csv, Tree };

ExportFormat parse_format(const std::string& name); // "csv" | "tree"

// Writes the bundle under `dir`: comma-delimited UTF-8 tables for Csv, a
// single structured-tree file mirroring the bundle's field names for Tree.
// Identical bundles produce byte-identical files.
std::vector<std::string> export_results(const ResultBundle& bundle, ExportFormat format,
                                        const std::string& dir);

// Shortest round-trip decimal representation (deterministic across runs).
std::string format_number(double v);

} // namespace cyrisk
