#pragma once

#include <map>
#include <string>
#include <vector>

#include "cyrisk/dist.hpp"
#include "cyrisk/model.hpp"
#include "cyrisk/rng.hpp"

namespace cyrisk {

enum class ImpactScope { Global, Separable };
enum class ImpactAggregation { Sum, Max };

struct ImpactCategory {
    std::string id;
    std::string name;
    ImpactScope scope = ImpactScope::Global;
    ImpactAggregation aggregation = ImpactAggregation::Sum; // separable only
    double unit_to_euros = 1.0; // e.g. 1000 for Keuros, downtime cost per hour
};

// Impact distributions for one (attack type, portfolio subset): one global
// spec per global category, one per-block spec per separable category.
// Categories absent from both maps do not apply to the attack type.
struct ImpactTable {
    std::map<std::string, DistSpec> global;                    // category id -> spec
    std::map<std::string, std::map<int, DistSpec>> separable;  // category id -> block -> spec
};

struct ImpactBreakdown {
    double total = 0.0;                        // euros, after insurance and weights
    std::map<std::string, double> retained;    // per-category retained euros
    std::map<std::string, double> gross;       // per-category euros before insurance
};

// Monetized loss of one attack given the compromise indicators. Separable
// categories are drawn per compromised block and aggregated by their rule
// before monetization; insurance retains (1 - covered_fraction) of each
// category; categories combine as a weighted sum.
ImpactBreakdown simulate_impact(const std::vector<std::uint8_t>& compromised,
                                const ImpactTable& table,
                                const std::vector<ImpactCategory>& categories,
                                const InsuranceProduct* insurance,
                                const std::map<std::string, double>& weights, RngStream& s);

} // namespace cyrisk
