#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cyrisk/ara.hpp"
#include "cyrisk/impact.hpp"
#include "cyrisk/model.hpp"
#include "cyrisk/transit.hpp"

namespace cyrisk {

// One attack type: arrival process and entrance model (non-targeted types),
// plus portfolio-conditional PNP and impact tables. Targeted types omit the
// arrival/entrance part; their entries come from an attacker's estimates.
struct AttackTypeSpec {
    std::string id;
    std::string name;
    bool targeted = false;

    DistSpec arrival = DistSpec::poisson(0.0);
    std::vector<std::vector<int>> entry_combos;
    std::optional<DistSpec> entry_weights; // Dirichlet over combos

    PortfolioKeyed<PnpModel> pnp;
    PortfolioKeyed<ImpactTable> impacts;
    TransitBudget transit = TransitBudget::acyclic();
};

// Zero-inflated gamma loss surrogate: with probability s(c) the annual loss
// is zero, otherwise Gamma(shape, t(c)), where active controls drive
// s0 -> s0 exp(-alpha_i) and t0 -> t0 + beta_i.
struct SurrogateModel {
    double s0 = 1.0;
    double t0 = 1.0;
    double shape = 1.0;
};

struct ScenarioDefaults {
    int iterations = 10000;          // M
    int attacker_iterations = 10000; // V
    double rho = 1e-7;
    double level = 0.95;
    std::uint64_t seed = 20240905;
};

struct Scenario {
    std::string id;
    std::string version = "1";

    SystemGraph graph;
    std::vector<ImpactCategory> categories;
    std::map<std::string, double> category_weights;

    ControlCatalog catalog;
    InsuranceRegistry insurance;
    Constraints constraints;
    DecisionSpace decision;

    std::vector<AttackTypeSpec> attack_types;
    std::vector<AttackerSpec> attackers;
    std::optional<SurrogateModel> surrogate;

    ScenarioDefaults defaults;

    const AttackTypeSpec& attack_type(const std::string& type_id) const;
    const AttackTypeSpec* find_attack_type(const std::string& type_id) const;

    // Portfolio from a key like "011+A" (state digits in catalog order plus
    // the insurance id) or "011" for no insurance.
    Portfolio make_portfolio(const std::string& key) const;

    // All semantic problems, path-qualified; empty means valid.
    std::vector<std::string> validate() const;
};

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);
std::string scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const std::string& text);

// The bundled automated-driving-system case study.
Scenario builtin_ads_scenario();

} // namespace cyrisk
