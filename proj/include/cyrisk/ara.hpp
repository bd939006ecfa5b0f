#pragma once

#include <string>
#include <vector>

#include "cyrisk/dist.hpp"
#include "cyrisk/impact.hpp"
#include "cyrisk/model.hpp"
#include "cyrisk/transit.hpp"

namespace cyrisk {

struct Scenario; // scenario.hpp

// What an attacker gains from a successful attack, in euros.
struct GainModel {
    enum class Kind { Notoriety, Records };
    Kind kind = Kind::Notoriety;

    // Notoriety: financial impact (table units scaled by financial_unit)
    // plus casualties valued at a statistical-life figure.
    PortfolioKeyed<DistSpec> financial;
    PortfolioKeyed<DistSpec> casualties;
    double vsl = 0.0;
    double financial_unit = 1.0;

    // Records: stolen record count times value per record.
    PortfolioKeyed<DistSpec> record_count;
    DistSpec record_value = DistSpec::point(0.0);
};

struct AttackerAction {
    std::string attack_type;      // attack-type id (our-system and competitor actions)
    int entry_combo = -1;         // index into the attack type's combos; -1 for competitors
    std::string other_system;     // competitor id, empty for our-system actions

    PortfolioKeyed<DistSpec> success;      // attacker's P(Y=1 | action, portfolio)
    PortfolioKeyed<DistSpec> detect_prob;
    DistSpec detect_cost = DistSpec::point(0.0);
    GainModel gain;

    bool targets_us() const { return other_system.empty(); }
};

struct AttackerSpec {
    std::string id;
    std::string name;
    DistSpec arrival = DistSpec::poisson(0.0);        // attacks per horizon
    DistSpec risk_proneness = DistSpec::point(1e-6);  // H_A

    std::vector<AttackerAction> actions;

    // Distinct our-system attack-type ids in first-appearance order.
    std::vector<std::string> our_attack_types() const;
    // Distinct competitor ids in first-appearance order.
    std::vector<std::string> other_systems() const;
};

// Monte Carlo estimate of where the attacker strikes.
struct TargetingEstimate {
    std::vector<std::string> our_types;     // J our-system attack types
    std::vector<std::string> other_systems;
    std::vector<double> tau;                // simplex over our_types ++ other_systems
    std::vector<std::vector<double>> gamma; // per our type: Dirichlet params over entry combos
    int iterations = 0;

    double tau_ours() const;
};

// One draw of the attacker's random expected utility for an action:
// p * exp(H (pi - c_d)) + (1 - p) * exp(-H c_d), with the expected detection
// cost c_d = p_det * cost_det. Returned in log space; exp() may overflow for
// notoriety-scale gains.
double draw_log_random_expected_utility(const AttackerAction& a, double h_a, const Portfolio& p,
                                        const ControlCatalog& cat, RngStream& s);

double draw_random_expected_utility(const AttackerAction& a, const AttackerSpec& spec,
                                    const Portfolio& p, const ControlCatalog& cat, RngStream& s);

// V argmax draws over the action set; tau from our-type/competitor
// frequencies, gamma from per-combo counts plus one (Laplace smoothing).
// Ties break toward the lowest action index.
TargetingEstimate estimate_targeting(const AttackerSpec& spec, const Portfolio& p,
                                     const ControlCatalog& cat, int iterations, RngStream s,
                                     int threads = 0);

// Algorithm: draw the number of attacks, pick each target via tau; attacks
// on other systems cost us nothing, attacks on us run entry (Dirichlet on
// gamma), transit and impact. Returns the attacker's annual loss
// contribution in euros.
double simulate_targeted_campaign(const AttackerSpec& spec, const TargetingEstimate& est,
                                  const Scenario& scenario, const Portfolio& p, RngStream& s);

} // namespace cyrisk
