#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyrisk/ara.hpp"
#include "cyrisk/model.hpp"
#include "cyrisk/scenario.hpp"

namespace cyrisk {

struct LossSample {
    std::vector<double> losses; // annual, euros, >= 0
    std::string scenario_id;
    std::string portfolio_key;
    std::uint64_t seed = 0;
};

struct CampaignResult {
    LossSample losses;
    std::map<std::string, double> mean_loss_by_source; // attack type / attacker id -> euros
    std::vector<double> block_frequency; // fraction of years each block was compromised
    std::map<std::string, TargetingEstimate> targeting; // per attacker id
};

// One attack end to end: transit with the type's PNP table for the
// portfolio, then impacts under the portfolio's insurance.
double simulate_attack_loss(const Scenario& scenario, const AttackTypeSpec& type,
                            const EntranceModel& entrance, const Portfolio& p, RngStream& s,
                            std::vector<std::uint8_t>* compromised_out = nullptr);

// M simulated years: non-targeted attack types via their arrival processes,
// targeted attackers via their targeting estimates. threads: 1 forces the
// serial reference path, 0 uses all cores; results are identical either way.
CampaignResult simulate_campaign(const Scenario& scenario, const Portfolio& p, int iterations,
                                 RngStream stream, int threads = 0);

// Serial reference implementation (same contract, no OpenMP).
CampaignResult simulate_campaign_serial(const Scenario& scenario, const Portfolio& p,
                                        int iterations, RngStream stream);

struct FittedLossModel {
    struct Component {
        double weight = 1.0;
        double shape = 1.0;
        double scale = 1.0;
    };
    double zero_mass = 0.0;
    std::vector<Component> components;
    double log_likelihood = 0.0;
    bool converged = true;

    double mean() const;
    double cdf(double x) const;
    double quantile(double p) const; // bisection on cdf
    double tail_mean(double level) const;
};

// Zero mass from the empirical zero fraction; positive part by gamma MLE
// (one component) or EM (mixture). Falls back to a single component when EM
// fails to converge.
FittedLossModel fit_loss(const LossSample& sample, int n_components = 1);

struct RiskReport {
    double level = 0.95;
    double zero_mass = 0.0;
    double expected_loss = 0.0;
    double expected_loss_se = 0.0;
    double var_empirical = 0.0;
    double cvar_empirical = 0.0;
    double var_fitted = 0.0;
    double cvar_fitted = 0.0;
    std::optional<FittedLossModel> model;
    std::vector<double> block_frequency;
    std::map<std::string, double> mean_loss_by_source;
};

RiskReport risk_metrics(const LossSample& sample, const FittedLossModel& model, double level);

// CARA utility 1 - exp(rho * total_cost); -inf when the exponent would
// overflow, so orderings stay valid.
double cara_utility(double total_cost, double rho);

struct PortfolioEvaluation {
    Portfolio portfolio;
    std::string key;
    double cost = 0.0;
    double expected_loss = 0.0;
    double expected_loss_se = 0.0;
    double expected_utility = 0.0;
    double expected_utility_se = 0.0;
    // log E[exp(rho (l + cost))]; expected utility is 1 - exp of this, and
    // ranking by it ascending is overflow-safe.
    double log_mean_exp = 0.0;
    double zero_mass = 0.0;
};

PortfolioEvaluation evaluate_portfolio_simulated(const Scenario& scenario, const Portfolio& p,
                                                 int iterations, double rho, RngStream stream,
                                                 int threads = 0);

// Re-derives the utility statistics of an existing loss sample under rho.
PortfolioEvaluation evaluate_losses(const Scenario& scenario, const Portfolio& p,
                                    const std::vector<double>& losses, double rho);

struct SurrogateEvaluation {
    double expected_utility = 0.0;
    double se = 0.0;
    double zero_loss_prob = 0.0;
    double scale = 0.0;
    double annual_cost = 0.0;
};

// Monte Carlo expected utility under the zero-inflated gamma surrogate.
SurrogateEvaluation evaluate_portfolio_surrogate(const SurrogateModel& m, const Portfolio& p,
                                                 const ControlCatalog& cat, int iterations,
                                                 double rho, RngStream stream);

enum class EvaluatorKind { Simulated, Surrogate };

// The temperature is relative to the running magnitude of objective deltas,
// so the schedule works for any rho without tuning.
struct AnnealOptions {
    int proposals = 2000;
    double t0 = 2.0;        // initial temperature in units of the typical delta
    double cooling = 0.998; // per-proposal decay
};

struct OptimizeResult {
    std::vector<PortfolioEvaluation> ranking; // best first
    std::string mode;                         // "exhaustive" or "annealing"
    std::size_t feasible_count = 0;
    std::size_t space_size = 0;
};

// Exhaustive evaluation when the feasible set fits under the cap, otherwise
// simulated-annealing neighborhood search over single-control flips and
// insurance swaps.
OptimizeResult optimize(const Scenario& scenario, const Constraints& constraints,
                        EvaluatorKind evaluator, double rho, int iterations, RngStream stream,
                        int threads = 0, std::size_t exhaustive_cap = kEnumerationCap,
                        const AnnealOptions& anneal = {});

struct SensitivityResult {
    std::vector<double> grid;
    std::vector<std::vector<std::string>> rankings; // portfolio keys per grid point
    bool top1_invariant = true;
    std::optional<double> first_rank_change; // rho where any rank first differs
};

SensitivityResult sensitivity_rho(const Scenario& scenario, const std::vector<double>& grid,
                                  int iterations, RngStream stream, int threads = 0);

// Security-evaluation-curve elicitation: interpolate accuracy at the attack
// intensity, set q = 1 - accuracy, and return the beta with that mode and
// concentration k.
DistSpec curve_to_pnp(const std::vector<std::pair<double, double>>& curve, double intensity,
                      double concentration);

} // namespace cyrisk
