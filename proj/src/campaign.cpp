#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cyrisk/risk.hpp"

namespace cyrisk {

double simulate_attack_loss(const Scenario& scenario, const AttackTypeSpec& type,
                            const EntranceModel& entrance, const Portfolio& p, RngStream& s,
                            std::vector<std::uint8_t>* compromised_out) {
    const PnpModel& pnp = type.pnp.at(p, scenario.catalog, "attack '" + type.id + "' PNP table");
    auto compromised = simulate_transit(scenario.graph, entrance, pnp, type.transit, s);

    const InsuranceProduct* ins =
        p.insurance.empty() ? nullptr : &scenario.insurance.at(p.insurance);
    const ImpactTable& impacts =
        type.impacts.at(p, scenario.catalog, "attack '" + type.id + "' impact table");
    auto breakdown =
        simulate_impact(compromised, impacts, scenario.categories, ins, scenario.category_weights, s);

    if (compromised_out) {
        if (compromised_out->size() != compromised.size())
            compromised_out->assign(compromised.size(), 0);
        for (std::size_t i = 0; i < compromised.size(); ++i)
            (*compromised_out)[i] |= compromised[i];
    }
    return breakdown.total;
}

namespace {

struct YearResult {
    double loss = 0.0;
    std::vector<double> by_source;
    std::vector<std::uint8_t> blocks;
};

struct CampaignPlan {
    std::vector<const AttackTypeSpec*> untargeted;
    std::vector<const AttackerSpec*> attackers;
    std::vector<std::string> sources; // untargeted ids then attacker ids
};

CampaignPlan make_plan(const Scenario& scenario) {
    CampaignPlan plan;
    for (const auto& t : scenario.attack_types)
        if (!t.targeted) plan.untargeted.push_back(&t);
    for (const auto& a : scenario.attackers) plan.attackers.push_back(&a);
    for (const auto* t : plan.untargeted) plan.sources.push_back(t->id);
    for (const auto* a : plan.attackers) plan.sources.push_back(a->id);
    return plan;
}

YearResult simulate_year(const Scenario& scenario, const Portfolio& p, const CampaignPlan& plan,
                         const std::map<std::string, TargetingEstimate>& targeting,
                         RngStream year_stream) {
    YearResult year;
    year.by_source.assign(plan.sources.size(), 0.0);
    year.blocks.assign(scenario.graph.blocks.size(), 0);

    std::size_t source = 0;
    for (const auto* type : plan.untargeted) {
        RngStream sub = year_stream.child(type->id);
        EntranceModel entrance;
        entrance.combos = type->entry_combos;
        entrance.weights_dist = type->entry_weights;
        int n_attacks = sample_count(type->arrival, sub);
        double loss = 0.0;
        for (int i = 0; i < n_attacks; ++i)
            loss += simulate_attack_loss(scenario, *type, entrance, p, sub, &year.blocks);
        year.by_source[source++] = loss;
        year.loss += loss;
    }
    for (const auto* attacker : plan.attackers) {
        RngStream sub = year_stream.child(attacker->id);
        double loss =
            simulate_targeted_campaign(*attacker, targeting.at(attacker->id), scenario, p, sub);
        year.by_source[source++] = loss;
        year.loss += loss;
    }
    return year;
}

CampaignResult run_campaign(const Scenario& scenario, const Portfolio& p, int iterations,
                            RngStream stream, int threads, bool parallel) {
    if (iterations < 1) throw std::invalid_argument("simulate_campaign: iterations >= 1");
    CampaignPlan plan = make_plan(scenario);

    CampaignResult result;
    RngStream targeting_stream = stream.child("targeting");
    for (const auto* attacker : plan.attackers) {
        result.targeting.emplace(
            attacker->id,
            estimate_targeting(*attacker, p, scenario.catalog, scenario.defaults.attacker_iterations,
                               targeting_stream.child(attacker->id), parallel ? threads : 1));
    }

    auto n = static_cast<std::size_t>(iterations);
    std::vector<double> losses(n);
    std::vector<std::vector<double>> by_source(n);
    std::vector<std::vector<std::uint8_t>> blocks(n);

    RngStream iter_stream = stream.child("iter");
    auto run_one = [&](int i) {
        auto year = simulate_year(scenario, p, plan, result.targeting,
                                  iter_stream.child(static_cast<std::uint64_t>(i)));
        auto idx = static_cast<std::size_t>(i);
        losses[idx] = year.loss;
        by_source[idx] = std::move(year.by_source);
        blocks[idx] = std::move(year.blocks);
    };

#ifdef _OPENMP
    if (parallel && threads != 1) {
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : omp_get_max_threads())
        for (int i = 0; i < iterations; ++i) run_one(i);
    } else
#endif
    {
        for (int i = 0; i < iterations; ++i) run_one(i);
    }

    result.losses.losses = std::move(losses);
    result.losses.scenario_id = scenario.id;
    result.losses.portfolio_key = p.key();
    result.losses.seed = stream.key();

    std::vector<double> source_totals(plan.sources.size(), 0.0);
    result.block_frequency.assign(scenario.graph.blocks.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < source_totals.size(); ++s) source_totals[s] += by_source[i][s];
        for (std::size_t b = 0; b < result.block_frequency.size(); ++b)
            result.block_frequency[b] += blocks[i][b];
    }
    for (std::size_t s = 0; s < plan.sources.size(); ++s)
        result.mean_loss_by_source[plan.sources[s]] = source_totals[s] / iterations;
    for (double& f : result.block_frequency) f /= iterations;
    return result;
}

} // namespace

CampaignResult simulate_campaign(const Scenario& scenario, const Portfolio& p, int iterations,
                                 RngStream stream, int threads) {
    return run_campaign(scenario, p, iterations, stream, threads, /*parallel=*/true);
}

CampaignResult simulate_campaign_serial(const Scenario& scenario, const Portfolio& p,
                                        int iterations, RngStream stream) {
    return run_campaign(scenario, p, iterations, stream, 1, /*parallel=*/false);
}

} // namespace cyrisk
