#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "cyrisk/reproduce.hpp"

namespace cyrisk {

namespace {

constexpr const char* kOptimalKey = "011+A";
constexpr const char* kBaselineKey = "000+A";
const std::vector<std::string> kTop3 = {"011+A", "110+B", "110+A"};

bool within_rel(double value, double target, double rel) {
    return std::abs(value - target) <= rel * std::abs(target);
}

std::string fmt(double v) { return format_number(v); }

struct Runner {
    const Scenario& scenario;
    const ReproduceOptions& opt;
    std::uint64_t base_seed;
    std::map<std::pair<std::uint64_t, std::string>, CampaignResult> cache;

    const CampaignResult& campaign(std::uint64_t seed, const std::string& key) {
        auto it = cache.find({seed, key});
        if (it == cache.end()) {
            Portfolio p = scenario.make_portfolio(key);
            RngStream stream = RngStream(seed).child("portfolio").child(key);
            it = cache
                     .emplace(std::make_pair(seed, key),
                              simulate_campaign(scenario, p, opt.iterations, stream, opt.workers))
                     .first;
        }
        return it->second;
    }

    // Same evaluation and ordering as the optimizer, fed from the cache.
    std::vector<PortfolioEvaluation> ranking(std::uint64_t seed, double rho,
                                             const std::vector<Portfolio>& feasible) {
        std::vector<PortfolioEvaluation> evals;
        for (const auto& p : feasible)
            evals.push_back(
                evaluate_losses(scenario, p, campaign(seed, p.key()).losses.losses, rho));
        std::sort(evals.begin(), evals.end(), [](const auto& a, const auto& b) {
            if (a.log_mean_exp != b.log_mean_exp) return a.log_mean_exp < b.log_mean_exp;
            return a.key < b.key;
        });
        return evals;
    }
};

std::vector<std::string> interpretation_ledger() {
    return {
        "expected loss is the retained annual loss after insurance recoveries; portfolio cost "
        "is reported separately and not added to the loss",
        "portfolio cost = implementation cost of newly planned controls + insurance premium; "
        "maintenance costs are zero in the bundled case study",
        "downtime is monetized at 100 euros per hour using the longest-down block per attack",
        "financial and equipment impact tables are in thousands of euros",
        "an annual loss sums the retained losses of every attack arriving in that simulated year",
        "targeted attackers choose among their actions by Monte Carlo argmax of random expected "
        "utilities; target/entry frequencies drive their campaigns",
    };
}

} // namespace

std::string CriterionResult::line() const {
    std::string status = skipped ? "SKIP" : (pass ? "PASS" : "FAIL");
    return status + " " + id + " " + name + ": " + detail;
}

ReproduceReport run_reproduction(const Scenario& scenario, const ReproduceOptions& opt) {
    ReproduceReport report;
    Runner run{scenario, opt, opt.seed ? opt.seed : scenario.defaults.seed, {}};
    bool enough_samples = opt.iterations >= 1000;

    auto add = [&](CriterionResult r) {
        if (!r.pass && !r.skipped) report.all_pass = false;
        report.rows.push_back(std::move(r));
    };
    auto skip = [&](const std::string& id, const std::string& name) {
        add({id, name, false, true, "insufficient samples (need M >= 1000)"});
    };

    // 1: feasible portfolio count under the budget.
    auto all = enumerate_all(scenario.decision, scenario.catalog);
    std::vector<Portfolio> feasible;
    for (const auto& p : all)
        if (is_feasible(p, scenario.constraints, scenario.catalog, scenario.insurance).ok)
            feasible.push_back(p);
    add({"1", "feasible-count", all.size() == 16 && feasible.size() == 12, false,
         fmt(static_cast<double>(feasible.size())) + " of " +
             fmt(static_cast<double>(all.size())) + " portfolios feasible (expected 12 of 16)"});

    // 2: decision costs of the three best portfolios, exact.
    {
        struct Expect {
            const char* key;
            double cost;
        };
        const Expect expected[] = {{"011+A", 2300.0}, {"110+B", 2950.0}, {"110+A", 1800.0}};
        bool ok = true;
        std::ostringstream detail;
        for (const auto& e : expected) {
            double c = portfolio_cost(scenario.make_portfolio(e.key), scenario.catalog,
                                      scenario.insurance);
            ok = ok && c == e.cost;
            detail << e.key << "=" << fmt(c) << " (expected " << fmt(e.cost) << ") ";
        }
        add({"2", "portfolio-costs", ok, false, detail.str()});
    }

    // 3 + 4: exhaustive ranking across distinct seeds at rho = 1e-7.
    std::vector<std::vector<PortfolioEvaluation>> seed_rankings;
    if (enough_samples) {
        for (int k = 0; k < opt.ranking_seeds; ++k)
            seed_rankings.push_back(run.ranking(run.base_seed + static_cast<std::uint64_t>(k),
                                                1e-7, feasible));

        bool top1_ok = true;
        std::ostringstream d3;
        for (const auto& r : seed_rankings) {
            top1_ok = top1_ok && r.front().key == kOptimalKey;
            d3 << r.front().key << " ";
        }
        add({"3", "optimal-portfolio", top1_ok, false,
             "top-1 per seed: " + d3.str() + "(expected " + kOptimalKey + " for all " +
                 fmt(opt.ranking_seeds) + " seeds)"});

        int matches = 0;
        for (const auto& r : seed_rankings) {
            std::vector<std::string> top3 = {r[0].key, r[1].key, r[2].key};
            std::vector<std::string> want = kTop3;
            std::sort(top3.begin(), top3.end());
            std::sort(want.begin(), want.end());
            if (top3 == want) ++matches;
        }
        add({"4", "top3-set", matches >= opt.ranking_seeds - 1, false,
             fmt(matches) + " of " + fmt(opt.ranking_seeds) +
                 " seeds match the expected top-3 set (need >= " + fmt(opt.ranking_seeds - 1) +
                 ")"});
    } else {
        skip("3", "optimal-portfolio");
        skip("4", "top3-set");
    }

    // 5: baseline configuration risk profile.
    if (enough_samples) {
        const auto& c = run.campaign(run.base_seed, kBaselineKey);
        auto model = fit_loss(c.losses, 2);
        auto r = risk_metrics(c.losses, model, opt.level);
        bool zero_ok = r.zero_mass == 0.0;
        bool var_ok = within_rel(r.var_empirical, 1.32e6, 0.10);
        bool cvar_ok = within_rel(r.cvar_empirical, 1.498e6, 0.10);
        add({"5", "baseline-risk", zero_ok && var_ok && cvar_ok, false,
             "zero-mass=" + fmt(r.zero_mass) + " (expected 0), VaR=" + fmt(r.var_empirical) +
                 " (1.32e6 +/-10%), CVaR=" + fmt(r.cvar_empirical) + " (1.498e6 +/-10%)"});
        if (!(zero_ok && var_ok && cvar_ok))
            report.interpretation_notes = interpretation_ledger();
        report.bundle.reports.emplace(kBaselineKey, r);
    } else {
        skip("5", "baseline-risk");
    }

    // 6: optimal-portfolio risk profile.
    if (enough_samples) {
        const auto& c = run.campaign(run.base_seed, kOptimalKey);
        auto model = fit_loss(c.losses, 2);
        auto r = risk_metrics(c.losses, model, opt.level);
        bool zero_ok = std::abs(r.zero_mass - 0.174) <= 0.03;
        bool var_ok = within_rel(r.var_empirical, 59520.0, 0.15);
        bool cvar_ok = within_rel(r.cvar_empirical, 72756.0, 0.15);
        bool mean_ok = within_rel(r.expected_loss, 22834.59, 0.15);
        add({"6", "optimal-risk", zero_ok && var_ok && cvar_ok && mean_ok, false,
             "zero-mass=" + fmt(r.zero_mass) + " (0.174 +/-0.03), VaR=" + fmt(r.var_empirical) +
                 " (59520 +/-15%), CVaR=" + fmt(r.cvar_empirical) +
                 " (72756 +/-15%), E[loss]=" + fmt(r.expected_loss) + " (22834.59 +/-15%)"});
        if (!(zero_ok && var_ok && cvar_ok && mean_ok) && report.interpretation_notes.empty())
            report.interpretation_notes = interpretation_ledger();
        report.bundle.reports.emplace(kOptimalKey, r);
    } else {
        skip("6", "optimal-risk");
    }

    // 7: risk-aversion sensitivity over the rho grid.
    if (enough_samples) {
        const std::vector<double> grid = {1e-7, 1e-6, 1e-5, 1e-4, 3e-4, 1e-3};
        std::vector<std::vector<std::string>> keys_per_rho;
        for (double rho : grid) {
            auto r = run.ranking(run.base_seed, rho, feasible);
            std::vector<std::string> keys;
            for (const auto& ev : r) keys.push_back(ev.key);
            keys_per_rho.push_back(std::move(keys));
        }
        const auto& base = keys_per_rho.front();
        bool top1_invariant = true;
        bool swap_found = false;
        double swap_rho = 0.0;
        for (std::size_t g = 1; g < grid.size(); ++g) {
            if (keys_per_rho[g][0] != base[0]) top1_invariant = false;
            if (grid[g] > 1e-4 && !swap_found && keys_per_rho[g][1] == base[2] &&
                keys_per_rho[g][2] == base[1]) {
                swap_found = true;
                swap_rho = grid[g];
            }
        }
        add({"7", "rho-sensitivity", top1_invariant && swap_found, false,
             std::string("top-1 invariant=") + (top1_invariant ? "yes" : "no") +
                 ", ranks 2-3 swap above rho=1e-4: " +
                 (swap_found ? "at rho=" + fmt(swap_rho) : "not observed")});
    } else {
        skip("7", "rho-sensitivity");
    }

    // Bundle assembly from the base-seed artifacts.
    report.bundle.meta.scenario_id = scenario.id;
    report.bundle.meta.scenario_version = scenario.version;
    report.bundle.meta.engine_version = "1";
    report.bundle.meta.seed = run.base_seed;
    report.bundle.meta.iterations = opt.iterations;
    report.bundle.meta.attacker_iterations = opt.attacker_iterations;
    report.bundle.meta.rho = 1e-7;
    report.bundle.meta.level = opt.level;
    report.bundle.meta.workers = opt.workers;
    if (!seed_rankings.empty()) report.bundle.ranking = seed_rankings.front();

    for (const char* key : {kBaselineKey, kOptimalKey}) {
        auto it = run.cache.find({run.base_seed, key});
        if (it == run.cache.end()) continue;
        const auto& c = it->second;
        auto rit = report.bundle.reports.find(key);

        ResultBundle::LossCurve curve;
        curve.portfolio = key;
        curve.sorted_losses = c.losses.losses;
        std::sort(curve.sorted_losses.begin(), curve.sorted_losses.end());
        if (rit != report.bundle.reports.end() && rit->second.model) {
            const auto& model = *rit->second.model;
            double max_loss = curve.sorted_losses.back();
            for (int i = 0; i <= 200; ++i) {
                double x = max_loss * static_cast<double>(i) / 200.0;
                curve.fitted_cdf.emplace_back(x, model.cdf(x));
            }
        }
        report.bundle.curves.push_back(std::move(curve));
        for (const auto& [attacker, est] : c.targeting)
            report.bundle.targeting[attacker][key] = est;
    }
    return report;
}

} // namespace cyrisk
