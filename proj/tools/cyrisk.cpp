#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "cyrisk/export.hpp"
#include "cyrisk/reproduce.hpp"
#include "cyrisk/risk.hpp"

namespace {

using namespace cyrisk;

struct Options {
    std::string scenario_path;
    std::string builtin;
    std::string portfolio;
    std::string out;
    std::string format = "csv";
    int iterations = -1;          // M
    int attacker_iterations = -1; // V
    double rho = -1;
    double level = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int workers = 0;
};

void add_common(CLI::App* cmd, Options& opt) {
    auto* scenario = cmd->add_option("--scenario", opt.scenario_path, "scenario file (JSON)");
    auto* builtin = cmd->add_option("--builtin", opt.builtin, "bundled scenario id (ads)");
    scenario->excludes(builtin);
    cmd->add_option("--portfolio", opt.portfolio, "portfolio key, e.g. 011+A");
    cmd->add_option("--M", opt.iterations, "campaign Monte Carlo iterations");
    cmd->add_option("--V", opt.attacker_iterations, "attacker Monte Carlo iterations");
    cmd->add_option("--rho", opt.rho, "risk-aversion coefficient");
    cmd->add_option("--level", opt.level, "VaR/CVaR level");
    cmd->add_option("--seed", opt.seed, "random seed")->each([&](const std::string&) {
        opt.seed_given = true;
    });
    cmd->add_option("--workers", opt.workers, "worker threads (0 = all cores, 1 = serial)");
    cmd->add_option("--out", opt.out, "output directory for result files");
    cmd->add_option("--format", opt.format, "export format: csv or tree")
        ->check(CLI::IsMember({"csv", "tree"}));
}

struct Resolved {
    Scenario scenario;
    int iterations;
    int attacker_iterations;
    double rho;
    double level;
    std::uint64_t seed;
};

Resolved resolve(const Options& opt) {
    Resolved r{[&] {
                   if (!opt.builtin.empty()) {
                       if (opt.builtin != "ads")
                           throw ConfigError("unknown builtin scenario '" + opt.builtin + "'");
                       return builtin_ads_scenario();
                   }
                   if (opt.scenario_path.empty())
                       throw ConfigError("one of --scenario or --builtin is required");
                   return load_scenario(opt.scenario_path);
               }(),
               0, 0, 0, 0, 0};
    r.iterations = opt.iterations > 0 ? opt.iterations : r.scenario.defaults.iterations;
    r.attacker_iterations = opt.attacker_iterations > 0 ? opt.attacker_iterations
                                                        : r.scenario.defaults.attacker_iterations;
    r.rho = opt.rho > 0 ? opt.rho : r.scenario.defaults.rho;
    r.level = opt.level >= 0 ? opt.level : r.scenario.defaults.level;
    r.seed = opt.seed_given ? opt.seed : r.scenario.defaults.seed;
    if (r.iterations < 1) throw ConfigError("--M must be >= 1");
    if (r.attacker_iterations < 1) throw ConfigError("--V must be >= 1");
    std::cout << "scenario " << r.scenario.id << " version " << r.scenario.version << ", seed "
              << r.seed << "\n";
    return r;
}

RunMetadata make_meta(const Resolved& r, const Options& opt) {
    RunMetadata m;
    m.scenario_id = r.scenario.id;
    m.scenario_version = r.scenario.version;
    m.engine_version = "1";
    m.seed = r.seed;
    m.iterations = r.iterations;
    m.attacker_iterations = r.attacker_iterations;
    m.rho = r.rho;
    m.level = r.level;
    m.workers = opt.workers;
    return m;
}

void maybe_export(const ResultBundle& bundle, const Options& opt) {
    if (opt.out.empty()) return;
    auto files = export_results(bundle, parse_format(opt.format), opt.out);
    for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

int cmd_assess(const Options& opt) {
    Resolved r = resolve(opt);
    if (opt.portfolio.empty()) throw ConfigError("assess requires --portfolio");
    Portfolio p = r.scenario.make_portfolio(opt.portfolio);

    auto stream = RngStream(r.seed).child("portfolio").child(p.key());
    auto campaign = simulate_campaign(r.scenario, p, r.iterations, stream, opt.workers);
    auto model = fit_loss(campaign.losses, 2);
    auto report = risk_metrics(campaign.losses, model, r.level);
    report.block_frequency = campaign.block_frequency;
    report.mean_loss_by_source = campaign.mean_loss_by_source;

    std::cout << "portfolio " << p.key() << " (cost "
              << format_number(portfolio_cost(p, r.scenario.catalog, r.scenario.insurance))
              << " EUR/year)\n"
              << "  zero-loss probability " << format_number(report.zero_mass) << "\n"
              << "  expected loss " << format_number(report.expected_loss) << " EUR (se "
              << format_number(report.expected_loss_se) << ")\n"
              << "  VaR(" << format_number(r.level) << ") " << format_number(report.var_empirical)
              << " EUR (fitted " << format_number(report.var_fitted) << ")\n"
              << "  CVaR(" << format_number(r.level) << ") "
              << format_number(report.cvar_empirical) << " EUR (fitted "
              << format_number(report.cvar_fitted) << ")\n";

    ResultBundle bundle;
    bundle.meta = make_meta(r, opt);
    bundle.reports.emplace(p.key(), report);
    ResultBundle::LossCurve curve;
    curve.portfolio = p.key();
    curve.sorted_losses = campaign.losses.losses;
    std::sort(curve.sorted_losses.begin(), curve.sorted_losses.end());
    double max_loss = curve.sorted_losses.back();
    for (int i = 0; i <= 200; ++i) {
        double x = max_loss * i / 200.0;
        curve.fitted_cdf.emplace_back(x, model.cdf(x));
    }
    bundle.curves.push_back(std::move(curve));
    for (const auto& [attacker, est] : campaign.targeting)
        bundle.targeting[attacker][p.key()] = est;
    maybe_export(bundle, opt);
    return 0;
}

int cmd_manage(const Options& opt) {
    Resolved r = resolve(opt);
    auto result = optimize(r.scenario, r.scenario.constraints, EvaluatorKind::Simulated, r.rho,
                           r.iterations, RngStream(r.seed), opt.workers);
    std::cout << result.mode << " search over " << result.feasible_count
              << " feasible portfolios\n";
    std::cout << "rank  portfolio  expected_loss  cost  expected_utility\n";
    for (std::size_t i = 0; i < result.ranking.size(); ++i) {
        const auto& ev = result.ranking[i];
        std::cout << (i + 1) << "  " << ev.key << "  " << format_number(ev.expected_loss) << "  "
                  << format_number(ev.cost) << "  " << format_number(ev.expected_utility) << "\n";
    }

    ResultBundle bundle;
    bundle.meta = make_meta(r, opt);
    bundle.ranking = result.ranking;
    maybe_export(bundle, opt);
    return 0;
}

int cmd_targeting(const Options& opt) {
    Resolved r = resolve(opt);
    if (r.scenario.attackers.empty()) throw ConfigError("scenario has no attackers");

    std::vector<Portfolio> portfolios;
    if (!opt.portfolio.empty()) {
        portfolios.push_back(r.scenario.make_portfolio(opt.portfolio));
    } else {
        portfolios = enumerate_feasible(r.scenario.decision, r.scenario.constraints,
                                        r.scenario.catalog, r.scenario.insurance);
    }

    ResultBundle bundle;
    bundle.meta = make_meta(r, opt);
    for (const auto& p : portfolios) {
        auto stream = RngStream(r.seed).child("portfolio").child(p.key()).child("targeting");
        for (const auto& attacker : r.scenario.attackers) {
            auto est = estimate_targeting(attacker, p, r.scenario.catalog, r.attacker_iterations,
                                          stream.child(attacker.id), opt.workers);
            std::cout << attacker.id << " vs " << p.key() << ": tau =";
            for (double t : est.tau) std::cout << " " << format_number(t);
            std::cout << "\n";
            bundle.targeting[attacker.id][p.key()] = est;
        }
    }
    maybe_export(bundle, opt);
    return 0;
}

int cmd_reproduce(const Options& opt) {
    Resolved r = resolve(opt);
    ReproduceOptions ropt;
    ropt.iterations = r.iterations;
    ropt.attacker_iterations = r.attacker_iterations;
    ropt.seed = r.seed;
    ropt.level = r.level;
    ropt.workers = opt.workers;
    auto report = run_reproduction(r.scenario, ropt);

    for (const auto& row : report.rows) std::cout << row.line() << "\n";
    if (!report.interpretation_notes.empty()) {
        std::cout << "interpretation notes for band audit:\n";
        for (const auto& note : report.interpretation_notes) std::cout << "  - " << note << "\n";
    }
    report.bundle.meta = make_meta(r, opt);
    maybe_export(report.bundle, opt);
    return report.all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo cyber-risk assessment and management"};
    app.require_subcommand(1);

    Options opt;
    auto* assess = app.add_subcommand("assess", "risk profile of one portfolio");
    auto* manage = app.add_subcommand("manage", "rank feasible portfolios");
    auto* targeting = app.add_subcommand("targeting", "attacker targeting estimates");
    auto* reproduce = app.add_subcommand("reproduce", "bundled case-study reproduction");
    for (auto* cmd : {assess, manage, targeting, reproduce}) add_common(cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (assess->parsed()) return cmd_assess(opt);
        if (manage->parsed()) return cmd_manage(opt);
        if (targeting->parsed()) return cmd_targeting(opt);
        return cmd_reproduce(opt);
    } catch (const cyrisk::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
