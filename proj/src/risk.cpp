#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "cyrisk/math_util.hpp"
#include "cyrisk/risk.hpp"

namespace cyrisk {

RiskReport risk_metrics(const LossSample& sample, const FittedLossModel& model, double level) {
    if (sample.losses.empty()) throw std::invalid_argument("risk_metrics: empty sample");
    if (level < 0 || level >= 1) throw std::invalid_argument("risk_metrics: level in [0, 1)");

    std::vector<double> sorted = sample.losses;
    std::sort(sorted.begin(), sorted.end());

    RiskReport r;
    r.level = level;
    auto stats = math::mean_se(sorted);
    r.expected_loss = stats.mean;
    r.expected_loss_se = stats.se;
    r.zero_mass = static_cast<double>(std::count(sorted.begin(), sorted.end(), 0.0)) /
                  static_cast<double>(sorted.size());
    r.var_empirical = math::quantile_sorted(sorted, level);
    r.cvar_empirical = math::tail_mean_sorted(sorted, level);
    r.var_fitted = model.quantile(level);
    r.cvar_fitted = model.tail_mean(level);
    r.model = model;
    return r;
}

double cara_utility(double total_cost, double rho) {
    if (!(rho > 0)) throw std::invalid_argument("cara_utility: rho > 0");
    double e = rho * total_cost;
    if (e > 709.0) return -std::numeric_limits<double>::infinity();
    return 1.0 - std::exp(e);
}

PortfolioEvaluation evaluate_losses(const Scenario& scenario, const Portfolio& p,
                                    const std::vector<double>& losses, double rho) {
    if (losses.empty()) throw std::invalid_argument("evaluate_losses: empty sample");
    if (!(rho > 0)) throw std::invalid_argument("evaluate_losses: rho > 0");

    PortfolioEvaluation ev;
    ev.portfolio = p;
    ev.key = p.key();
    ev.cost = portfolio_cost(p, scenario.catalog, scenario.insurance);

    auto n = losses.size();
    auto loss_stats = math::mean_se(losses);
    ev.expected_loss = loss_stats.mean;
    ev.expected_loss_se = loss_stats.se;
    ev.zero_mass =
        static_cast<double>(std::count(losses.begin(), losses.end(), 0.0)) / static_cast<double>(n);

    std::vector<double> exponents(n);
    double max_e = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        exponents[i] = rho * (losses[i] + ev.cost);
        max_e = std::max(max_e, exponents[i]);
    }
    ev.log_mean_exp = math::log_sum_exp(exponents) - std::log(static_cast<double>(n));

    if (max_e <= 700.0) {
        std::vector<double> utils(n);
        for (std::size_t i = 0; i < n; ++i) utils[i] = 1.0 - std::exp(exponents[i]);
        auto u = math::mean_se(utils);
        ev.expected_utility = u.mean;
        ev.expected_utility_se = u.se;
    } else {
        // Individual exp() would overflow; the log-space aggregate still works.
        ev.expected_utility = ev.log_mean_exp > 709.0
                                  ? -std::numeric_limits<double>::infinity()
                                  : 1.0 - std::exp(ev.log_mean_exp);
        ev.expected_utility_se = std::numeric_limits<double>::quiet_NaN();
    }
    return ev;
}

PortfolioEvaluation evaluate_portfolio_simulated(const Scenario& scenario, const Portfolio& p,
                                                 int iterations, double rho, RngStream stream,
                                                 int threads) {
    auto campaign = simulate_campaign(scenario, p, iterations, stream, threads);
    return evaluate_losses(scenario, p, campaign.losses.losses, rho);
}

SurrogateEvaluation evaluate_portfolio_surrogate(const SurrogateModel& m, const Portfolio& p,
                                                 const ControlCatalog& cat, int iterations,
                                                 double rho, RngStream stream) {
    if (iterations < 1) throw std::invalid_argument("surrogate: iterations >= 1");
    if (!(rho > 0)) throw std::invalid_argument("surrogate: rho > 0");
    if (p.states.size() != cat.controls.size())
        throw std::invalid_argument("surrogate: portfolio/catalog size mismatch");

    SurrogateEvaluation ev;
    double s0 = m.s0;
    double t = m.t0;
    for (std::size_t i = 0; i < cat.controls.size(); ++i) {
        if (!p.active(i)) continue;
        s0 *= std::exp(-cat.controls[i].alpha);
        t += cat.controls[i].beta;
        ev.annual_cost += cat.controls[i].mcost;
        if (p.states[i] == ControlState::Planned) ev.annual_cost += cat.controls[i].icost;
    }
    ev.zero_loss_prob = 1.0 - s0;
    ev.scale = t;

    DistSpec loss_dist = DistSpec::gamma(m.shape, t);
    std::vector<double> utils(static_cast<std::size_t>(iterations));
    for (int j = 0; j < iterations; ++j) {
        double loss = stream.uniform01() < ev.zero_loss_prob ? 0.0 : sample(loss_dist, stream);
        utils[static_cast<std::size_t>(j)] = cara_utility(loss + ev.annual_cost, rho);
    }
    auto u = math::mean_se(utils);
    ev.expected_utility = u.mean;
    ev.se = u.se;
    return ev;
}

namespace {

PortfolioEvaluation evaluate_one(const Scenario& scenario, const Portfolio& p,
                                 EvaluatorKind evaluator, double rho, int iterations,
                                 RngStream portfolio_stream, int threads) {
    if (evaluator == EvaluatorKind::Simulated)
        return evaluate_portfolio_simulated(scenario, p, iterations, rho,
                                            portfolio_stream.child(p.key()), threads);

    if (!scenario.surrogate)
        throw ConfigError("surrogate evaluator requested but the scenario has no surrogate model");
    auto sev = evaluate_portfolio_surrogate(*scenario.surrogate, p, scenario.catalog, iterations,
                                            rho, portfolio_stream.child(p.key()));
    PortfolioEvaluation ev;
    ev.portfolio = p;
    ev.key = p.key();
    ev.cost = sev.annual_cost;
    ev.expected_loss = (1.0 - sev.zero_loss_prob) * scenario.surrogate->shape * sev.scale;
    ev.expected_utility = sev.expected_utility;
    ev.expected_utility_se = sev.se;
    ev.zero_mass = sev.zero_loss_prob;
    ev.log_mean_exp = std::log1p(-sev.expected_utility);
    return ev;
}

void sort_ranking(std::vector<PortfolioEvaluation>& evals) {
    std::sort(evals.begin(), evals.end(), [](const auto& a, const auto& b) {
        if (a.log_mean_exp != b.log_mean_exp) return a.log_mean_exp < b.log_mean_exp;
        return a.key < b.key;
    });
}

} // namespace

OptimizeResult optimize(const Scenario& scenario, const Constraints& constraints,
                        EvaluatorKind evaluator, double rho, int iterations, RngStream stream,
                        int threads, std::size_t exhaustive_cap, const AnnealOptions& anneal) {
    OptimizeResult result;
    RngStream portfolio_stream = stream.child("portfolio");

    std::vector<Portfolio> feasible;
    bool enumerable = true;
    try {
        auto all = enumerate_all(scenario.decision, scenario.catalog, exhaustive_cap);
        result.space_size = all.size();
        for (const auto& p : all)
            if (is_feasible(p, constraints, scenario.catalog, scenario.insurance).ok)
                feasible.push_back(p);
    } catch (const ConfigError&) {
        enumerable = false;
    }

    if (enumerable) {
        result.feasible_count = feasible.size();
        if (feasible.empty()) throw ConfigError("no feasible portfolio under the constraints");
        result.mode = "exhaustive";
        for (const auto& p : feasible)
            result.ranking.push_back(
                evaluate_one(scenario, p, evaluator, rho, iterations, portfolio_stream, threads));
        sort_ranking(result.ranking);
        return result;
    }

    // Neighborhood search: flip one free control or swap the insurance.
    result.mode = "annealing";
    const auto& space = scenario.decision;
    RngStream walk = stream.child("anneal");

    auto random_portfolio = [&](RngStream& s) {
        Portfolio p = space.base;
        for (const auto& cid : space.free_controls) {
            auto i = static_cast<std::size_t>(scenario.catalog.index_of(cid));
            p.states[i] = s.uniform01() < 0.5 ? ControlState::Planned : ControlState::Absent;
        }
        if (!space.insurance_options.empty()) {
            auto k = static_cast<std::size_t>(s.uniform01() *
                                              static_cast<double>(space.insurance_options.size()));
            p.insurance = space.insurance_options[std::min(k, space.insurance_options.size() - 1)];
        }
        return p;
    };
    auto propose = [&](Portfolio p, RngStream& s) {
        bool flip_control = !space.free_controls.empty() &&
                            (space.insurance_options.size() < 2 || s.uniform01() < 0.7);
        if (flip_control) {
            auto k = static_cast<std::size_t>(s.uniform01() *
                                              static_cast<double>(space.free_controls.size()));
            k = std::min(k, space.free_controls.size() - 1);
            auto i = static_cast<std::size_t>(scenario.catalog.index_of(space.free_controls[k]));
            p.states[i] = p.states[i] == ControlState::Absent ? ControlState::Planned
                                                              : ControlState::Absent;
        } else {
            auto k = static_cast<std::size_t>(s.uniform01() *
                                              static_cast<double>(space.insurance_options.size()));
            p.insurance = space.insurance_options[std::min(k, space.insurance_options.size() - 1)];
        }
        return p;
    };

    Portfolio current;
    bool found = false;
    for (int tries = 0; tries < 10000 && !found; ++tries) {
        current = random_portfolio(walk);
        found = is_feasible(current, constraints, scenario.catalog, scenario.insurance).ok;
    }
    if (!found) throw ConfigError("no feasible portfolio found to start the search");

    std::map<std::string, PortfolioEvaluation> cache;
    auto eval_cached = [&](const Portfolio& p) -> const PortfolioEvaluation& {
        auto key = p.key();
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache
                     .emplace(key, evaluate_one(scenario, p, evaluator, rho, iterations,
                                                portfolio_stream, threads))
                     .first;
        return it->second;
    };

    double current_obj = eval_cached(current).log_mean_exp;
    double temperature = anneal.t0;
    double delta_scale = 0.0; // running mean |delta|, keeps the schedule scale-free
    for (int step = 0; step < anneal.proposals; ++step) {
        Portfolio candidate = propose(current, walk);
        if (!is_feasible(candidate, constraints, scenario.catalog, scenario.insurance).ok) {
            temperature *= anneal.cooling;
            continue;
        }
        double obj = eval_cached(candidate).log_mean_exp;
        double delta = obj - current_obj;
        if (delta != 0.0)
            delta_scale = delta_scale == 0.0 ? std::abs(delta)
                                             : 0.9 * delta_scale + 0.1 * std::abs(delta);
        double t_abs = temperature * (delta_scale > 0.0 ? delta_scale : 1.0);
        if (delta < 0 || walk.uniform01() < std::exp(-delta / t_abs)) {
            current = std::move(candidate);
            current_obj = obj;
        }
        temperature *= anneal.cooling;
    }

    result.feasible_count = cache.size();
    for (auto& [key, ev] : cache) result.ranking.push_back(ev);
    sort_ranking(result.ranking);
    return result;
}

SensitivityResult sensitivity_rho(const Scenario& scenario, const std::vector<double>& grid,
                                  int iterations, RngStream stream, int threads) {
    if (grid.empty()) throw std::invalid_argument("sensitivity_rho: empty grid");
    for (double r : grid)
        if (!(r > 0)) throw std::invalid_argument("sensitivity_rho: rho > 0");

    auto feasible = enumerate_feasible(scenario.decision, scenario.constraints, scenario.catalog,
                                       scenario.insurance);
    if (feasible.empty()) throw ConfigError("no feasible portfolio under the constraints");

    // One loss sample per portfolio, shared across the whole grid.
    RngStream portfolio_stream = stream.child("portfolio");
    std::vector<std::vector<double>> losses;
    losses.reserve(feasible.size());
    for (const auto& p : feasible)
        losses.push_back(simulate_campaign(scenario, p, iterations,
                                           portfolio_stream.child(p.key()), threads)
                             .losses.losses);

    SensitivityResult result;
    result.grid = grid;
    for (double rho : grid) {
        std::vector<PortfolioEvaluation> evals;
        for (std::size_t i = 0; i < feasible.size(); ++i)
            evals.push_back(evaluate_losses(scenario, feasible[i], losses[i], rho));
        sort_ranking(evals);
        std::vector<std::string> keys;
        for (const auto& ev : evals) keys.push_back(ev.key);
        result.rankings.push_back(std::move(keys));
    }
    for (std::size_t g = 1; g < result.rankings.size(); ++g) {
        if (result.rankings[g][0] != result.rankings[0][0]) result.top1_invariant = false;
        if (!result.first_rank_change && result.rankings[g] != result.rankings[0])
            result.first_rank_change = grid[g];
    }
    return result;
}

DistSpec curve_to_pnp(const std::vector<std::pair<double, double>>& curve, double intensity,
                      double concentration) {
    if (curve.size() < 2) throw std::invalid_argument("curve_to_pnp: need at least two points");
    if (!(concentration > 2)) throw std::invalid_argument("curve_to_pnp: concentration > 2");

    std::vector<std::pair<double, double>> pts = curve;
    std::sort(pts.begin(), pts.end());
    for (const auto& [x, acc] : pts)
        if (acc < 0 || acc > 1)
            throw std::invalid_argument("curve_to_pnp: accuracy outside [0, 1]");
    if (intensity < pts.front().first || intensity > pts.back().first)
        throw std::invalid_argument("curve_to_pnp: intensity outside the curve's range");

    double acc = pts.back().second;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (intensity <= pts[i].first) {
            double x0 = pts[i - 1].first, x1 = pts[i].first;
            double y0 = pts[i - 1].second, y1 = pts[i].second;
            acc = x1 == x0 ? y1 : y0 + (y1 - y0) * (intensity - x0) / (x1 - x0);
            break;
        }
    }
    // Beta with mode at q = 1 - accuracy and the requested concentration.
    double q = 1.0 - acc;
    return DistSpec::beta(q * (concentration - 2.0) + 1.0, (1.0 - q) * (concentration - 2.0) + 1.0);
}

} // namespace cyrisk
